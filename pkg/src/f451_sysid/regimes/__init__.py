"""Data regimes for f451 System Identification module.

Each regime turns a sample budget into data and data into a Hankel matrix
estimate. Use ``make_regime()`` to get the regime for a given mode.
"""
import logging
from typing import Optional
from typing import Union

import f451_sysid.constants as const
from f451_sysid.exceptions import InvalidArgumentError
from f451_sysid.lti import NoiseSpec
from f451_sysid.lti import StateSpaceSystem
from f451_sysid.regimes.multi import MultiTrajectoryRegime
from f451_sysid.regimes.regime import Regime
from f451_sysid.regimes.single import SingleTrajectoryRegime

__all__ = [
    "Regime",
    "SingleTrajectoryRegime",
    "MultiTrajectoryRegime",
    "make_regime",
]

log = logging.getLogger()

typeDefRegime = Union[SingleTrajectoryRegime, MultiTrajectoryRegime]


def make_regime(
    mode: str,
    tau: int,
    d_u: int,
    d_y: int,
    noise: NoiseSpec,
    delta: float = const.DEFAULT_DELTA,
    beta: Optional[float] = None,
    system: Optional[StateSpaceSystem] = None,
) -> typeDefRegime:
    """Create regime for a given mode.

    In 'single' mode, ``beta`` falls back to the H-infinity norm of 'system'
    when one is given.

    Args:
        mode:
            'single' or 'multi'
        tau:
            Hankel window length
        d_u:
            input dimension
        d_y:
            output dimension
        noise:
            input and observation noise levels
        delta:
            failure probability
        beta:
            H-infinity norm bound (single mode only)
        system:
            optional ground-truth system

    Returns:
        'SingleTrajectoryRegime' or 'MultiTrajectoryRegime' object

    Raises:
        InvalidArgumentError: unknown mode
    """
    if mode == const.MODE_SINGLE:
        if system is not None:
            return SingleTrajectoryRegime.for_system(system, tau, noise, delta, beta)
        return SingleTrajectoryRegime(tau, d_u, d_y, noise, delta, beta)
    if mode == const.MODE_MULTI:
        return MultiTrajectoryRegime(tau, d_u, d_y, noise, delta)

    log.error(f"Unknown regime mode '{mode}'")
    raise InvalidArgumentError(f"Mode must be one of {const.VALID_MODES}, got '{mode}'")
