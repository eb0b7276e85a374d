"""Single-trajectory regime for f451 System Identification module.

The whole sample budget ``T`` is spent on one long trajectory. The threshold
scales with an upper bound ``beta`` on the H-infinity norm of the system,
which must be given (or computed from a known system) up front.
"""
import logging
from typing import Optional

import f451_sysid.constants as const
from f451_sysid.estimators import build_single_design
from f451_sysid.estimators import lse_bound_single
from f451_sysid.estimators import lse_single
from f451_sysid.estimators import sample_floors_single
from f451_sysid.estimators import SampleFloors
from f451_sysid.estimators import threshold_single
from f451_sysid.exceptions import MissingAttributeError
from f451_sysid.hankel import HankelMatrix
from f451_sysid.lti import hinf_norm
from f451_sysid.lti import NoiseSpec
from f451_sysid.lti import RandomSeed
from f451_sysid.lti import simulate_trajectory
from f451_sysid.lti import StateSpaceSystem
from f451_sysid.lti import Trajectory
from f451_sysid.regimes.regime import Regime

__all__ = ["SingleTrajectoryRegime"]

log = logging.getLogger()


class SingleTrajectoryRegime(Regime):
    """Regime with one long trajectory.

    Attributes:
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
            H-infinity norm bound (required for thresholds and floors)
    """

    def __init__(
        self,
        tau: int,
        d_u: int,
        d_y: int,
        noise: NoiseSpec,
        delta: float = const.DEFAULT_DELTA,
        beta: Optional[float] = None,
    ) -> None:
        super().__init__(const.MODE_SINGLE, tau, d_u, d_y, noise, delta)
        self._beta = beta

    @classmethod
    def for_system(
        cls,
        system: StateSpaceSystem,
        tau: int,
        noise: NoiseSpec,
        delta: float = const.DEFAULT_DELTA,
        beta: Optional[float] = None,
    ) -> "SingleTrajectoryRegime":
        """Create regime for a known system, with ``beta`` from its H-infinity norm unless given."""
        if beta is None:
            beta = hinf_norm(system)
            log.debug(f"Using H-infinity norm beta={beta:.6g}")
        return cls(tau, system.d_u, system.d_y, noise, delta, beta)

    @property
    def beta(self) -> Optional[float]:
        """Return 'beta' property."""
        return self._beta

    def _require_beta(self) -> float:
        if self._beta is None:
            log.error("Single-trajectory regime has no 'beta'")
            raise MissingAttributeError(
                "'beta' is required for single-trajectory thresholds."
            )
        return self._beta

    def collect(self, system: StateSpaceSystem, T: int, seed: RandomSeed) -> Trajectory:
        """Simulate one trajectory of length 'T'."""
        return simulate_trajectory(system, self.noise, T, seed)

    def budget(self, data: Trajectory) -> int:
        """Return trajectory length."""
        return len(data)

    def estimate(self, data: Trajectory) -> HankelMatrix:
        """Return least-squares Hankel estimate from one trajectory."""
        return lse_single(build_single_design(data, self.tau))

    def threshold(self, T: int) -> float:
        """Return single-trajectory threshold for budget 'T'."""
        return threshold_single(self.params(T, self._require_beta()))

    def lse_bound(self, T: int) -> float:
        """Return bound on the operator-norm error of the estimate."""
        return lse_bound_single(self.params(T, self._require_beta()))

    def floors(self, system: StateSpaceSystem) -> SampleFloors:
        """Return sample-size floors for 'system'."""
        snH, snR = self._hankel_svals(system)
        return sample_floors_single(self.params(1, self._require_beta()), snH, snR)
