"""Multi-trajectory regime for f451 System Identification module.

The sample budget ``T`` buys ``T' = floor(T / (2*tau-1))`` independent short
trajectories, each started from zero state. Only the first ``2*tau-1``
inputs and the output at time ``2*tau`` of each run are used.
"""
import logging
from typing import List
from typing import Sequence

import f451_sysid.constants as const
from f451_sysid.estimators import build_multi_design
from f451_sysid.estimators import lse_bound_multi
from f451_sysid.estimators import lse_multi
from f451_sysid.estimators import sample_floors_multi
from f451_sysid.estimators import SampleFloors
from f451_sysid.estimators import threshold_multi
from f451_sysid.estimators import trajectory_count
from f451_sysid.hankel import HankelMatrix
from f451_sysid.lti import NoiseSpec
from f451_sysid.lti import RandomSeed
from f451_sysid.lti import simulate_trajectories
from f451_sysid.lti import StateSpaceSystem
from f451_sysid.lti import Trajectory
from f451_sysid.regimes.regime import Regime

__all__ = ["MultiTrajectoryRegime"]

log = logging.getLogger()


class MultiTrajectoryRegime(Regime):
    """Regime with many short trajectories.

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
    """

    def __init__(
        self,
        tau: int,
        d_u: int,
        d_y: int,
        noise: NoiseSpec,
        delta: float = const.DEFAULT_DELTA,
    ) -> None:
        super().__init__(const.MODE_MULTI, tau, d_u, d_y, noise, delta)

    @property
    def runLength(self) -> int:
        """Return length of each simulated trajectory (``2*tau``)."""
        return 2 * self.tau

    def collect(
        self, system: StateSpaceSystem, T: int, seed: RandomSeed
    ) -> List[Trajectory]:
        """Simulate ``floor(T / (2*tau-1))`` trajectories of length ``2*tau``."""
        count = trajectory_count(T, self.tau)
        log.debug(f"Simulating {count} trajectories for T={T}")
        return simulate_trajectories(system, self.noise, count, self.runLength, seed)

    def budget(self, data: Sequence[Trajectory]) -> int:
        """Return sample budget spent on 'data' (``T' * (2*tau-1)``)."""
        return len(data) * (2 * self.tau - 1)

    def estimate(self, data: Sequence[Trajectory]) -> HankelMatrix:
        """Return Hankel estimate mapped from the least-squares impulse response."""
        return lse_multi(build_multi_design(data, self.tau), self.tau, self.d_u, self.d_y)

    def threshold(self, T: int) -> float:
        """Return multi-trajectory threshold for budget 'T'."""
        return threshold_multi(self.params(T))

    def lse_bound(self, T: int) -> float:
        """Return bound on the operator-norm error of the estimate."""
        return lse_bound_multi(self.params(T))

    def floors(self, system: StateSpaceSystem) -> SampleFloors:
        """Return sample-size floors for 'system'."""
        snH, snR = self._hankel_svals(system)
        return sample_floors_multi(self.params(1), snH, snR)
