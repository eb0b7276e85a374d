"""Base class for data regimes in f451 System Identification module.

A data regime describes how a sample budget ``T`` is turned into data
(one long trajectory, or many short ones), how that data is turned into a
Hankel matrix estimate, and which threshold and sample-size floors go
with it.
"""
import logging
from abc import ABC
from abc import abstractmethod
from typing import Any
from typing import Optional

from f451_sysid.estimators import SampleFloors
from f451_sysid.estimators import ThresholdParams
from f451_sysid.exceptions import InvalidArgumentError
from f451_sysid.hankel import drop_last_block_column
from f451_sysid.hankel import HankelMatrix
from f451_sysid.hankel import true_hankel
from f451_sysid.hokalman import IdentificationResult
from f451_sysid.hokalman import thresholded_ho_kalman
from f451_sysid.lowrank import svd
from f451_sysid.lti import NoiseSpec
from f451_sysid.lti import RandomSeed
from f451_sysid.lti import StateSpaceSystem

__all__ = ["Regime"]

log = logging.getLogger()


class Regime(ABC):
    """Base class for data regimes.

    Attributes:
        regimeName:
            regime name (e.g. 'single', 'multi')
        tau:
            Hankel window length (>= 2)
        d_u:
            input dimension
        d_y:
            output dimension
        noise:
            input and observation noise levels
        delta:
            failure probability used by the threshold
    """

    def __init__(
        self,
        regimeName: str,
        tau: int,
        d_u: int,
        d_y: int,
        noise: NoiseSpec,
        delta: float,
    ) -> None:
        if tau < 2:
            raise InvalidArgumentError(f"tau must be >= 2, got {tau}")
        if min(d_u, d_y) < 1:
            raise InvalidArgumentError(f"d_u, d_y must be >= 1, got ({d_u}, {d_y})")
        if not 0.0 < delta < 1.0:
            raise InvalidArgumentError(f"delta must be in (0, 1), got {delta}")

        self._name = regimeName
        self._tau = tau
        self._du = d_u
        self._dy = d_y
        self._noise = noise
        self._delta = delta

    def __repr__(self) -> str:
        return f"<Regime, name={self._name}, tau={self._tau}, d_u={self._du}, d_y={self._dy}>"

    @property
    def regimeName(self) -> str:
        """Return 'regimeName' property."""
        return self._name

    @property
    def tau(self) -> int:
        """Return 'tau' property."""
        return self._tau

    @property
    def d_u(self) -> int:
        """Return 'd_u' property."""
        return self._du

    @property
    def d_y(self) -> int:
        """Return 'd_y' property."""
        return self._dy

    @property
    def noise(self) -> NoiseSpec:
        """Return 'noise' property."""
        return self._noise

    @property
    def delta(self) -> float:
        """Return 'delta' property."""
        return self._delta

    def params(self, T: int, beta: Optional[float] = None) -> ThresholdParams:
        """Return 'ThresholdParams' for sample budget 'T'."""
        return ThresholdParams(
            sigma_u=self._noise.sigma_u,
            sigma_z=self._noise.sigma_z,
            tau=self._tau,
            d_u=self._du,
            d_y=self._dy,
            delta=self._delta,
            T=T,
            beta=beta,
        )

    def _hankel_svals(self, system: StateSpaceSystem) -> tuple:
        """Return ``(s_n(H), s_n(H_right))`` of the true Hankel matrix."""
        H = true_hankel(system, self._tau)
        n = system.n
        sH = svd(H.data).singular_values
        sR = svd(drop_last_block_column(H)).singular_values
        if sH.size < n or sR.size < n:
            raise InvalidArgumentError(f"tau={self._tau} is too short for order n={n}")
        return float(sH[n - 1]), float(sR[n - 1])

    def identify(self, data: Any, xi: Optional[float] = None) -> IdentificationResult:
        """Estimate Hankel matrix from data and run thresholded Ho-Kalman.

        Args:
            data:
                data in the format returned by ``collect()``
            xi:
                optional threshold override (default: regime threshold)

        Returns:
            'IdentificationResult' object
        """
        H_hat = self.estimate(data)
        if xi is None:
            xi = self.threshold(self.budget(data))
        log.debug(f"{self._name}: identifying with xi={xi:.4g}")
        return thresholded_ho_kalman(H_hat, xi)

    @abstractmethod
    def collect(self, system: StateSpaceSystem, T: int, seed: RandomSeed) -> Any:
        """Stub for 'collect()' method (simulate data for budget 'T')."""
        pass

    @abstractmethod
    def budget(self, data: Any) -> int:
        """Stub for 'budget()' method (sample budget 'T' spent on 'data')."""
        pass

    @abstractmethod
    def estimate(self, data: Any) -> HankelMatrix:
        """Stub for 'estimate()' method (least-squares Hankel estimate)."""
        pass

    @abstractmethod
    def threshold(self, T: int) -> float:
        """Stub for 'threshold()' method."""
        pass

    @abstractmethod
    def lse_bound(self, T: int) -> float:
        """Stub for 'lse_bound()' method (high-probability bound on the estimate's error)."""
        pass

    @abstractmethod
    def floors(self, system: StateSpaceSystem) -> SampleFloors:
        """Stub for 'floors()' method (sample-size floors ``T0, T1, T2``)."""
        pass
