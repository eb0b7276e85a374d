"""Hankel matrix estimators for f451 System Identification module.

This module turns input-output data into an initial (noisy) estimate of the
Hankel matrix, and provides the closed-form thresholds and sample-size floors
that go with each data regime:

- **single trajectory**: one long run of length ``T``; rows are indexed by time
  and the stacked outputs ``(y_t, ..., y_{t+tau-1})`` are regressed on the
  stacked past inputs ``(u_{t-1}, ..., u_{t-tau})``. The estimate is the
  unconstrained least-squares matrix (no Hankel structure is imposed).
- **multiple trajectories**: ``T' = floor(T / (2*tau-1))`` short runs from zero
  state; the output ``y_{2tau}`` of each run is regressed on its reversed inputs
  ``(u_{2tau-1}, ..., u_1)``, which estimates the impulse response row ``G``.
  The Hankel estimate is the structured map applied to that row.

Least squares is solved from the SVD of the regressor matrix, and a design
without full column rank raises ``IllPosedRegressionError``.

Note:
    The sample-size floors ``T0``, ``T1``, ``T2`` are the bare formulas
    (the universal constants are unknown). They are diagnostics only.
"""
import logging
from dataclasses import dataclass
from typing import NamedTuple
from typing import Optional
from typing import Sequence

import numpy as np

import f451_sysid.constants as const
from f451_sysid.exceptions import IllPosedRegressionError
from f451_sysid.exceptions import InvalidArgumentError
from f451_sysid.hankel import hankel_from_impulse
from f451_sysid.hankel import HankelMatrix
from f451_sysid.hankel import ImpulseBlockRow
from f451_sysid.lowrank import svd
from f451_sysid.lti import Trajectory

__all__ = [
    "RegressionDesign",
    "ThresholdParams",
    "SampleFloors",
    "build_single_design",
    "build_multi_design",
    "lse_single",
    "lse_multi",
    "threshold_single",
    "threshold_multi",
    "lse_bound_single",
    "lse_bound_multi",
    "sample_floors_single",
    "sample_floors_multi",
    "trajectory_count",
    "solve_least_squares",
]

log = logging.getLogger()


# =========================================================
#              D O M A I N   T Y P E S
# =========================================================
@dataclass(frozen=True, eq=False)
class RegressionDesign:
    """Stacked regression problem ``responses ~ regressors @ M.T``.

    Attributes:
        responses:
            ``N x q`` array, one response vector per row
        regressors:
            ``N x p`` array, one regressor vector per row
        tau:
            window length used to stack the data
        d_u:
            input dimension
        d_y:
            output dimension
        mode:
            ``'single'`` or ``'multi'``
    """

    responses: np.ndarray
    regressors: np.ndarray
    tau: int
    d_u: int
    d_y: int
    mode: str

    def __post_init__(self) -> None:
        if self.responses.shape[0] != self.regressors.shape[0]:
            raise InvalidArgumentError(
                f"Responses ({self.responses.shape[0]}) and regressors "
                f"({self.regressors.shape[0]}) have different row counts"
            )

    @property
    def sample_count(self) -> int:
        """Return number of regression rows."""
        return int(self.regressors.shape[0])


@dataclass(frozen=True)
class ThresholdParams:
    """Inputs of the threshold and sample-size formulas.

    Attributes:
        sigma_u:
            input standard deviation (> 0)
        sigma_z:
            observation noise standard deviation (>= 0)
        tau:
            window length
        d_u:
            input dimension
        d_y:
            output dimension
        delta:
            failure probability in (0, 1)
        T:
            total sample budget (>= 1)
        beta:
            H-infinity norm bound (single trajectory only)
    """

    sigma_u: float
    sigma_z: float
    tau: int
    d_u: int
    d_y: int
    delta: float
    T: int
    beta: Optional[float] = None


class SampleFloors(NamedTuple):
    """Sample-size floors (bare formulas, no universal constants)."""

    T0: float
    T1: float
    T2: float


def _check_params(p: ThresholdParams, needBeta: bool = False) -> None:
    if not 0.0 < p.delta < 1.0:
        raise InvalidArgumentError(f"delta must be in (0, 1), got {p.delta}")
    if p.T < 1:
        raise InvalidArgumentError(f"T must be >= 1, got {p.T}")
    if not p.sigma_u > 0:
        raise InvalidArgumentError(f"sigma_u must be > 0, got {p.sigma_u}")
    if p.sigma_z < 0:
        raise InvalidArgumentError(f"sigma_z must be >= 0, got {p.sigma_z}")
    if min(p.tau, p.d_u, p.d_y) < 1:
        raise InvalidArgumentError("tau, d_u, d_y must be >= 1")
    if needBeta and (p.beta is None or p.beta < 0):
        raise InvalidArgumentError(
            f"beta (>= 0) is required for single-trajectory formulas, got {p.beta}"
        )


# =========================================================
#              D E S I G N   B U I L D E R S
# =========================================================
def build_single_design(traj: Trajectory, tau: int) -> RegressionDesign:
    """Stack one trajectory into a regression problem.

    One row per ``t = tau+1 ... T-tau+1`` (1-based time): regressor
    ``(u_{t-1}, ..., u_{t-tau})`` and response ``(y_t, ..., y_{t+tau-1})``.

    Args:
        traj:
            trajectory of length ``T >= 2*tau``
        tau:
            window length (>= 1)

    Returns:
        'RegressionDesign' object with ``T - 2*tau + 1`` rows

    Raises:
        InvalidArgumentError: tau < 1 or trajectory too short
    """
    T = len(traj)
    if tau < 1:
        raise InvalidArgumentError(f"tau must be >= 1, got {tau}")
    if T < 2 * tau:
        log.error(f"Trajectory of length {T} is too short for tau={tau}")
        raise InvalidArgumentError(
            f"Trajectory length {T} is too short for tau={tau} (need >= {2 * tau})"
        )

    ts = np.arange(tau + 1, T - tau + 2)  # 1-based time index
    lags = np.arange(tau)
    uIdx = (ts - 2)[:, None] - lags[None, :]
    yIdx = (ts - 1)[:, None] + lags[None, :]
    N = ts.size

    return RegressionDesign(
        responses=traj.outputs[yIdx].reshape(N, tau * traj.d_y),
        regressors=traj.inputs[uIdx].reshape(N, tau * traj.d_u),
        tau=tau,
        d_u=traj.d_u,
        d_y=traj.d_y,
        mode=const.MODE_SINGLE,
    )


def build_multi_design(trajectories: Sequence[Trajectory], tau: int) -> RegressionDesign:
    """Stack many short trajectories into a regression problem.

    One row per trajectory: regressor ``(u_{2tau-1}, ..., u_1)`` (reverse time
    order) and response ``y_{2tau}``. Later samples are ignored.

    Args:
        trajectories:
            non-empty sequence of trajectories, each of length ``>= 2*tau``
        tau:
            window length (>= 1)

    Returns:
        'RegressionDesign' object with one row per trajectory

    Raises:
        InvalidArgumentError: no trajectories, too short, or mixed dimensions
    """
    if tau < 1:
        raise InvalidArgumentError(f"tau must be >= 1, got {tau}")
    if not trajectories:
        raise InvalidArgumentError("Need at least one trajectory")

    d_u, d_y = trajectories[0].d_u, trajectories[0].d_y
    regressors = np.empty((len(trajectories), (2 * tau - 1) * d_u))
    responses = np.empty((len(trajectories), d_y))
    for i, traj in enumerate(trajectories):
        if len(traj) < 2 * tau:
            log.error(f"Trajectory {i} of length {len(traj)} is too short")
            raise InvalidArgumentError(
                f"Trajectory {i} has length {len(traj)} < 2*tau = {2 * tau}"
            )
        if (traj.d_u, traj.d_y) != (d_u, d_y):
            raise InvalidArgumentError(f"Trajectory {i} has mismatched dimensions")

        regressors[i] = traj.inputs[2 * tau - 2 :: -1].reshape(-1)
        responses[i] = traj.outputs[2 * tau - 1]

    return RegressionDesign(
        responses=responses,
        regressors=regressors,
        tau=tau,
        d_u=d_u,
        d_y=d_y,
        mode=const.MODE_MULTI,
    )


# =========================================================
#              L E A S T   S Q U A R E S
# =========================================================
def solve_least_squares(design: RegressionDesign) -> np.ndarray:
    """Return ``M = argmin sum_i ||r_i - M x_i||^2`` via SVD of the regressors.

    Args:
        design:
            regression problem

    Returns:
        ``q x p`` coefficient matrix

    Raises:
        IllPosedRegressionError: regressors do not have full column rank
    """
    X, Y = design.regressors, design.responses
    cols = X.shape[1]
    f = svd(X)
    s = f.singular_values
    rank = int(np.count_nonzero(s >= const.TOL_LSTSQ * s[0])) if s.size and s[0] > 0 else 0
    if rank < cols:
        log.error(f"Regressors have numerical rank {rank} < {cols}")
        raise IllPosedRegressionError(rank, cols)

    coefT = (f.right_vectors / s) @ (f.left_vectors.T @ Y)
    return np.asarray(coefT.T)


def lse_single(design: RegressionDesign) -> HankelMatrix:
    """Return unconstrained least-squares estimate of the Hankel matrix.

    Args:
        design:
            single-trajectory regression problem

    Returns:
        'HankelMatrix' estimate (``tau*d_y x tau*d_u``)
    """
    M = solve_least_squares(design)
    return HankelMatrix(data=M, tau=design.tau, d_u=design.d_u, d_y=design.d_y)


def lse_multi(design: RegressionDesign, tau: int, d_u: int, d_y: int) -> HankelMatrix:
    """Estimate impulse response row by least squares, then map it to a Hankel matrix.

    Args:
        design:
            multi-trajectory regression problem
        tau:
            window length
        d_u:
            input dimension
        d_y:
            output dimension

    Returns:
        'HankelMatrix' estimate

    Raises:
        InvalidArgumentError: design does not match the given dimensions
        IllPosedRegressionError: fewer trajectories than ``(2*tau-1)*d_u`` or
            rank-deficient inputs
    """
    cols = (2 * tau - 1) * d_u
    if design.regressors.shape[1] != cols or design.responses.shape[1] != d_y:
        raise InvalidArgumentError(
            f"Design does not match tau={tau}, d_u={d_u}, d_y={d_y}"
        )
    if design.sample_count < cols:
        log.error(f"{design.sample_count} trajectories < {cols} unknowns per output")
        raise IllPosedRegressionError(design.sample_count, cols)

    G = solve_least_squares(design)
    return hankel_from_impulse(ImpulseBlockRow(data=G, tau=tau, d_u=d_u, d_y=d_y))


# =========================================================
#       T H R E S H O L D S   A N D   B O U N D S
# =========================================================
def trajectory_count(T: int, tau: int) -> int:
    """Return number of short trajectories ``floor(T / (2*tau-1))``."""
    return int(T) // (2 * int(tau) - 1)


def threshold_single(p: ThresholdParams) -> float:
    """Return single-trajectory threshold.

    ``xi = 8 max(beta sqrt(tau), sigma_z) / sigma_u * sqrt((d_y tau + d_u + log(1/delta)) / T)``

    Args:
        p:
            threshold parameters (``beta`` required)

    Returns:
        threshold ``xi``
    """
    _check_params(p, needBeta=True)
    scale = max(p.beta * np.sqrt(p.tau), p.sigma_z) / p.sigma_u  # type: ignore[operator]
    return float(8.0 * scale * np.sqrt((p.d_y * p.tau + p.d_u + np.log(1.0 / p.delta)) / p.T))


def threshold_multi(p: ThresholdParams) -> float:
    """Return multi-trajectory threshold.

    ``xi = 4 sigma_z / sigma_u * sqrt(tau min(d_y, tau) (tau d_u + log(1/delta)) / T)``

    Args:
        p:
            threshold parameters

    Returns:
        threshold ``xi``
    """
    _check_params(p)
    inner = p.tau * min(p.d_y, p.tau) * (p.tau * p.d_u + np.log(1.0 / p.delta)) / p.T
    return float(4.0 * p.sigma_z / p.sigma_u * np.sqrt(inner))


def lse_bound_single(p: ThresholdParams) -> float:
    """Return high-probability bound on ``||H_hat - H||_2`` for one trajectory (``xi / 2``)."""
    return threshold_single(p) / 2.0


def lse_bound_multi(p: ThresholdParams) -> float:
    """Return high-probability bound on ``||H_hat - H||_2`` for many trajectories.

    ``2 sigma_z / sigma_u * sqrt(min(d_y, tau) (tau d_u + log(1/delta)) / T')``

    Args:
        p:
            threshold parameters

    Returns:
        bound (``inf`` when ``T' = 0``)
    """
    _check_params(p)
    nTraj = trajectory_count(p.T, p.tau)
    if nTraj == 0:
        return float("inf")

    inner = min(p.d_y, p.tau) * (p.tau * p.d_u + np.log(1.0 / p.delta)) / nTraj
    return float(2.0 * p.sigma_z / p.sigma_u * np.sqrt(inner))


def _check_svals(s_n_H: float, s_n_Hright: float) -> None:
    if not (s_n_H > 0 and s_n_Hright > 0):
        raise InvalidArgumentError(
            f"Singular values must be > 0, got ({s_n_H}, {s_n_Hright})"
        )


def sample_floors_single(
    p: ThresholdParams, s_n_H: float, s_n_Hright: float
) -> SampleFloors:
    """Return single-trajectory sample-size floors ``(T0, T1, T2)``.

    Args:
        p:
            threshold parameters (``beta`` required)
        s_n_H:
            n-th singular value of the true Hankel matrix
        s_n_Hright:
            n-th singular value of the Hankel matrix without its last block column

    Returns:
        'SampleFloors' tuple
    """
    _check_params(p, needBeta=True)
    _check_svals(s_n_H, s_n_Hright)

    logInv = np.log(1.0 / p.delta)
    T0 = (
        p.tau
        * np.log(p.tau) ** 2
        * (p.d_u**2 * np.log(p.d_u**2 / p.delta) ** 2 + np.log(p.tau))
    )
    common = (
        max(p.beta**2 * p.tau, p.sigma_z**2)  # type: ignore[operator]
        / p.sigma_u**2
        * (p.d_y * p.tau + p.d_u + logInv)
    )
    return SampleFloors(float(T0), float(common / s_n_H**2), float(common / s_n_Hright**2))


def sample_floors_multi(
    p: ThresholdParams, s_n_H: float, s_n_Hright: float
) -> SampleFloors:
    """Return multi-trajectory sample-size floors ``(T0, T1, T2)``.

    Args:
        p:
            threshold parameters
        s_n_H:
            n-th singular value of the true Hankel matrix
        s_n_Hright:
            n-th singular value of the Hankel matrix without its last block column

    Returns:
        'SampleFloors' tuple
    """
    _check_params(p)
    _check_svals(s_n_H, s_n_Hright)

    logInv = np.log(1.0 / p.delta)
    T0 = p.tau * (logInv + (2 * p.tau - 1) * p.d_u)
    common = (
        p.sigma_z**2
        / p.sigma_u**2
        * p.tau
        * min(p.d_y, p.tau)
        * (p.tau * p.d_u + logInv)
    )
    return SampleFloors(float(T0), float(common / s_n_H**2), float(common / s_n_Hright**2))
