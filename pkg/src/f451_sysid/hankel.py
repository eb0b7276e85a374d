"""Structured matrices for f451 System Identification module.

This module builds the block matrices that link Markov parameters to data:

- the truncated impulse response row ``G = (CB, CAB, ..., CA^{2tau-2}B)``,
- the ``tau x tau`` block Hankel matrix ``H`` with block ``(i,j) = CA^{i+j-2}B``,
  together with the linear map ``G -> H``,
- general block Hankel matrices ``H_{t,tau1,tau2}`` and strictly lower block
  Toeplitz matrices ``T_{t,tau}``, which appear in the single-trajectory
  input-output identity,
- the block-column submatrices used by the Ho-Kalman factorization.

Note:
    ``H_{t,tau1,tau2}`` has size ``tau1*d_y x tau2*d_u`` since each block is
    ``d_y x d_u``. A width of zero (``tau2 = 0``) gives a valid empty matrix.
"""
import logging
from dataclasses import dataclass
from typing import Any

import numpy as np

from f451_sysid.exceptions import InvalidArgumentError
from f451_sysid.lti import markov_parameters
from f451_sysid.lti import StateSpaceSystem

__all__ = [
    "HankelMatrix",
    "ImpulseBlockRow",
    "impulse_block_row",
    "hankel_from_impulse",
    "true_hankel",
    "drop_last_block_column",
    "drop_first_block_column",
    "block_hankel",
    "block_toeplitz",
]

log = logging.getLogger()


# =========================================================
#              D O M A I N   T Y P E S
# =========================================================
@dataclass(frozen=True, eq=False)
class HankelMatrix:
    """Block Hankel matrix (or an unstructured estimate of one).

    Attributes:
        data:
            array of size ``tau*d_y x tau*d_u``
        tau:
            window length (number of block rows and block columns)
        d_u:
            block width
        d_y:
            block height
    """

    data: np.ndarray
    tau: int
    d_u: int
    d_y: int

    def __post_init__(self) -> None:
        if min(self.tau, self.d_u, self.d_y) < 1:
            raise InvalidArgumentError(
                f"tau, d_u, d_y must be >= 1, got ({self.tau}, {self.d_u}, {self.d_y})"
            )
        data = np.array(self.data, dtype=float)
        expected = (self.tau * self.d_y, self.tau * self.d_u)
        if data.shape != expected:
            raise InvalidArgumentError(
                f"Hankel data must have shape {expected}, got {data.shape}"
            )
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    def __repr__(self) -> str:
        return f"<HankelMatrix, tau={self.tau}, d_u={self.d_u}, d_y={self.d_y}>"

    def block(self, i: int, j: int) -> np.ndarray:
        """Return block ``(i, j)`` using 1-based block indices."""
        return self.data[
            (i - 1) * self.d_y : i * self.d_y, (j - 1) * self.d_u : j * self.d_u
        ]

    def with_data(self, data: Any) -> "HankelMatrix":
        """Return new 'HankelMatrix' with same block structure and new data."""
        return HankelMatrix(data=data, tau=self.tau, d_u=self.d_u, d_y=self.d_y)


@dataclass(frozen=True, eq=False)
class ImpulseBlockRow:
    """Truncated impulse response ``(CB, ..., CA^{2tau-2}B)``.

    Attributes:
        data:
            array of size ``d_y x (2*tau-1)*d_u``
        tau:
            window length
        d_u:
            block width
        d_y:
            block height
    """

    data: np.ndarray
    tau: int
    d_u: int
    d_y: int

    def __post_init__(self) -> None:
        if min(self.tau, self.d_u, self.d_y) < 1:
            raise InvalidArgumentError(
                f"tau, d_u, d_y must be >= 1, got ({self.tau}, {self.d_u}, {self.d_y})"
            )
        data = np.array(self.data, dtype=float)
        expected = (self.d_y, (2 * self.tau - 1) * self.d_u)
        if data.shape != expected:
            raise InvalidArgumentError(
                f"Impulse row must have shape {expected} ({2 * self.tau - 1} blocks), got {data.shape}"
            )
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    def __repr__(self) -> str:
        return f"<ImpulseBlockRow, tau={self.tau}, d_u={self.d_u}, d_y={self.d_y}>"

    @classmethod
    def from_array(cls, data: Any, d_u: int) -> "ImpulseBlockRow":
        """Wrap ``d_y x m*d_u`` array, inferring ``tau`` from ``m = 2*tau-1``.

        Args:
            data:
                2-D array
            d_u:
                block width

        Returns:
            new 'ImpulseBlockRow' object

        Raises:
            InvalidArgumentError: number of blocks is not a positive odd integer
        """
        arr = np.atleast_2d(np.asarray(data, dtype=float))
        blocks, rest = divmod(arr.shape[1], d_u)
        if rest or blocks < 1 or blocks % 2 == 0:
            raise InvalidArgumentError(
                f"Impulse row width {arr.shape[1]} is not (2*tau-1)*{d_u}"
            )
        return cls(data=arr, tau=(blocks + 1) // 2, d_u=d_u, d_y=arr.shape[0])

    def block(self, k: int) -> np.ndarray:
        """Return block ``k`` (1-based), i.e. ``CA^{k-1}B`` for a true system."""
        return self.data[:, (k - 1) * self.d_u : k * self.d_u]


# =========================================================
#          C O N S T R U C T I O N   F U N C T I O N S
# =========================================================
def impulse_block_row(system: StateSpaceSystem, tau: int) -> ImpulseBlockRow:
    """Return truncated impulse response of length ``2*tau-1``.

    Args:
        system:
            state-space system
        tau:
            window length (>= 1)

    Returns:
        'ImpulseBlockRow' object

    Raises:
        InvalidArgumentError: tau < 1
    """
    if tau < 1:
        raise InvalidArgumentError(f"tau must be >= 1, got {tau}")

    return ImpulseBlockRow(
        data=np.hstack(markov_parameters(system, 2 * tau - 1)),
        tau=tau,
        d_u=system.d_u,
        d_y=system.d_y,
    )


def hankel_from_impulse(g: ImpulseBlockRow) -> HankelMatrix:
    """Apply the linear map ``G -> H``.

    Block ``(i, j)`` of the result is block ``i + j - 1`` of ``g``, so block row
    ``i`` is the contiguous slice of blocks ``i ... i + tau - 1``.

    Example:
        >>> g = ImpulseBlockRow([[1.0, 0.5, 0.25]], tau=2, d_u=1, d_y=1)
        >>> assert hankel_from_impulse(g).data.tolist() == [[1.0, 0.5], [0.5, 0.25]]

    Args:
        g:
            impulse response row

    Returns:
        'HankelMatrix' object

    Raises:
        InvalidArgumentError: 'g' is not an 'ImpulseBlockRow'
    """
    if not isinstance(g, ImpulseBlockRow):
        raise InvalidArgumentError(f"Expected 'ImpulseBlockRow', got {type(g)}")

    tau, du, dy = g.tau, g.d_u, g.d_y
    data = np.empty((tau * dy, tau * du))
    for i in range(tau):
        data[i * dy : (i + 1) * dy, :] = g.data[:, i * du : (i + tau) * du]

    return HankelMatrix(data=data, tau=tau, d_u=du, d_y=dy)


def true_hankel(system: StateSpaceSystem, tau: int) -> HankelMatrix:
    """Return Hankel matrix of a known system."""
    return hankel_from_impulse(impulse_block_row(system, tau))


def drop_last_block_column(h: HankelMatrix) -> np.ndarray:
    """Return ``H`` without its last block column.

    Args:
        h:
            Hankel matrix with ``tau >= 2``

    Returns:
        array of size ``tau*d_y x (tau-1)*d_u``

    Raises:
        InvalidArgumentError: tau < 2
    """
    if h.tau < 2:
        raise InvalidArgumentError(f"Need tau >= 2 to drop a block column, got {h.tau}")

    return h.data[:, : (h.tau - 1) * h.d_u]


def drop_first_block_column(h: HankelMatrix) -> np.ndarray:
    """Return ``H`` without its first block column.

    Args:
        h:
            Hankel matrix with ``tau >= 2``

    Returns:
        array of size ``tau*d_y x (tau-1)*d_u``

    Raises:
        InvalidArgumentError: tau < 2
    """
    if h.tau < 2:
        raise InvalidArgumentError(f"Need tau >= 2 to drop a block column, got {h.tau}")

    return h.data[:, h.d_u :]


def block_hankel(system: StateSpaceSystem, t: int, tau1: int, tau2: int) -> np.ndarray:
    """Return ``H_{t,tau1,tau2}`` with block ``(i,j) = CA^{t+i+j-2}B``.

    Args:
        system:
            state-space system
        t:
            lag offset (>= 0)
        tau1:
            number of block rows (>= 1)
        tau2:
            number of block columns (>= 0)

    Returns:
        array of size ``tau1*d_y x tau2*d_u``

    Raises:
        InvalidArgumentError: negative offset or sizes
    """
    if t < 0 or tau1 < 1 or tau2 < 0:
        raise InvalidArgumentError(
            f"Need t >= 0, tau1 >= 1, tau2 >= 0, got ({t}, {tau1}, {tau2})"
        )

    dy, du = system.d_y, system.d_u
    out = np.zeros((tau1 * dy, tau2 * du))
    if tau2 == 0:
        return out

    mp = markov_parameters(system, t + tau1 + tau2 - 1)
    for i in range(tau1):
        for j in range(tau2):
            out[i * dy : (i + 1) * dy, j * du : (j + 1) * du] = mp[t + i + j]

    return out


def block_toeplitz(system: StateSpaceSystem, t: int, tau: int) -> np.ndarray:
    """Return strictly lower block Toeplitz ``T_{t,tau}``.

    Block ``(i, j)`` equals ``CA^{t+i-j-1}B`` if ``i > j`` and zero otherwise.

    Args:
        system:
            state-space system
        t:
            lag offset (>= 0)
        tau:
            number of block rows and columns (>= 1)

    Returns:
        array of size ``tau*d_y x tau*d_u``

    Raises:
        InvalidArgumentError: negative offset or tau < 1
    """
    if t < 0 or tau < 1:
        raise InvalidArgumentError(f"Need t >= 0 and tau >= 1, got ({t}, {tau})")

    dy, du = system.d_y, system.d_u
    out = np.zeros((tau * dy, tau * du))
    mp = markov_parameters(system, t + tau - 1)
    for i in range(tau):
        for j in range(i):
            out[i * dy : (i + 1) * dy, j * du : (j + 1) * du] = mp[t + i - j - 1]

    return out
