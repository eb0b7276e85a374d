"""Low-rank matrix utilities for f451 System Identification module.

This module wraps the singular value decomposition and the operations built
on it: best rank-k approximation, hard singular value thresholding (which
defines the effective rank of a noisy estimate), numerical rank, and the
Moore-Penrose pseudoinverse.

Note:
    - Singular vectors follow a fixed sign convention (first non-negligible
      entry of each left singular vector is positive) so that outputs are
      reproducible. Nothing downstream depends on the signs.
    - Thresholding keeps ties (``s_i >= xi``). Singular values below
      ``TOL_RANK * s_1`` are treated as exact zeros, so ``xi = 0`` keeps the
      numerical rank rather than every zero singular value.
"""
import logging
from dataclasses import dataclass
from typing import Any
from typing import Union

import numpy as np
import scipy.linalg

import f451_sysid.constants as const
from f451_sysid.exceptions import InvalidArgumentError
from f451_sysid.exceptions import NumericalFailureError

__all__ = [
    "SvdFactorization",
    "ThresholdedMatrix",
    "svd",
    "rank_k_approx",
    "hard_threshold",
    "pseudoinverse",
    "numerical_rank",
    "effective_rank",
]

log = logging.getLogger()


# =========================================================
#              D O M A I N   T Y P E S
# =========================================================
@dataclass(frozen=True, eq=False)
class SvdFactorization:
    """Compact SVD ``M = U diag(s) V^T``.

    Attributes:
        singular_values:
            non-increasing array of length ``min(rows, cols)``
        left_vectors:
            ``rows x r`` array with orthonormal columns
        right_vectors:
            ``cols x r`` array with orthonormal columns
    """

    singular_values: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray

    @property
    def shape(self) -> tuple:
        """Return shape of the factorized matrix."""
        return (self.left_vectors.shape[0], self.right_vectors.shape[0])

    def truncate(self, k: int) -> np.ndarray:
        """Return ``sum_{i<=k} s_i u_i v_i^T``."""
        return (self.left_vectors[:, :k] * self.singular_values[:k]) @ (
            self.right_vectors[:, :k].T
        )

    def reconstruct(self) -> np.ndarray:
        """Return full reconstruction of the factorized matrix."""
        return self.truncate(self.singular_values.size)


@dataclass(frozen=True, eq=False)
class ThresholdedMatrix:
    """Result of hard singular value thresholding.

    Attributes:
        matrix:
            thresholded matrix ``M(xi)``
        effective_rank:
            number of retained singular values
        threshold:
            threshold ``xi``
        singular_values:
            all singular values of the original matrix
    """

    matrix: np.ndarray
    effective_rank: int
    threshold: float
    singular_values: np.ndarray


# =========================================================
#              C O R E   F U N C T I O N S
# =========================================================
def _fix_signs(U: np.ndarray, V: np.ndarray) -> None:
    """Flip singular pairs in place so each left vector starts positive."""
    for i in range(U.shape[1]):
        col = U[:, i]
        big = np.flatnonzero(np.abs(col) > 1e-12 * max(np.max(np.abs(col)), 1e-300))
        if big.size and col[big[0]] < 0:
            U[:, i] = -col
            V[:, i] = -V[:, i]


def svd(M: Any) -> SvdFactorization:
    """Compute compact SVD with deterministic signs.

    Example:
        >>> f = svd([[3.0, 0.0], [0.0, 1.0]])
        >>> assert np.allclose(f.singular_values, [3.0, 1.0])

    Args:
        M:
            2-D array with finite entries

    Returns:
        'SvdFactorization' object

    Raises:
        InvalidArgumentError: 'M' is not 2-D or has non-finite entries
        NumericalFailureError: SVD did not converge
    """
    arr = np.array(M, dtype=float)
    if arr.ndim != 2:
        raise InvalidArgumentError(f"SVD needs a 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError("SVD needs finite entries")

    rows, cols = arr.shape
    if min(rows, cols) == 0:
        return SvdFactorization(np.zeros(0), np.zeros((rows, 0)), np.zeros((cols, 0)))

    try:
        U, s, Vt = scipy.linalg.svd(arr, full_matrices=False, lapack_driver="gesdd")
    except np.linalg.LinAlgError:
        log.debug("SVD 'gesdd' driver failed, retrying with 'gesvd'")
        try:
            U, s, Vt = scipy.linalg.svd(arr, full_matrices=False, lapack_driver="gesvd")
        except np.linalg.LinAlgError as e:
            log.error(f"SVD did not converge for {rows}x{cols} matrix")
            raise NumericalFailureError("SVD did not converge") from e

    V = Vt.T.copy()
    _fix_signs(U, V)
    return SvdFactorization(singular_values=s, left_vectors=U, right_vectors=V)


def _as_svals(M: Union[np.ndarray, SvdFactorization, Any]) -> np.ndarray:
    if isinstance(M, SvdFactorization):
        return M.singular_values
    arr = np.asarray(M, dtype=float)
    return arr if arr.ndim == 1 else svd(arr).singular_values


def numerical_rank(M: Any, rel_tol: float = const.TOL_RANK) -> int:
    """Return number of singular values ``>= rel_tol * s_1``.

    Args:
        M:
            2-D array, 'SvdFactorization', or 1-D array of singular values
        rel_tol:
            relative tolerance

    Returns:
        numerical rank (0 for an all-zero matrix)
    """
    s = _as_svals(M)
    if s.size == 0 or s[0] <= 0:
        return 0
    return int(np.count_nonzero(s >= rel_tol * s[0]))


def effective_rank(M: Any, xi: float) -> int:
    """Return number of singular values kept by thresholding at ``xi``."""
    s = _as_svals(M)
    if s.size == 0 or s[0] <= 0:
        return 0
    return int(np.count_nonzero((s >= xi) & (s >= const.TOL_RANK * s[0])))


def rank_k_approx(M: Any, k: int) -> np.ndarray:
    """Return best rank-k approximation (Eckart-Young).

    Args:
        M:
            2-D array
        k:
            target rank in ``0 ... min(rows, cols)``

    Returns:
        array of the same shape as ``M``

    Raises:
        InvalidArgumentError: k out of range
    """
    f = svd(M)
    if not 0 <= k <= f.singular_values.size:
        raise InvalidArgumentError(
            f"Rank k={k} out of range 0..{f.singular_values.size}"
        )

    return f.truncate(k)


def hard_threshold(M: Any, xi: float) -> ThresholdedMatrix:
    """Keep singular triplets with ``s_i >= xi``.

    Example:
        >>> out = hard_threshold([[3.0, 0.0], [0.0, 1.0]], 2.0)
        >>> assert out.effective_rank == 1
        >>> assert np.allclose(out.matrix, [[3.0, 0.0], [0.0, 0.0]])

    Args:
        M:
            2-D array
        xi:
            threshold (>= 0)

    Returns:
        'ThresholdedMatrix' object

    Raises:
        InvalidArgumentError: xi < 0
    """
    if not xi >= 0:
        raise InvalidArgumentError(f"Threshold must be >= 0, got {xi}")

    f = svd(M)
    k = effective_rank(f, xi)
    log.debug(f"Thresholding at xi={xi:.4g} keeps {k} singular values")

    return ThresholdedMatrix(
        matrix=f.truncate(k),
        effective_rank=k,
        threshold=float(xi),
        singular_values=f.singular_values,
    )


def pseudoinverse(M: Any, rel_tol: float = const.TOL_PINV) -> np.ndarray:
    """Return Moore-Penrose pseudoinverse via SVD.

    Singular values ``<= rel_tol * s_1`` are treated as zero.

    Args:
        M:
            2-D array
        rel_tol:
            relative cut-off (>= 0)

    Returns:
        array of size ``cols x rows``

    Raises:
        InvalidArgumentError: rel_tol < 0
    """
    if rel_tol < 0:
        raise InvalidArgumentError(f"Tolerance must be >= 0, got {rel_tol}")

    f = svd(M)
    rows, cols = f.shape
    s = f.singular_values
    if s.size == 0 or s[0] <= 0:
        return np.zeros((cols, rows))

    keep = s > rel_tol * s[0]
    return (f.right_vectors[:, keep] / s[keep]) @ f.left_vectors[:, keep].T
