"""Ho-Kalman realization for f451 System Identification module.

This module recovers state-space matrices ``(A, B, C)`` (up to a similarity
transform) from a Hankel matrix:

- ``ho_kalman()`` factorizes an (exact or denoised) Hankel matrix at a given rank,
- ``thresholded_ho_kalman()`` first applies hard singular value thresholding to a
  noisy estimate, and uses the effective rank as the order estimate,
- ``known_order_ho_kalman()`` is the baseline that projects the estimate onto
  rank ``n`` (true order assumed known) before factorizing.

Note:
    The compact SVD of the Hankel matrix without its last block column is cut at
    ``TOL_HOKALMAN * s_1``. That submatrix can have lower rank than the full
    thresholded matrix, in which case the realization has fewer states than the
    reported order. The 'diagnostics' of the result record both numbers.
"""
import json
import logging
from dataclasses import dataclass
from dataclasses import field
from typing import Any
from typing import Dict
from typing import Tuple

import numpy as np

import f451_sysid.constants as const
from f451_sysid.exceptions import InvalidArgumentError
from f451_sysid.hankel import drop_first_block_column
from f451_sysid.hankel import drop_last_block_column
from f451_sysid.hankel import HankelMatrix
from f451_sysid.lowrank import hard_threshold
from f451_sysid.lowrank import numerical_rank
from f451_sysid.lowrank import rank_k_approx
from f451_sysid.lowrank import svd

__all__ = [
    "IdentificationResult",
    "ho_kalman",
    "thresholded_ho_kalman",
    "known_order_ho_kalman",
]

log = logging.getLogger()


# =========================================================
#              D O M A I N   T Y P E S
# =========================================================
@dataclass(frozen=True, eq=False)
class IdentificationResult:
    """Identified system and the order estimate that produced it.

    Attributes:
        order:
            estimated order (number of retained singular values)
        A_hat:
            ``r x r`` state matrix (``r <= order``, see module notes)
        B_hat:
            ``r x d_u`` input matrix
        C_hat:
            ``d_y x r`` output matrix
        threshold:
            singular value threshold ``xi`` (0 for the known-order baseline)
        retained_singular_values:
            retained singular values of the estimate, in descending order
        diagnostics:
            extra information (e.g. realized state dimension)
    """

    order: int
    A_hat: np.ndarray
    B_hat: np.ndarray
    C_hat: np.ndarray
    threshold: float
    retained_singular_values: np.ndarray
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        A = np.array(self.A_hat, dtype=float)
        B = np.array(self.B_hat, dtype=float)
        C = np.array(self.C_hat, dtype=float)
        r = A.shape[0] if A.ndim == 2 else -1
        if A.shape != (r, r) or B.ndim != 2 or C.ndim != 2:
            raise InvalidArgumentError("A_hat, B_hat, C_hat must be 2-D with square A_hat")
        if B.shape[0] != r or C.shape[1] != r:
            raise InvalidArgumentError(
                f"Inconsistent shapes A{A.shape}, B{B.shape}, C{C.shape}"
            )
        if self.order < 0 or r > self.order:
            raise InvalidArgumentError(
                f"Realized dimension {r} exceeds order {self.order}"
            )
        if not all(np.all(np.isfinite(m)) for m in (A, B, C)):
            raise InvalidArgumentError("Identified matrices have non-finite entries")

        svals = np.array(self.retained_singular_values, dtype=float).reshape(-1)
        if svals.size != self.order:
            raise InvalidArgumentError(
                f"{svals.size} retained singular values for order {self.order}"
            )
        for name, val in (("A_hat", A), ("B_hat", B), ("C_hat", C), ("retained_singular_values", svals)):
            val.setflags(write=False)
            object.__setattr__(self, name, val)

    def __repr__(self) -> str:
        return (
            f"<IdentificationResult, order={self.order}, "
            f"d_u={self.d_u}, d_y={self.d_y}, xi={self.threshold:.4g}>"
        )

    @property
    def d_u(self) -> int:
        """Return input dimension."""
        return int(self.B_hat.shape[1])

    @property
    def d_y(self) -> int:
        """Return output dimension."""
        return int(self.C_hat.shape[0])

    def markov_parameter(self, k: int) -> np.ndarray:
        """Return ``C_hat A_hat^k B_hat`` (zero matrix for an empty realization).

        Args:
            k:
                lag (>= 0)

        Returns:
            ``d_y x d_u`` array

        Raises:
            InvalidArgumentError: k < 0
        """
        if k < 0:
            raise InvalidArgumentError(f"Markov parameter lag must be >= 0, got {k}")
        if self.A_hat.shape[0] == 0:
            return np.zeros((self.d_y, self.d_u))

        return self.C_hat @ np.linalg.matrix_power(self.A_hat, k) @ self.B_hat

    def to_dict(self) -> Dict[str, Any]:
        """Return result as JSON-ready 'dict' structure."""
        return {
            "order": int(self.order),
            "A": self.A_hat.tolist(),
            "B": self.B_hat.tolist(),
            "C": self.C_hat.tolist(),
            "xi": float(self.threshold),
            "singular_values": self.retained_singular_values.tolist(),
            "d_u": self.d_u,
            "d_y": self.d_y,
        }

    def to_json(self, **kwargs: Any) -> str:
        """Return result as JSON string (kwargs go to ``json.dumps()``)."""
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "IdentificationResult":
        """Create result from 'dict' structure (see ``to_dict()``).

        Args:
            data:
                'dict' with 'order', 'A', 'B', 'C', 'xi', 'singular_values' keys
                and optional 'd_u', 'd_y' keys (needed for empty realizations)

        Returns:
            New 'IdentificationResult' object

        Raises:
            InvalidArgumentError: keys missing or shapes inconsistent
        """
        try:
            r = len(data["A"])
            B = np.array(data["B"], dtype=float)
            C = np.array(data["C"], dtype=float)
            if r == 0:
                B = B.reshape(0, int(data.get("d_u", 0)))
                C = C.reshape(int(data.get("d_y", C.shape[0] if C.ndim else 0)), 0)
            return cls(
                order=int(data["order"]),
                A_hat=np.array(data["A"], dtype=float).reshape(r, r),
                B_hat=B,
                C_hat=C,
                threshold=float(data["xi"]),
                retained_singular_values=data["singular_values"],
            )
        except (KeyError, ValueError, TypeError) as e:
            raise InvalidArgumentError(f"Invalid identification result data: {e}") from e


def _empty_result(
    order: int, d_u: int, d_y: int, xi: float, svals: np.ndarray, **diag: Any
) -> IdentificationResult:
    return IdentificationResult(
        order=order,
        A_hat=np.zeros((0, 0)),
        B_hat=np.zeros((0, d_u)),
        C_hat=np.zeros((d_y, 0)),
        threshold=xi,
        retained_singular_values=svals,
        diagnostics=dict(realized_order=0, **diag),
    )


# =========================================================
#              C O R E   A L G O R I T H M S
# =========================================================
def ho_kalman(H: HankelMatrix, rank: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Factorize a Hankel matrix into ``(A_bar, B_bar, C_bar)``.

    With the compact rank-``rank`` SVD ``U S V^T`` of ``H`` without its last block
    column, ``O = U S^{1/2}`` and ``Q = S^{1/2} V^T``. Then ``A_bar = O^+ H_left Q^+``
    (``H_left`` is ``H`` without its first block column), ``B_bar`` is the first
    ``d_u`` columns of ``Q``, and ``C_bar`` is the first ``d_y`` rows of ``O``.

    Example:
        >>> h = HankelMatrix([[1.0, 0.5], [0.5, 0.25]], tau=2, d_u=1, d_y=1)
        >>> A, B, C = ho_kalman(h, 1)
        >>> assert np.isclose(A.item(), 0.5) and np.isclose((C @ B).item(), 1.0)

    Args:
        H:
            Hankel matrix with ``tau >= 2``
        rank:
            number of states, at most the numerical rank of ``H`` without its
            last block column

    Returns:
        tuple with ``A_bar`` (rank x rank), ``B_bar`` (rank x d_u), ``C_bar`` (d_y x rank)

    Raises:
        InvalidArgumentError: tau < 2 or rank out of range
    """
    Hright = drop_last_block_column(H)
    Hleft = drop_first_block_column(H)

    f = svd(Hright)
    maxRank = numerical_rank(f, const.TOL_HOKALMAN)
    if not 1 <= rank <= maxRank:
        log.error(f"Ho-Kalman rank {rank} not in 1..{maxRank}")
        raise InvalidArgumentError(
            f"Rank {rank} must be in 1..{maxRank} (numerical rank of the shifted Hankel matrix)"
        )

    sqrtS = np.sqrt(f.singular_values[:rank])
    O = f.left_vectors[:, :rank] * sqrtS
    Q = sqrtS[:, None] * f.right_vectors[:, :rank].T

    # Columns of U and V are orthonormal, so O^+ and Q^+ have closed forms.
    Opinv = (f.left_vectors[:, :rank] / sqrtS).T
    Qpinv = f.right_vectors[:, :rank] / sqrtS

    A_bar = Opinv @ Hleft @ Qpinv
    B_bar = Q[:, : H.d_u]
    C_bar = O[: H.d_y, :]

    return A_bar, B_bar, C_bar


def thresholded_ho_kalman(H_hat: HankelMatrix, xi: float) -> IdentificationResult:
    """Run thresholded Ho-Kalman on a noisy Hankel estimate.

    Args:
        H_hat:
            Hankel matrix estimate with ``tau >= 2``
        xi:
            singular value threshold (>= 0)

    Returns:
        'IdentificationResult' with ``order = k_xi`` (0 gives empty matrices)

    Raises:
        InvalidArgumentError: tau < 2 or xi < 0
    """
    if H_hat.tau < 2:
        raise InvalidArgumentError(f"Ho-Kalman needs tau >= 2, got {H_hat.tau}")

    th = hard_threshold(H_hat.data, xi)
    k = th.effective_rank
    kept = th.singular_values[:k]
    if k == 0:
        log.debug(f"Threshold {xi:.4g} removed every singular value")
        return _empty_result(0, H_hat.d_u, H_hat.d_y, th.threshold, kept)

    Hxi = H_hat.with_data(th.matrix)
    r = min(k, numerical_rank(drop_last_block_column(Hxi), const.TOL_HOKALMAN))
    if r < k:
        log.debug(f"Shifted Hankel matrix has rank {r} < order estimate {k}")
    if r == 0:
        return _empty_result(k, H_hat.d_u, H_hat.d_y, th.threshold, kept)

    A, B, C = ho_kalman(Hxi, r)
    return IdentificationResult(
        order=k,
        A_hat=A,
        B_hat=B,
        C_hat=C,
        threshold=th.threshold,
        retained_singular_values=kept,
        diagnostics={"realized_order": r},
    )


def known_order_ho_kalman(H_hat: HankelMatrix, n: int) -> IdentificationResult:
    """Run the known-order baseline: best rank-``n`` projection, then Ho-Kalman.

    Args:
        H_hat:
            Hankel matrix estimate with ``tau >= 2``
        n:
            true system order (>= 1)

    Returns:
        'IdentificationResult' with ``order = n`` and ``threshold = 0``

    Raises:
        InvalidArgumentError: tau < 2, or n out of range
    """
    if H_hat.tau < 2:
        raise InvalidArgumentError(f"Ho-Kalman needs tau >= 2, got {H_hat.tau}")

    svals = svd(H_hat.data).singular_values
    if not 1 <= n <= svals.size:
        raise InvalidArgumentError(f"Order n={n} must be in 1..{svals.size}")

    Hn = H_hat.with_data(rank_k_approx(H_hat.data, n))
    r = min(n, numerical_rank(drop_last_block_column(Hn), const.TOL_HOKALMAN))
    if r == 0:
        return _empty_result(n, H_hat.d_u, H_hat.d_y, 0.0, svals[:n])

    A, B, C = ho_kalman(Hn, r)
    return IdentificationResult(
        order=n,
        A_hat=A,
        B_hat=B,
        C_hat=C,
        threshold=0.0,
        retained_singular_values=svals[:n],
        diagnostics={"realized_order": r},
    )
