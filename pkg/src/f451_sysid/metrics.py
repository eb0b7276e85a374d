"""Error metrics and bound evaluators for f451 System Identification module.

This module holds the error functionals used by the tests and the experiment
harness, the evaluators for the theoretical error bounds (diagnostics that
need ground truth, so they are never used by the estimators themselves), and
the 'TrialRecord' type with its CSV serialization.

Note:
    All error measures are invariant under similarity transforms of the
    identified system (Markov parameters and eigenvalue sets).
"""
import csv
import logging
import math
from dataclasses import astuple
from dataclasses import dataclass
from dataclasses import fields
from pathlib import Path
from typing import Any
from typing import Dict
from typing import Iterable
from typing import List
from typing import Sequence
from typing import Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

import f451_sysid.constants as const
import f451_sysid.utils as utils
from f451_sysid.exceptions import InvalidArgumentError
from f451_sysid.hankel import drop_last_block_column
from f451_sysid.hankel import HankelMatrix
from f451_sysid.hokalman import IdentificationResult
from f451_sysid.lowrank import numerical_rank
from f451_sysid.lowrank import svd
from f451_sysid.lti import markov_parameters
from f451_sysid.lti import StateSpaceSystem

__all__ = [
    "TrialRecord",
    "frobenius_error",
    "operator_error",
    "markov_error",
    "prop1_bound",
    "thm_hankel_bound",
    "thm_param_bounds",
    "eigenvalue_error",
    "write_records",
    "read_records",
    "summarize",
]

log = logging.getLogger()


# =========================================================
#              T R I A L   R E C O R D S
# =========================================================
@dataclass(frozen=True)
class TrialRecord:
    """Observables of one Monte-Carlo trial.

    Metric fields of a failed trial are NaN. The 'status' is either ``'ok'``
    or ``'failed:<reason>'``.
    """

    T: int
    trial_index: int
    xi: float
    order_estimate: int
    hankel_op_error: float
    hankel_fro_error_thresholded: float
    markov_cab_error: float
    oracle_cab_error: float
    bound_rhs_prop1: float
    status: str = const.STATUS_OK

    @property
    def ok(self) -> bool:
        """Return 'True' if trial completed."""
        return self.status == const.STATUS_OK

    @classmethod
    def failed(cls, T: int, trialIndex: int, reason: str) -> "TrialRecord":
        """Create record for a failed trial."""
        nan = float("nan")
        return cls(
            T=T,
            trial_index=trialIndex,
            xi=nan,
            order_estimate=-1,
            hankel_op_error=nan,
            hankel_fro_error_thresholded=nan,
            markov_cab_error=nan,
            oracle_cab_error=nan,
            bound_rhs_prop1=nan,
            status=f"{const.STATUS_FAILED}:{reason}",
        )

    def to_row(self) -> List[str]:
        """Return CSV row (status first, then metric columns in order)."""
        vals = astuple(self)
        return [self.status, str(self.T), str(self.trial_index)] + [
            str(v) if isinstance(v, int) else utils.fmt_float(v) for v in vals[2:-1]
        ]

    @classmethod
    def from_row(cls, row: Sequence[str]) -> "TrialRecord":
        """Create record from CSV row (see ``to_row()``).

        Raises:
            InvalidArgumentError: wrong number of values or bad numbers
        """
        if len(row) != len(const.RECORD_COLUMNS) + 1:
            raise InvalidArgumentError(f"Record row has {len(row)} values")
        try:
            vals: List[Any] = [
                int(v) if f.type is int else float(v)
                for f, v in zip(fields(cls)[:-1], row[1:])
            ]
        except ValueError as e:
            raise InvalidArgumentError(f"Record row has bad values: {row}") from e

        return cls(*vals, status=row[0])


def write_records(records: Iterable[TrialRecord], fName: Any) -> None:
    """Write trial records to CSV file (``status`` column first)."""
    with open(fName, "w", newline="") as fp:
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow((const.COL_STATUS,) + const.RECORD_COLUMNS)
        for rec in records:
            writer.writerow(rec.to_row())


def read_records(fName: Any) -> List[TrialRecord]:
    """Read trial records from CSV file (see ``write_records()``).

    Args:
        fName:
            path to CSV file

    Returns:
        'list' of 'TrialRecord' objects in file order

    Raises:
        InvalidArgumentError: file missing or header does not match
    """
    path = Path(fName).expanduser()
    if not path.exists():
        raise InvalidArgumentError(f"Records file '{path}' does not exist.")

    with open(path, newline="") as fp:
        rows = list(csv.reader(fp))

    if not rows or tuple(rows[0]) != (const.COL_STATUS,) + const.RECORD_COLUMNS:
        raise InvalidArgumentError(f"Records file '{path}' has unexpected header")

    return [TrialRecord.from_row(row) for row in rows[1:] if row]


def _median(vals: List[float]) -> Any:
    return float(np.median(vals)) if vals else None


def summarize(records: Iterable[TrialRecord]) -> List[Dict[str, Any]]:
    """Aggregate trial records per sample size.

    Mean order and medians are taken over completed trials only. They are
    'None' if every trial at a given T failed.

    Args:
        records:
            trial records

    Returns:
        'list' of per-T 'dict' structures in ascending T order
    """
    byT: Dict[int, List[TrialRecord]] = {}
    for rec in records:
        byT.setdefault(rec.T, []).append(rec)

    out = []
    for T in sorted(byT):
        okRecs = [r for r in byT[T] if r.ok]
        out.append(
            {
                "T": T,
                "mean_order": (
                    float(np.mean([r.order_estimate for r in okRecs])) if okRecs else None
                ),
                "median_markov_cab_error": _median([r.markov_cab_error for r in okRecs]),
                "median_oracle_cab_error": _median([r.oracle_cab_error for r in okRecs]),
                "median_hankel_fro_error": _median(
                    [r.hankel_fro_error_thresholded for r in okRecs]
                ),
                "trials": len(byT[T]),
                "failed": len(byT[T]) - len(okRecs),
            }
        )

    return out


# =========================================================
#              E R R O R   F U N C T I O N A L S
# =========================================================
def _diff(M1: Any, M2: Any) -> np.ndarray:
    a = np.asarray(M1, dtype=float)
    b = np.asarray(M2, dtype=float)
    if a.shape != b.shape:
        raise InvalidArgumentError(f"Shape mismatch: {a.shape} vs {b.shape}")
    return a - b


def frobenius_error(M1: Any, M2: Any) -> float:
    """Return ``||M1 - M2||_F``.

    Example:
        >>> assert frobenius_error([[3.0, 0.0], [0.0, 4.0]], [[0.0, 0.0], [0.0, 0.0]]) == 5.0

    Raises:
        InvalidArgumentError: shapes differ
    """
    return float(np.linalg.norm(_diff(M1, M2)))


def operator_error(M1: Any, M2: Any) -> float:
    """Return ``||M1 - M2||_2`` (largest singular value of the difference).

    Raises:
        InvalidArgumentError: shapes differ
    """
    d = _diff(M1, M2)
    if d.ndim < 2:
        d = d.reshape(1, -1)
    s = svd(d).singular_values
    return float(s[0]) if s.size else 0.0


def markov_error(
    result: IdentificationResult, system: StateSpaceSystem, horizon: int
) -> List[float]:
    """Return ``||C_hat A_hat^k B_hat - C A^k B||_F`` for k = 0 ... horizon-1.

    An empty realization contributes zero Markov parameters, so its error is
    ``||C A^k B||_F``.

    Args:
        result:
            identified system
        system:
            true system
        horizon:
            number of lags (>= 1)

    Returns:
        'list' of errors, one per lag

    Raises:
        InvalidArgumentError: horizon < 1 or dimensions differ
    """
    if horizon < 1:
        raise InvalidArgumentError(f"Horizon must be >= 1, got {horizon}")
    if (result.d_u, result.d_y) != (system.d_u, system.d_y):
        raise InvalidArgumentError("Identified and true systems have different dimensions")

    return [
        frobenius_error(result.markov_parameter(k), mp)
        for k, mp in enumerate(markov_parameters(system, horizon))
    ]


def eigenvalue_error(result: IdentificationResult, system: StateSpaceSystem) -> float:
    """Return distance between eigenvalues of ``A_hat`` and ``A``.

    Eigenvalues are paired by an assignment that minimizes the total distance,
    and the largest paired distance is returned.

    Args:
        result:
            identified system
        system:
            true system

    Returns:
        largest paired distance (``inf`` if dimensions differ)
    """
    if result.A_hat.shape[0] != system.n:
        return float("inf")

    est = np.linalg.eigvals(result.A_hat)
    true = np.linalg.eigvals(system.A)
    cost = np.abs(est[:, None] - true[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(np.max(cost[rows, cols]))


# =========================================================
#              B O U N D   E V A L U A T O R S
# =========================================================
def _tail_energy(svals: Any, n: int) -> np.ndarray:
    """Return ``sum_{i>k} s_i^2`` (i <= n) for k = 0 ... n."""
    s = np.asarray(svals, dtype=float).reshape(-1)
    if not 0 <= n <= s.size:
        raise InvalidArgumentError(f"n={n} must be in 0..{s.size}")
    sq = s[:n] ** 2
    return np.concatenate([np.cumsum(sq[::-1])[::-1], [0.0]])


def prop1_bound(svals: Any, n: int, xi: float) -> float:
    """Return ``18 min_{k=0..n} (4 k xi^2 + sum_{i=k+1}^n s_i^2)``.

    Example:
        >>> assert prop1_bound([3.0, 1.0], 2, 1.0) == 90.0

    Args:
        svals:
            singular values of the true Hankel matrix (descending)
        n:
            true order (<= len(svals))
        xi:
            threshold

    Returns:
        bound on the squared Frobenius error of the thresholded estimate
    """
    tail = _tail_energy(svals, n)
    k = np.arange(n + 1)
    return float(18.0 * np.min(4.0 * k * xi**2 + tail))


def thm_hankel_bound(svals: Any, n: int, xi: float) -> float:
    """Return ``min_{k=0..n} (k xi^2 + sum_{i>k} s_i^2)`` (no universal constant)."""
    tail = _tail_energy(svals, n)
    k = np.arange(n + 1)
    return float(np.min(k * xi**2 + tail))


def thm_param_bounds(H: HankelMatrix, fro_err: float) -> Tuple[float, float]:
    """Evaluate error bounds on the identified ``A`` and on ``B``, ``C``.

    ``a_bound = 50 ||H||_2 fro_err / s_n(H_right)^2`` and
    ``bc_bound = sqrt(5) fro_err / sqrt(s_n(H_right))``, with ``n`` the
    numerical rank of ``H`` and ``H_right`` the matrix without its last block
    column.

    Args:
        H:
            true Hankel matrix (``tau >= 2``, rank >= 1)
        fro_err:
            Frobenius error of the thresholded estimate

    Returns:
        tuple ``(a_bound, bc_bound)``

    Raises:
        InvalidArgumentError: H has rank 0 or tau < 2
    """
    n = numerical_rank(H.data)
    if n == 0:
        raise InvalidArgumentError("Hankel matrix has numerical rank 0")

    sRight = svd(drop_last_block_column(H)).singular_values
    if sRight.size < n or sRight[n - 1] <= const.TOL_RANK * sRight[0]:
        raise InvalidArgumentError(f"Shifted Hankel matrix has rank below {n}")

    snR = float(sRight[n - 1])
    normH = float(svd(H.data).singular_values[0])
    return 50.0 * normH * fro_err / snR**2, math.sqrt(5.0) * fro_err / math.sqrt(snR)
