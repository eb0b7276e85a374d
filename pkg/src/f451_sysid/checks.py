"""Property suites for low-rank denoising bounds.

This module draws random low-rank matrices with additive noise and checks
the inequalities that the thresholded estimator relies on:

- **prop1**: rank-k projection and hard thresholding of ``H + Z`` stay within
  the squared Frobenius error bounds, for every ``k = 0 ... n`` and every
  threshold ``xi`` in ``{2, 3, 4} * ||Z||_2``,
- **lemma1**: for ``xi >= 2 ||Z||_2`` the effective rank never exceeds ``n``, and
  equals ``n`` when also ``xi <= (2/3) s_n(H)``,
- **weyl**: singular values move by at most ``||Z||_2``.

These suites back the 'check-bounds' command.
"""
import logging
from dataclasses import dataclass
from dataclasses import field
from typing import Dict
from typing import Tuple

import numpy as np

from f451_sysid.exceptions import InvalidArgumentError
from f451_sysid.lowrank import effective_rank
from f451_sysid.lowrank import hard_threshold
from f451_sysid.lowrank import numerical_rank
from f451_sysid.lowrank import rank_k_approx
from f451_sysid.lowrank import svd
from f451_sysid.metrics import prop1_bound

__all__ = [
    "SuiteReport",
    "random_instance",
    "check_prop1",
    "check_lemma1",
    "check_weyl",
    "run_bound_checks",
]

# =========================================================
#          G L O B A L S   A N D   H E L P E R S
# =========================================================
_XI_FACTORS_: Tuple[float, ...] = (2.0, 3.0, 4.0)
_NOISE_LOW_: float = 0.01
_NOISE_HIGH_: float = 0.5
_DIM_LOW_: int = 4
_DIM_HIGH_: int = 10
_SLACK_: float = 1e-9  # relative slack for floating point round-off

SUITES: Tuple[str, ...] = ("prop1", "lemma1", "weyl")

log = logging.getLogger()


def _leq(lhs: float, rhs: float) -> bool:
    return lhs <= rhs * (1.0 + _SLACK_) + _SLACK_


def _noise_norm(Z: np.ndarray) -> float:
    return float(svd(Z).singular_values[0])


@dataclass
class SuiteReport:
    """Pass counts per property suite.

    Attributes:
        total:
            number of random instances
        passed:
            'dict' with number of passing instances per suite name
    """

    total: int = 0
    passed: Dict[str, int] = field(default_factory=lambda: {name: 0 for name in SUITES})

    @property
    def all_passed(self) -> bool:
        """Return 'True' if every instance passed every suite."""
        return all(count == self.total for count in self.passed.values())

    def summary(self) -> str:
        """Return one-line summary, e.g. ``prop1: 200/200, lemma1: 200/200, weyl: 200/200``."""
        return ", ".join(f"{name}: {self.passed[name]}/{self.total}" for name in SUITES)


# =========================================================
#              R A N D O M   I N S T A N C E S
# =========================================================
def random_instance(
    rng: np.random.Generator, m: int, p: int, n: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Draw low-rank matrix ``H`` and noise ``Z``.

    ``H = X Y^T`` with standard Gaussian ``X`` (m x n) and ``Y`` (p x n). ``Z`` is
    Gaussian and scaled so that ``||Z||_2 = c s_n(H)`` with ``c ~ Uniform(0.01, 0.5)``.

    Args:
        rng:
            random generator
        m:
            number of rows
        p:
            number of columns
        n:
            rank, ``1 <= n <= min(m, p)``

    Returns:
        tuple with ``H`` and ``Z``

    Raises:
        InvalidArgumentError: rank out of range
    """
    if not 1 <= n <= min(m, p):
        raise InvalidArgumentError(f"Rank n={n} must be in 1..{min(m, p)}")

    H = rng.standard_normal((m, n)) @ rng.standard_normal((p, n)).T
    G = rng.standard_normal((m, p))
    scale = rng.uniform(_NOISE_LOW_, _NOISE_HIGH_) * svd(H).singular_values[n - 1]
    return H, G * (scale / _noise_norm(G))


# =========================================================
#              P R O P E R T Y   C H E C K S
# =========================================================
def check_prop1(H: np.ndarray, Z: np.ndarray) -> bool:
    """Check Frobenius error bounds of rank-k projection and hard thresholding.

    Args:
        H:
            low-rank matrix
        Z:
            noise matrix of the same shape

    Returns:
        'True' if both bounds hold for every ``k`` and every test threshold
    """
    s = svd(H).singular_values
    n = numerical_rank(s)
    zNorm = _noise_norm(Z)
    tail = np.concatenate([np.cumsum((s[:n] ** 2)[::-1])[::-1], [0.0]])
    M = H + Z

    for k in range(n + 1):
        lhs = np.linalg.norm(rank_k_approx(M, k) - H) ** 2
        if not _leq(lhs, 18.0 * (k * zNorm**2 + tail[k])):
            log.debug(f"Rank-{k} projection bound failed: {lhs:.6g}")
            return False

    for factor in _XI_FACTORS_:
        xi = factor * zNorm
        lhs = np.linalg.norm(hard_threshold(M, xi).matrix - H) ** 2
        if not _leq(lhs, prop1_bound(s, n, xi)):
            log.debug(f"Thresholding bound failed at xi={xi:.6g}: {lhs:.6g}")
            return False

    return True


def check_lemma1(H: np.ndarray, Z: np.ndarray) -> bool:
    """Check that thresholding above ``2 ||Z||_2`` recovers at most (or exactly) the rank.

    Args:
        H:
            low-rank matrix
        Z:
            noise matrix of the same shape

    Returns:
        'True' if the effective rank behaves as expected for every test threshold
    """
    s = svd(H).singular_values
    n = numerical_rank(s)
    zNorm = _noise_norm(Z)
    sM = svd(H + Z)

    for factor in _XI_FACTORS_:
        xi = factor * zNorm
        k = effective_rank(sM, xi)
        if k > n:
            return False
        if xi <= (2.0 / 3.0) * s[n - 1] and k != n:
            return False

    return True


def check_weyl(H: np.ndarray, Z: np.ndarray) -> bool:
    """Check ``|s_i(H + Z) - s_i(H)| <= ||Z||_2`` for all ``i``."""
    diff = np.abs(svd(H + Z).singular_values - svd(H).singular_values)
    return bool(np.all(diff <= _noise_norm(Z) * (1.0 + _SLACK_) + _SLACK_))


def run_bound_checks(instances: int, seed: int) -> SuiteReport:
    """Run all property suites on seeded random instances.

    Dimensions are drawn per instance: ``m, p`` in ``4 ... 10`` and
    ``n`` in ``1 ... min(m, p) - 1``.

    Args:
        instances:
            number of random instances (>= 1)
        seed:
            seed of the random generator

    Returns:
        'SuiteReport' with pass counts

    Raises:
        InvalidArgumentError: instances < 1
    """
    if instances < 1:
        raise InvalidArgumentError(f"Need at least 1 instance, got {instances}")

    rng = np.random.default_rng(seed)
    report = SuiteReport(total=instances)
    for i in range(instances):
        m, p = (int(v) for v in rng.integers(_DIM_LOW_, _DIM_HIGH_ + 1, size=2))
        n = int(rng.integers(1, min(m, p)))
        H, Z = random_instance(rng, m, p, n)

        for name, check in (("prop1", check_prop1), ("lemma1", check_lemma1), ("weyl", check_weyl)):
            if check(H, Z):
                report.passed[name] += 1
            else:
                log.error(f"Instance {i} (m={m}, p={p}, n={n}) failed '{name}'")

    return report
