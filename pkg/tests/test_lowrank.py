"""Test cases for 'lowrank' module."""
import numpy as np
import pytest
from hypothesis import given
from hypothesis import settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import f451_sysid.lowrank as lowrank
from f451_sysid.exceptions import InvalidArgumentError


# =========================================================
#     G L O B A L S   &   P Y T E S T   F I X T U R E S
# =========================================================
_DIAG_ = np.diag([3.0, 1.0])
_RANK_ONE_ = np.array([[1.0, 0.5], [0.5, 0.25]])

_SHAPES_ = st.tuples(st.integers(1, 6), st.integers(1, 6))
_MATRICES_ = _SHAPES_.flatmap(
    lambda shape: arrays(
        np.float64,
        shape,
        elements=st.floats(-10, 10, allow_nan=False, allow_infinity=False, width=64),
    )
)
_INT_MATRICES_ = _SHAPES_.flatmap(
    lambda shape: arrays(np.float64, shape, elements=st.integers(-5, 5).map(float))
)


# =========================================================
#                T E S T   F U N C T I O N S
# =========================================================
def test_svd_examples():
    """Test SVD on closed-form cases."""
    assert np.allclose(lowrank.svd(_DIAG_).singular_values, [3.0, 1.0])
    assert np.allclose(lowrank.svd(_RANK_ONE_).singular_values, [1.25, 0.0], atol=1e-12)
    assert not np.any(lowrank.svd(np.zeros((3, 2))).singular_values)

    f = lowrank.svd(np.zeros((0, 3)))
    assert f.singular_values.size == 0
    assert f.shape == (0, 3)


def test_svd_invalid():
    """Test SVD on invalid input."""
    with pytest.raises(InvalidArgumentError) as e:
        lowrank.svd([1.0, 2.0])
    assert e.type == InvalidArgumentError
    assert "2-D" in e.value.args[0]

    with pytest.raises(InvalidArgumentError) as e:
        lowrank.svd([[1.0, np.inf]])
    assert "finite" in e.value.args[0]


@settings(max_examples=50, deadline=None)
@given(_MATRICES_)
def test_svd_properties(M):
    """Test orthonormal factors, ordering, sign convention, and reconstruction."""
    f = lowrank.svd(M)
    r = f.singular_values.size
    scale = max(1.0, np.abs(M).max())

    assert r == min(M.shape)
    assert np.all(np.diff(f.singular_values) <= 1e-12 * scale)
    assert np.all(f.singular_values >= 0)
    assert np.allclose(f.left_vectors.T @ f.left_vectors, np.eye(r), atol=1e-10)
    assert np.allclose(f.right_vectors.T @ f.right_vectors, np.eye(r), atol=1e-10)
    assert np.allclose(f.reconstruct(), M, atol=1e-10 * scale)

    for i in range(r):
        col = f.left_vectors[:, i]
        big = np.flatnonzero(np.abs(col) > 1e-12 * np.abs(col).max())
        assert col[big[0]] > 0


def test_rank_k_approx_examples():
    """Test best rank-k approximation on closed-form cases."""
    assert not np.any(lowrank.rank_k_approx(_DIAG_, 0))
    assert np.allclose(lowrank.rank_k_approx(_DIAG_, 2), _DIAG_, atol=1e-12)

    out = lowrank.rank_k_approx(_DIAG_, 1)
    assert np.allclose(out, np.diag([3.0, 0.0]))
    assert np.isclose(np.linalg.norm(_DIAG_ - out) ** 2, 1.0)

    with pytest.raises(InvalidArgumentError) as e:
        lowrank.rank_k_approx(_DIAG_, 3)
    assert e.type == InvalidArgumentError
    with pytest.raises(InvalidArgumentError):
        lowrank.rank_k_approx(_DIAG_, -1)


@settings(max_examples=50, deadline=None)
@given(_MATRICES_, st.integers(0, 6))
def test_rank_k_approx_residual(M, k):
    """Test that the residual energy equals the discarded singular values."""
    s = lowrank.svd(M).singular_values
    k = min(k, s.size)
    out = lowrank.rank_k_approx(M, k)
    resid = np.linalg.norm(M - out) ** 2
    assert np.isclose(resid, np.sum(s[k:] ** 2), rtol=1e-8, atol=1e-8)
    assert np.linalg.matrix_rank(out, tol=1e-8 * max(1.0, s[0] if s.size else 0.0)) <= k


def test_hard_threshold_examples():
    """Test hard thresholding on closed-form cases."""
    out = lowrank.hard_threshold(_DIAG_, 2.0)
    assert out.effective_rank == 1
    assert np.allclose(out.matrix, np.diag([3.0, 0.0]))
    assert out.threshold == 2.0
    assert np.allclose(out.singular_values, [3.0, 1.0])

    # Ties are kept
    assert lowrank.hard_threshold(_DIAG_, 1.0).effective_rank == 2

    out = lowrank.hard_threshold(_DIAG_, 0.0)
    assert out.effective_rank == 2
    assert np.allclose(out.matrix, _DIAG_)

    out = lowrank.hard_threshold(_DIAG_, 3.5)
    assert out.effective_rank == 0
    assert not np.any(out.matrix)

    # Zero threshold keeps numerical rank only
    assert lowrank.hard_threshold(_RANK_ONE_, 0.0).effective_rank == 1

    with pytest.raises(InvalidArgumentError) as e:
        lowrank.hard_threshold(_DIAG_, -1.0)
    assert e.type == InvalidArgumentError
    with pytest.raises(InvalidArgumentError):
        lowrank.hard_threshold(_DIAG_, float("nan"))


@settings(max_examples=50, deadline=None)
@given(_MATRICES_, st.floats(0, 20, allow_nan=False))
def test_hard_threshold_matches_projection(M, xi):
    """Test that thresholding equals the best rank-k_xi approximation."""
    out = lowrank.hard_threshold(M, xi)
    assert out.effective_rank == lowrank.effective_rank(M, xi)
    assert np.allclose(out.matrix, lowrank.rank_k_approx(M, out.effective_rank), atol=1e-10)
    assert np.all(out.singular_values[: out.effective_rank] >= xi)


def test_pseudoinverse_examples():
    """Test pseudoinverse on closed-form cases."""
    M = np.array([[2.0, 1.0], [1.0, 3.0]])
    assert np.allclose(lowrank.pseudoinverse(M), np.linalg.inv(M), atol=1e-10)

    assert not np.any(lowrank.pseudoinverse(np.zeros((2, 3))))
    assert lowrank.pseudoinverse(np.zeros((2, 3))).shape == (3, 2)

    v = np.array([[1.0], [2.0], [2.0]])
    assert np.allclose(lowrank.pseudoinverse(v), v.T / 9.0)

    with pytest.raises(InvalidArgumentError):
        lowrank.pseudoinverse(M, -1.0)


@settings(max_examples=50, deadline=None)
@given(_INT_MATRICES_)
def test_pseudoinverse_penrose(M):
    """Test the Penrose conditions."""
    P = lowrank.pseudoinverse(M)
    scale = max(1.0, np.abs(M).max())
    assert P.shape == M.T.shape
    assert np.allclose(M @ P @ M, M, atol=1e-6 * scale)
    assert np.allclose((M @ P).T, M @ P, atol=1e-6)
    assert np.allclose((P @ M).T, P @ M, atol=1e-6)


def test_numerical_rank():
    """Test numerical and effective rank."""
    assert lowrank.numerical_rank(_DIAG_) == 2
    assert lowrank.numerical_rank(_RANK_ONE_) == 1
    assert lowrank.numerical_rank(np.zeros((3, 3))) == 0
    assert lowrank.numerical_rank(np.diag([1.0, 1e-9])) == 1
    assert lowrank.numerical_rank(np.diag([1.0, 1e-9]), 1e-12) == 2

    # Singular value arrays and factorizations are accepted as-is
    assert lowrank.numerical_rank(np.array([3.0, 1.0, 0.0])) == 2
    assert lowrank.numerical_rank(lowrank.svd(_DIAG_)) == 2

    assert lowrank.effective_rank(_DIAG_, 1.5) == 1
    assert lowrank.effective_rank(np.zeros((2, 2)), 0.0) == 0
