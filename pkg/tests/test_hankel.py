"""Test cases for 'hankel' module."""
import numpy as np
import pytest

import f451_sysid.hankel as hankel
from f451_sysid.exceptions import InvalidArgumentError
from f451_sysid.lowrank import numerical_rank
from f451_sysid.lowrank import svd
from f451_sysid.lti import markov_parameter
from f451_sysid.lti import random_system
from f451_sysid.lti import StateSpaceSystem


# =========================================================
#     G L O B A L S   &   P Y T E S T   F I X T U R E S
# =========================================================
_SCALAR_HANKEL_ = [[1.0, 0.5], [0.5, 0.25]]


@pytest.fixture()
def zero_b_system():
    """Return system with zero input map."""
    return StateSpaceSystem(np.diag([0.5, 0.3]), np.zeros((2, 2)), np.ones((1, 2)))


@pytest.fixture()
def scalar_hankel():
    """Return Hankel matrix of scalar system ``A=0.5, B=1, C=1`` with ``tau=2``."""
    return hankel.HankelMatrix(_SCALAR_HANKEL_, tau=2, d_u=1, d_y=1)


# =========================================================
#                T E S T   F U N C T I O N S
# =========================================================
def test_hankel_matrix_invalid():
    """Test validation of Hankel matrix shapes."""
    with pytest.raises(InvalidArgumentError) as e:
        hankel.HankelMatrix(np.zeros((2, 3)), tau=2, d_u=1, d_y=1)
    assert e.type == InvalidArgumentError
    assert "shape" in e.value.args[0]

    with pytest.raises(InvalidArgumentError):
        hankel.HankelMatrix(np.zeros((0, 0)), tau=0, d_u=1, d_y=1)


def test_hankel_matrix_with_data(scalar_hankel):
    """Test creating Hankel matrices with the same block structure."""
    h = scalar_hankel.with_data(np.zeros((2, 2)))
    assert (h.tau, h.d_u, h.d_y) == (2, 1, 1)
    assert not np.any(h.data)
    assert not scalar_hankel.data.flags.writeable


def test_impulse_block_row(scalar_system, ref_system, zero_b_system):
    """Test truncated impulse response rows."""
    g = hankel.impulse_block_row(scalar_system, 2)
    assert g.data.tolist() == [[1.0, 0.5, 0.25]]

    g = hankel.impulse_block_row(zero_b_system, 3)
    assert g.data.shape == (1, 10)
    assert not np.any(g.data)

    g = hankel.impulse_block_row(ref_system, 4)
    assert g.data.shape == (2, 21)
    for k in range(1, 8):
        assert np.allclose(g.block(k), markov_parameter(ref_system, k - 1))

    with pytest.raises(InvalidArgumentError):
        hankel.impulse_block_row(scalar_system, 0)


def test_impulse_block_row_from_array():
    """Test wrapping arrays as impulse response rows."""
    g = hankel.ImpulseBlockRow.from_array([[1.0, 0.5, 0.25]], 1)
    assert (g.tau, g.d_u, g.d_y) == (2, 1, 1)

    g = hankel.ImpulseBlockRow.from_array(np.zeros((2, 15)), 3)
    assert (g.tau, g.d_u, g.d_y) == (3, 3, 2)

    # Even number of blocks
    with pytest.raises(InvalidArgumentError) as e:
        hankel.ImpulseBlockRow.from_array([[1.0, 0.5]], 1)
    assert e.type == InvalidArgumentError

    # Width is not a multiple of d_u
    with pytest.raises(InvalidArgumentError):
        hankel.ImpulseBlockRow.from_array(np.zeros((1, 5)), 2)

    with pytest.raises(InvalidArgumentError):
        hankel.ImpulseBlockRow(np.zeros((1, 4)), tau=2, d_u=1, d_y=1)


def test_hankel_from_impulse():
    """Test the map from impulse response rows to Hankel matrices."""
    g = hankel.ImpulseBlockRow([[1.0, 0.5, 0.25]], tau=2, d_u=1, d_y=1)
    assert hankel.hankel_from_impulse(g).data.tolist() == _SCALAR_HANKEL_

    g = hankel.ImpulseBlockRow(np.zeros((2, 15)), tau=3, d_u=3, d_y=2)
    h = hankel.hankel_from_impulse(g)
    assert h.data.shape == (6, 9)
    assert not np.any(h.data)

    with pytest.raises(InvalidArgumentError):
        hankel.hankel_from_impulse(np.zeros((1, 3)))


def test_true_hankel(scalar_system, ref_system, zero_b_system):
    """Test Hankel matrices of known systems."""
    h = hankel.true_hankel(scalar_system, 2)
    assert np.allclose(h.data, _SCALAR_HANKEL_)
    assert numerical_rank(h.data) == 1
    assert np.isclose(svd(h.data).singular_values[0], 1.25)

    h = hankel.true_hankel(ref_system, 6)
    assert h.data.shape == (12, 18)
    assert numerical_rank(h.data) == 5
    for i in range(1, 7):
        for j in range(1, 7):
            assert np.allclose(h.block(i, j), markov_parameter(ref_system, i + j - 2))

    h = hankel.true_hankel(zero_b_system, 3)
    assert not np.any(h.data)
    assert numerical_rank(h.data) == 0


def test_drop_block_columns(scalar_hankel, ref_system):
    """Test removing the first or last block column."""
    assert hankel.drop_last_block_column(scalar_hankel).tolist() == [[1.0], [0.5]]
    assert hankel.drop_first_block_column(scalar_hankel).tolist() == [[0.5], [0.25]]

    data = np.arange(8, dtype=float).reshape(2, 4)
    h = hankel.HankelMatrix(data, tau=2, d_u=2, d_y=1)
    assert np.array_equal(hankel.drop_last_block_column(h), data[:, :2])
    assert np.array_equal(hankel.drop_first_block_column(h), data[:, 2:])

    h = hankel.true_hankel(ref_system, 6)
    assert numerical_rank(hankel.drop_last_block_column(h)) == 5

    h = hankel.HankelMatrix([[1.0]], tau=1, d_u=1, d_y=1)
    with pytest.raises(InvalidArgumentError) as e:
        hankel.drop_last_block_column(h)
    assert e.type == InvalidArgumentError
    with pytest.raises(InvalidArgumentError):
        hankel.drop_first_block_column(h)


@pytest.mark.parametrize("seed", range(10))
def test_submatrix_singular_values(seed):
    """Test that removing a block column never raises singular values."""
    system = random_system(4, 2, 2, seed)
    h = hankel.true_hankel(system, 5)
    sH = svd(h.data).singular_values
    sR = svd(hankel.drop_last_block_column(h)).singular_values
    assert sR[0] <= sH[0] * (1 + 1e-12)
    assert sR[3] <= sH[3] * (1 + 1e-12)


def test_block_hankel(scalar_system, ref_system):
    """Test general block Hankel matrices."""
    assert np.allclose(
        hankel.block_hankel(ref_system, 0, 6, 6), hankel.true_hankel(ref_system, 6).data
    )
    assert hankel.block_hankel(ref_system, 3, 6, 0).shape == (12, 0)
    assert np.allclose(hankel.block_hankel(scalar_system, 1, 1, 1), [[0.5]])

    out = hankel.block_hankel(ref_system, 2, 2, 3)
    assert out.shape == (4, 9)
    assert np.allclose(out[2:4, 6:9], markov_parameter(ref_system, 5))

    with pytest.raises(InvalidArgumentError):
        hankel.block_hankel(ref_system, -1, 2, 2)
    with pytest.raises(InvalidArgumentError):
        hankel.block_hankel(ref_system, 0, 0, 2)


def test_block_toeplitz(scalar_system, ref_system, zero_b_system):
    """Test strictly lower block Toeplitz matrices."""
    assert not np.any(hankel.block_toeplitz(ref_system, 0, 1))
    assert np.allclose(
        hankel.block_toeplitz(scalar_system, 0, 3),
        [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.5, 1.0, 0.0]],
    )
    assert not np.any(hankel.block_toeplitz(zero_b_system, 2, 4))

    out = hankel.block_toeplitz(ref_system, 0, 3)
    assert out.shape == (6, 9)
    assert np.allclose(out[4:6, 0:3], markov_parameter(ref_system, 1))
    assert not np.any(out[0:2, :])

    with pytest.raises(InvalidArgumentError):
        hankel.block_toeplitz(ref_system, 0, 0)
