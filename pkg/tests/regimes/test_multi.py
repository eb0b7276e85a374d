"""Test cases for 'multi' regime module."""
import numpy as np
import pytest

from f451_sysid.estimators import lse_bound_multi
from f451_sysid.estimators import SampleFloors
from f451_sysid.estimators import threshold_multi
from f451_sysid.exceptions import IllPosedRegressionError
from f451_sysid.hankel import true_hankel
from f451_sysid.regimes import MultiTrajectoryRegime


# =========================================================
#     G L O B A L S   &   P Y T E S T   F I X T U R E S
# =========================================================
_TAU_ = 3
_T_ = 200
_SEED_ = 11


@pytest.fixture()
def regime(default_noise):
    """Return multi-trajectory regime for small systems."""
    return MultiTrajectoryRegime(_TAU_, 1, 1, default_noise)


# =========================================================
#                T E S T   F U N C T I O N S
# =========================================================
def test_collect(regime, small_system):
    """Test simulating short trajectories for a sample budget."""
    data = regime.collect(small_system, _T_, _SEED_)
    assert len(data) == 40
    assert all(len(traj) == 2 * _TAU_ for traj in data)
    assert regime.runLength == 2 * _TAU_
    assert regime.budget(data) == _T_

    other = regime.collect(small_system, _T_, _SEED_)
    assert all(np.array_equal(a.outputs, b.outputs) for a, b in zip(data, other))

    # Budget rounds down to whole trajectories
    assert regime.budget(regime.collect(small_system, _T_ + 4, _SEED_)) == _T_


def test_estimate_noiseless(small_system, noiseless):
    """Test that noiseless data give the exact Hankel matrix."""
    regime = MultiTrajectoryRegime(_TAU_, 1, 1, noiseless)
    data = regime.collect(small_system, _T_, _SEED_)
    H_hat = regime.estimate(data)
    H = true_hankel(small_system, _TAU_)
    assert H_hat.data.shape == (3, 3)
    assert np.allclose(H_hat.data, H.data, atol=1e-8 * max(1.0, np.abs(H.data).max()))

    result = regime.identify(data)
    assert result.threshold == 0.0
    assert result.order == small_system.n


def test_estimate_too_few_trajectories(regime, small_system):
    """Test estimate with fewer trajectories than unknowns."""
    data = regime.collect(small_system, 20, _SEED_)
    assert len(data) == 4
    with pytest.raises(IllPosedRegressionError) as e:
        regime.estimate(data)
    assert e.type == IllPosedRegressionError
    assert (e.value.rank, e.value.cols) == (4, 5)


def test_threshold_and_bound(regime):
    """Test threshold and error bound for a sample budget."""
    p = regime.params(_T_)
    assert regime.threshold(_T_) == threshold_multi(p)
    assert regime.lse_bound(_T_) == lse_bound_multi(p)
    assert regime.threshold(4 * _T_) == pytest.approx(regime.threshold(_T_) / 2)


def test_identify(regime, small_system):
    """Test identification with default and overridden thresholds."""
    data = regime.collect(small_system, 2000, _SEED_)
    result = regime.identify(data)
    assert result.threshold == regime.threshold(2000)
    assert 0 <= result.order <= 3

    result = regime.identify(data, xi=1e6)
    assert result.order == 0
    assert result.threshold == 1e6


def test_floors(regime, small_system):
    """Test sample-size floors."""
    floors = regime.floors(small_system)
    assert isinstance(floors, SampleFloors)
    assert floors.T0 > 0
    assert floors.T2 >= floors.T1 > 0
