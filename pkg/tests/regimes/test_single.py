"""Test cases for 'single' regime module."""
import numpy as np
import pytest

from f451_sysid.estimators import lse_bound_single
from f451_sysid.estimators import SampleFloors
from f451_sysid.estimators import threshold_single
from f451_sysid.exceptions import MissingAttributeError
from f451_sysid.lti import hinf_norm
from f451_sysid.lti import Trajectory
from f451_sysid.regimes import SingleTrajectoryRegime


# =========================================================
#     G L O B A L S   &   P Y T E S T   F I X T U R E S
# =========================================================
_TAU_ = 3
_T_ = 400
_SEED_ = 11


@pytest.fixture()
def regime(small_system, default_noise):
    """Return single-trajectory regime for the small system."""
    return SingleTrajectoryRegime.for_system(small_system, _TAU_, default_noise)


# =========================================================
#                T E S T   F U N C T I O N S
# =========================================================
def test_for_system(regime, small_system, default_noise):
    """Test creating regime for a known system."""
    assert regime.beta == hinf_norm(small_system)
    assert (regime.d_u, regime.d_y) == (1, 1)

    other = SingleTrajectoryRegime.for_system(small_system, _TAU_, default_noise, beta=5.0)
    assert other.beta == 5.0


def test_missing_beta(small_system, default_noise):
    """Test thresholds without an H-infinity norm bound."""
    regime = SingleTrajectoryRegime(_TAU_, 1, 1, default_noise)
    with pytest.raises(MissingAttributeError) as e:
        regime.threshold(_T_)
    assert e.type == MissingAttributeError
    assert "beta" in e.value.args[0]

    with pytest.raises(MissingAttributeError):
        regime.lse_bound(_T_)
    with pytest.raises(MissingAttributeError):
        regime.floors(small_system)

    # Identification still works with explicit threshold
    data = regime.collect(small_system, _T_, _SEED_)
    assert regime.identify(data, xi=1e6).order == 0


def test_collect(regime, small_system):
    """Test simulating one trajectory for a sample budget."""
    data = regime.collect(small_system, _T_, _SEED_)
    assert isinstance(data, Trajectory)
    assert len(data) == _T_
    assert regime.budget(data) == _T_
    assert np.array_equal(data.inputs, regime.collect(small_system, _T_, _SEED_).inputs)


def test_estimate(regime, small_system):
    """Test least-squares Hankel estimate from one trajectory."""
    data = regime.collect(small_system, _T_, _SEED_)
    H_hat = regime.estimate(data)
    assert H_hat.data.shape == (3, 3)
    assert (H_hat.tau, H_hat.d_u, H_hat.d_y) == (_TAU_, 1, 1)
    assert np.all(np.isfinite(H_hat.data))


def test_threshold_and_bound(regime):
    """Test threshold and error bound for a sample budget."""
    p = regime.params(_T_, regime.beta)
    assert regime.threshold(_T_) == threshold_single(p)
    assert regime.lse_bound(_T_) == lse_bound_single(p)
    assert regime.lse_bound(_T_) == regime.threshold(_T_) / 2


def test_identify(regime, small_system):
    """Test identification with default threshold."""
    data = regime.collect(small_system, _T_, _SEED_)
    result = regime.identify(data)
    assert result.threshold == regime.threshold(_T_)
    assert 0 <= result.order <= 3


def test_floors(regime, small_system):
    """Test sample-size floors."""
    floors = regime.floors(small_system)
    assert isinstance(floors, SampleFloors)
    assert floors.T2 >= floors.T1 > 0
