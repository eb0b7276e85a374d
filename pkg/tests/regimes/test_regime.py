"""Test cases for the generic 'regime' (base class) module."""
import pytest

import f451_sysid.constants as const
from f451_sysid.exceptions import InvalidArgumentError
from f451_sysid.lti import hinf_norm
from f451_sysid.regimes import make_regime
from f451_sysid.regimes import MultiTrajectoryRegime
from f451_sysid.regimes import SingleTrajectoryRegime


# =========================================================
#     G L O B A L S   &   P Y T E S T   F I X T U R E S
# =========================================================
_TAU_ = 3


# =========================================================
#                T E S T   F U N C T I O N S
# =========================================================
def test_regime_invalid(default_noise):
    """Test validation of regime arguments."""
    with pytest.raises(InvalidArgumentError) as e:
        MultiTrajectoryRegime(1, 1, 1, default_noise)
    assert e.type == InvalidArgumentError
    assert "tau must be >= 2" in e.value.args[0]

    with pytest.raises(InvalidArgumentError):
        MultiTrajectoryRegime(_TAU_, 0, 1, default_noise)

    with pytest.raises(InvalidArgumentError) as e:
        SingleTrajectoryRegime(_TAU_, 1, 1, default_noise, delta=1.0)
    assert "delta" in e.value.args[0]


def test_regime_properties(default_noise):
    """Test regime properties and threshold parameters."""
    regime = MultiTrajectoryRegime(_TAU_, 2, 1, default_noise, delta=0.1)
    assert regime.regimeName == const.MODE_MULTI
    assert (regime.tau, regime.d_u, regime.d_y) == (_TAU_, 2, 1)
    assert regime.noise is default_noise
    assert regime.delta == 0.1
    assert "name=multi" in repr(regime)

    p = regime.params(500, beta=2.0)
    assert (p.T, p.tau, p.d_u, p.d_y) == (500, _TAU_, 2, 1)
    assert (p.sigma_u, p.sigma_z, p.delta, p.beta) == (1.0, 0.1, 0.1, 2.0)


def test_regime_floors_short_window(ref_system, default_noise):
    """Test floors when the window is too short for the system order."""
    regime = MultiTrajectoryRegime(2, 3, 2, default_noise)
    with pytest.raises(InvalidArgumentError) as e:
        regime.floors(ref_system)
    assert e.type == InvalidArgumentError
    assert "too short" in e.value.args[0]


def test_make_regime(small_system, default_noise):
    """Test creating regimes by mode."""
    regime = make_regime(const.MODE_MULTI, _TAU_, 1, 1, default_noise)
    assert isinstance(regime, MultiTrajectoryRegime)

    regime = make_regime(const.MODE_SINGLE, _TAU_, 1, 1, default_noise)
    assert isinstance(regime, SingleTrajectoryRegime)
    assert regime.beta is None

    regime = make_regime(const.MODE_SINGLE, _TAU_, 1, 1, default_noise, beta=3.0)
    assert regime.beta == 3.0

    regime = make_regime(const.MODE_SINGLE, _TAU_, 1, 1, default_noise, system=small_system)
    assert regime.beta == hinf_norm(small_system)

    regime = make_regime(
        const.MODE_SINGLE, _TAU_, 1, 1, default_noise, beta=3.0, system=small_system
    )
    assert regime.beta == 3.0


def test_make_regime_invalid(default_noise, invalid_string):
    """Test creating regimes with unknown mode."""
    with pytest.raises(InvalidArgumentError) as e:
        make_regime(invalid_string, _TAU_, 1, 1, default_noise)
    assert e.type == InvalidArgumentError
    assert invalid_string in e.value.args[0]
