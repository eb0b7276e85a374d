"""PyTest fixtures and helper functions, etc."""
import json
import pprint
import uuid
from inspect import getframeinfo

import numpy as np
import pytest

import f451_sysid.constants as const
from f451_sysid.lti import markov_parameters
from f451_sysid.lti import NoiseSpec
from f451_sysid.lti import random_system
from f451_sysid.lti import StateSpaceSystem


# =========================================================
#                      H E L P E R S
# =========================================================
class Helpers:
    """Generic helper class.

    This class provides utility methods that can be accessed
    from within test functions.
    """

    @staticmethod
    def pp(capsys, data, frame=None):
        """(Magic) Pretty Print function."""
        with capsys.disabled():
            _PP_ = pprint.PrettyPrinter(indent=4)
            print("\n")
            if frame is not None:
                print(f"LINE #: {getframeinfo(frame).lineno}\n")
            _PP_.pprint(data)

    @staticmethod
    def max_markov_gap(A, B, C, system, count):
        """Return max Frobenius gap between Markov parameters of (A, B, C) and 'system'."""
        gaps = []
        AkB = np.array(B)
        for mp in markov_parameters(system, count):
            gaps.append(np.linalg.norm(C @ AkB - mp))
            AkB = A @ AkB
        return max(gaps)

    @staticmethod
    def random_matrix(seed, rows, cols):
        """Return seeded standard Gaussian matrix."""
        return np.random.default_rng(seed).standard_normal((rows, cols))


# =========================================================
#        G L O B A L   P Y T E S T   F I X T U R E S
# =========================================================
_REF_N_ = 5
_REF_D_U_ = 3
_REF_D_Y_ = 2
_REF_TAU_ = 6

_TEST_CONFIG_ = {
    const.KWD_MODE: const.MODE_MULTI,
    const.KWD_N: 2,
    const.KWD_D_U: 1,
    const.KWD_D_Y: 1,
    const.KWD_TAU: 3,
    const.KWD_SIGMA_U: 1.0,
    const.KWD_SIGMA_Z: 0.1,
    const.KWD_DELTA: 0.05,
    const.KWD_T_GRID: [200, 400],
    const.KWD_TRIALS: 3,
    const.KWD_SEED: 7,
}


@pytest.fixture()
def helpers():
    """Return `Helper` object.

    This makes it easier to use helper functions inside tests.
    """
    return Helpers


@pytest.fixture()
def scalar_system():
    """Return scalar system ``A=0.5, B=1, C=1``."""
    return StateSpaceSystem([[0.5]], [[1.0]], [[1.0]])


@pytest.fixture()
def small_system():
    """Return small random system (n=2, d_u=1, d_y=1)."""
    return random_system(2, 1, 1, seed=7)


@pytest.fixture()
def ref_system():
    """Return random system with reference setup dimensions (n=5, d_u=3, d_y=2)."""
    return random_system(_REF_N_, _REF_D_U_, _REF_D_Y_, seed=451)


@pytest.fixture()
def ref_tau():
    """Return window length for reference setup."""
    return _REF_TAU_


@pytest.fixture()
def noiseless():
    """Return noise spec without observation noise."""
    return NoiseSpec(sigma_u=1.0, sigma_z=0.0)


@pytest.fixture()
def default_noise():
    """Return noise spec with default levels."""
    return NoiseSpec(sigma_u=1.0, sigma_z=0.1)


@pytest.fixture()
def valid_config_dict(tmp_path):
    """Return valid (small) experiment config as `dict`."""
    return {
        **_TEST_CONFIG_,
        const.KWD_OUTPUT: str(tmp_path / "results.csv"),
    }


@pytest.fixture()
def new_config_file(tmp_path, valid_config_dict):
    """Create JSON experiment config file."""
    configFile = tmp_path / f"{uuid.uuid4().hex}.json"
    configFile.write_text(json.dumps(valid_config_dict))

    return str(configFile)


@pytest.fixture()
def invalid_file():
    """Create an invalid filename string."""
    return "/tmp/INVALID.FILE"  # noqa: S108


@pytest.fixture()
def invalid_string():
    """Create an invalid string."""
    return "INVALID_STRING"
