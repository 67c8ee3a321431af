import math

import pytest

from cavisteady.errors import BadN, BadTruncation, NonPositiveGamma0
from cavisteady.params import SystemParams, validate_params


def test_fig1_parameter_point_validates():
    p = validate_params(
        {
            "delta": 0.0,
            "u": 6.0,
            "j": 0.3,
            "omega": 0.5,
            "gamma0": 1.0,
            "n_thermal": 0.0,
            "n_cavities": 4,
            "n_max": 2,
        }
    )
    assert p.gamma == 1.0
    assert p.pump == 0.0
    assert p.n_cavities == 4


def test_thermal_bath_rates():
    p = validate_params({"n_thermal": 0.3, "gamma0": 1.0})
    assert math.isclose(p.gamma, 1.3)
    assert math.isclose(p.pump, 0.3)
    assert p.gamma > p.pump


def test_defaults():
    p = validate_params({})
    assert p.gamma0 == 1.0 and p.n_thermal == 0.0
    assert p.n_cavities == 1 and p.n_max == 2


def test_zero_gamma0_rejected():
    with pytest.raises(NonPositiveGamma0):
        validate_params({"gamma0": 0.0})
    with pytest.raises(NonPositiveGamma0):
        validate_params({"gamma0": -1.0})


def test_bad_truncation_and_ring_size():
    with pytest.raises(BadTruncation):
        validate_params({"n_max": 0})
    with pytest.raises(BadN):
        validate_params({"n_cavities": 0})


def test_nonfinite_and_unknown_fields_rejected():
    with pytest.raises(ValueError):
        validate_params({"delta": float("inf")})
    with pytest.raises(ValueError):
        validate_params({"n_thermal": -0.1})
    with pytest.raises(ValueError):
        validate_params({"coupling": 1.0})


def test_existing_params_revalidated():
    p = SystemParams(delta=0.0, u=0.0, j=0.0, omega=0.0, gamma0=2.0)
    assert validate_params(p) is p
    bad = SystemParams(delta=0.0, u=0.0, j=0.0, omega=0.0, gamma0=-2.0)
    with pytest.raises(NonPositiveGamma0):
        validate_params(bad)
