import math
from fractions import Fraction

import pytest

from dyncolor.config import Config, auto_zeta


def test_defaults_are_exact_fractions():
    cfg = Config()
    assert cfg.epsilon == Fraction(1, 110)
    assert cfg.gamma == Fraction(1, 16)
    assert isinstance(cfg.slack_coeff, Fraction)


def test_string_and_float_coercion():
    cfg = Config(epsilon="1/8", gamma=0.25)
    assert cfg.epsilon == Fraction(1, 8)
    assert cfg.gamma == Fraction(1, 4)


def test_epsilon_bounds():
    with pytest.raises(ValueError):
        Config(epsilon=Fraction(1, 6))
    with pytest.raises(ValueError):
        Config(epsilon=0)


def test_zeta_positive():
    with pytest.raises(ValueError):
        Config(zeta=0)


def test_phase_length():
    assert Config(zeta=1).phase_length == 1  # floor(1/16) clamped up
    assert Config(zeta=64).phase_length == 4
    assert Config(zeta=64, gamma=1).phase_length == 64


def test_dispatch_threshold():
    cfg = Config(epsilon=Fraction(1, 8), zeta=1)
    # active iff delta * eps^2 * delta_const >= zeta
    assert cfg.dense_path_active(64)
    assert not cfg.dense_path_active(63)
    cfg2 = Config(epsilon=Fraction(1, 8), zeta=4)
    assert not cfg2.dense_path_active(255)
    assert cfg2.dense_path_active(256)


def test_dissolve_threshold_scales():
    cfg = Config(epsilon=Fraction(1, 8), zeta=2)
    assert cfg.dissolve_threshold() == Fraction(50 * 2 * 64)


def test_auto_zeta():
    assert auto_zeta(1) == 1
    assert auto_zeta(1000) == 100
    assert auto_zeta(n := 512) == math.ceil(n ** (2 / 3))


def test_to_dict_roundtrips_strings():
    d = Config(epsilon="1/9", zeta=7).to_dict()
    assert d["epsilon"] == "1/9"
    assert d["zeta"] == 7
