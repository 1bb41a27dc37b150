import numpy as np
import pytest

from dunkl_analyzer.specfun.cutoff import SHARP, SMOOTH, eta0
from dunkl_analyzer.specfun.omega import omega_comparability, omega_parameters, weight_omega


def test_parameters():
    """k = ⌊γ + 1/2⌋ and index k − γ"""
    assert omega_parameters(0.3) == (0, pytest.approx(-0.3))
    assert omega_parameters(1.7) == (2, pytest.approx(0.3))
    with pytest.raises(ValueError):
        omega_parameters(-1.0)


def test_weight_is_positive_and_even():
    """ω_γ > 0 away from 0 and ω_γ(−x) = ω_γ(x)"""
    x = np.linspace(0.01, 50.0, 200)
    for gamma in (0.3, 0.8, 1.7):
        values = weight_omega(gamma, x)
        assert np.all(values > 0)
        np.testing.assert_allclose(weight_omega(gamma, -x), values)


def test_comparability_constants():
    """ω_γ is comparable with x^{2k+2} near 0 and x^{2γ+1} at infinity"""
    for gamma in (0.3, 0.8, 1.7):
        constants = omega_comparability(gamma, points=400)
        assert 0 < constants["near_min"] <= constants["near_max"] < np.inf
        assert 0 < constants["far_min"] <= constants["far_max"] < np.inf
        assert constants["near_max"] / constants["near_min"] < 100.0
        assert constants["far_max"] / constants["far_min"] < 100.0


def test_smooth_cutoff():
    """η₀ is 1 on [0, 1], 0 beyond 2 and monotone in between"""
    t = np.linspace(0.0, 3.0, 301)
    values = eta0(t)
    assert np.all(values[t <= 1.0] == 1.0)
    assert np.all(values[t >= 2.0] == 0.0)
    assert np.all(np.diff(values) <= 1e-15)


def test_cutoff_profiles():
    """Support factors and the sharp indicator"""
    assert SMOOTH.support_factor == 2.0
    assert SHARP.support_factor == 1.0
    np.testing.assert_array_equal(SHARP(np.array([0.5, 1.0, 1.5]), 1.0), [1.0, 1.0, 0.0])


if __name__ == "__main__":
    pytest.main([__file__])
