import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from dunkl_analyzer.errors import UnsupportedArgumentError
from dunkl_analyzer.specfun.bessel import (
    MAX_ARGUMENT,
    SERIES_SWITCH,
    as_index,
    bessel_decay_constant,
    bessel_j,
    bessel_j_derivative,
    bessel_j_imaginary,
    bessel_j_laplacian,
    one_minus_bessel_j,
)


def test_value_at_origin():
    """j_λ(0) = 1 for every index"""
    for lam in (-0.5, 0.0, 0.5, 1.0, 2.5):
        assert bessel_j(lam, 0.0) == pytest.approx(1.0, abs=1e-15)


def test_half_integer_closed_forms():
    """j_{1/2}(t) = sin t / t and j_{-1/2}(t) = cos t"""
    t = np.linspace(0.1, 40.0, 400)
    np.testing.assert_allclose(bessel_j(0.5, t), np.sin(t) / t, atol=1e-12)
    np.testing.assert_allclose(bessel_j(-0.5, t), np.cos(t), atol=1e-12)


def test_even_in_t():
    """j_λ(−t) = j_λ(t)"""
    t = np.linspace(0.0, 10.0, 50)
    np.testing.assert_allclose(bessel_j(1.0, -t), bessel_j(1.0, t))


def test_shape_is_kept():
    """Scalars come back as floats and arrays keep their shape"""
    assert isinstance(bessel_j(0.0, 1.0), float)
    assert bessel_j(0.0, np.ones((3, 4))).shape == (3, 4)


def test_one_minus_near_origin():
    """1 − j_λ(t) ≈ t²/(4(λ+1)) without cancellation"""
    t = np.array([1e-6, 1e-4, 1e-2])
    for lam in (0.0, 1.5):
        expected = t ** 2 / (4.0 * (lam + 1.0))
        np.testing.assert_allclose(one_minus_bessel_j(lam, t), expected, rtol=1e-3)


def test_derivative_recurrence():
    """d/dt j_λ = −t/(2λ+2) j_{λ+1}"""
    t = np.linspace(0.0, 15.0, 61)
    lam = 0.7
    expected = -t / (2.0 * lam + 2.0) * bessel_j(lam + 1.0, t)
    np.testing.assert_allclose(bessel_j_derivative(lam, t, 1), expected, atol=1e-12)


@pytest.mark.parametrize("lam", [0.0, 0.5, 1.7])
def test_laplacian_keeps_the_eigenfunction(lam):
    """−(d²/dt² + (2λ+1)/t d/dt) j_λ = j_λ, at every power"""
    t = np.array([0.0, 0.4, 1.3, 3.0, 6.5])
    for r in (1, 2):
        np.testing.assert_allclose(bessel_j_laplacian(lam, t, r), bessel_j(lam, t), rtol=1e-8, atol=1e-10)
    np.testing.assert_array_equal(bessel_j_laplacian(lam, t, 0), bessel_j(lam, t))
    with pytest.raises(ValueError):
        bessel_j_laplacian(lam, t, -1)


def test_derivative_order_limits():
    """Derivative order outside [0, 4] is rejected"""
    with pytest.raises(ValueError):
        bessel_j_derivative(0.0, 1.0, 5)


def test_imaginary_argument():
    """j_{1/2}(it) = sinh t / t and the scaled form never overflows"""
    t = np.array([0.5, 1.0, 3.0, 10.0])
    np.testing.assert_allclose(bessel_j_imaginary(0.5, t), np.sinh(t) / t, rtol=1e-12)
    assert np.isfinite(bessel_j_imaginary(1.0, 5000.0, scaled=True))
    with pytest.raises(UnsupportedArgumentError):
        bessel_j_imaginary(1.0, 5000.0)


def test_argument_range():
    """Arguments beyond the supported range raise"""
    with pytest.raises(UnsupportedArgumentError):
        bessel_j(0.0, 2.0 * MAX_ARGUMENT)


def test_index_validation():
    """λ < −1/2 is not an index"""
    with pytest.raises(ValueError):
        as_index(-0.75)


@pytest.mark.parametrize("lam", [0.0, 0.5, 1.7, 4.0])
def test_branches_agree_at_switch(lam):
    """Series and library branches meet at the switch and match Γ(λ+1)(2/t)^λ J_λ(t)"""
    t = np.array([SERIES_SWITCH * (1 - 1e-9), SERIES_SWITCH * (1 + 1e-9)])
    values = bessel_j(lam, t)
    assert values[0] == pytest.approx(values[1], rel=1e-8)
    for x in (1.5, 2.5):
        expected = special.gamma(lam + 1.0) * (2.0 / x) ** lam * special.jv(lam, x)
        assert bessel_j(lam, x) == pytest.approx(expected, rel=1e-12)


def test_decay_constant_is_moderate():
    """|j_λ(t)| (1+t)^{λ+1/2} stays bounded on [0, 200]"""
    constant = bessel_decay_constant(1.0, 0)
    assert 0.5 < constant < 10.0


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=-0.5, max_value=6.0), st.floats(min_value=0.0, max_value=500.0))
def test_bounded_by_one(lam, t):
    """|j_λ(t)| <= 1"""
    assert abs(bessel_j(lam, t)) <= 1.0 + 1e-12


if __name__ == "__main__":
    pytest.main([__file__])
