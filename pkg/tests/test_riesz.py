import numpy as np
import pytest

from dunkl_analyzer.errors import InvalidExponentsError, TruncatedLevelSetError, UnsupportedArgumentError
from dunkl_analyzer.measure.profile import gaussian
from dunkl_analyzer.measure.quadrature import default_grid, make_measure
from dunkl_analyzer.reports import Contract, Verdict
from dunkl_analyzer.transforms.riesz import (
    far_field_coefficient,
    level_set_measure,
    make_riesz,
    maximal_function,
    riesz_multiplier_check,
    riesz_split,
    riesz_value,
    scaling_covariance_check,
    split_check,
    weak_type_estimate,
)


def test_order_range():
    """0 < α < 2λ+2"""
    with pytest.raises(InvalidExponentsError):
        make_riesz(0.0, 0.5)
    with pytest.raises(InvalidExponentsError):
        make_riesz(3.0, 0.5)
    assert make_riesz(1.0, 0.0).d == pytest.approx(1.0)


def test_conjugate_exponent():
    """1/q = 1/p − α/(2λ+2)"""
    params = make_riesz(1.0, 0.0)
    assert params.conjugate_exponent(1.5) == pytest.approx(6.0)
    with pytest.raises(InvalidExponentsError):
        params.conjugate_exponent(1.0)
    with pytest.raises(InvalidExponentsError):
        params.conjugate_exponent(2.0)


def test_potential_at_origin():
    """I_1 e^{-t²/2}(0) = √(π/2) at λ = 0"""
    f = gaussian(make_measure(0.0))
    params = make_riesz(1.0, 0.0)
    assert riesz_value(f, params, 0.0) == pytest.approx(np.sqrt(np.pi / 2.0), rel=1e-8)
    assert far_field_coefficient(f, params) == pytest.approx(1.0)


def test_scaling_covariance():
    """I_α(f(s·))(x) = s^{-α} I_α f(s x)"""
    f = gaussian(make_measure(0.5))
    report = scaling_covariance_check(f, make_riesz(1.0, 0.5), 2.0, [0.25, 1.0, 2.0])
    assert report.verdict is Verdict.PASS


def test_split_matches_direct():
    """J₁ + J₂ = I_α f(x) for every split radius"""
    f = gaussian(make_measure(1.0))
    params = make_riesz(1.5, 1.0)
    assert split_check(f, params, 1.0).verdict is Verdict.PASS
    parts = riesz_split(f, params, 1.0, 2.0)
    assert abs(parts["j2"]) <= parts["holder_bound"] * (1.0 + 1e-9)


def test_multiplier_identity():
    """H(I_α f)(ρ) = ρ^{-α} H(f)(ρ)"""
    f = gaussian(make_measure(0.5))
    report = riesz_multiplier_check(f, make_riesz(1.0, 0.5), rho=[0.5, 1.0, 2.0, 4.0])
    assert report.contract is Contract.EXACT
    assert not report.failed


def test_multiplier_needs_small_order():
    """The far-field model has no transform for α >= λ + 3/2"""
    f = gaussian(make_measure(0.0))
    with pytest.raises(UnsupportedArgumentError):
        riesz_multiplier_check(f, make_riesz(1.6, 0.0))


def test_maximal_function_of_gaussian():
    """Ball averages of a radially decreasing profile peak at r → 0"""
    f = gaussian(make_measure(0.0))
    assert maximal_function(f, 0.0) == pytest.approx(1.0, rel=1e-8)
    assert maximal_function(f, 2.0) >= f(2.0)


def test_level_set_measure():
    """ν_0{e^{-t²/2} > e^{-1/2}} = ν_0([0, 1)) = 1/2"""
    grid = default_grid(make_measure(0.0))
    values = np.exp(-grid.nodes ** 2 / 2.0)
    assert level_set_measure(grid, values, np.exp(-0.5)) == pytest.approx(0.5, rel=1e-4)
    with pytest.raises(TruncatedLevelSetError):
        level_set_measure(grid, np.ones(grid.size), 0.5)


def test_unknown_weak_type_functional():
    """Only maximal and riesz"""
    f = gaussian(make_measure(0.0))
    with pytest.raises(ValueError):
        weak_type_estimate(f, "hardy", [0.1])


if __name__ == "__main__":
    pytest.main([__file__])
