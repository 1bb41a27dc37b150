import numpy as np
import pytest

from dunkl_analyzer.errors import InvalidExponentsError, SingularMultiplierError, UnboundedTailError
from dunkl_analyzer.measure.norms import lp_norm
from dunkl_analyzer.measure.profile import AnalyticProfile, Decay, DecayKind, SampledProfile, gaussian
from dunkl_analyzer.measure.quadrature import default_grid, make_measure, make_radial_grid
from dunkl_analyzer.reports import Verdict
from dunkl_analyzer.transforms.hankel import (
    bandlimit_project,
    cutoff_multiplier_decay,
    hankel_transform,
    spectral_multiply,
    to_spectral,
)
from dunkl_analyzer.transforms.translate import (
    contraction_check,
    convolve,
    mass_check,
    positivity_margin,
    rank_one_consistency_check,
    translation_values,
    young_check,
    young_exponent,
)


@pytest.mark.parametrize("lam", [-0.5, 0.0, 1.0])
def test_gaussian_fixed_point(lam):
    """H_λ(e^{-t²/2}) = e^{-r²/2} through quadrature"""
    measure = make_measure(lam)
    grid = default_grid(measure)
    f = SampledProfile(grid, np.exp(-grid.nodes ** 2 / 2.0), Decay(DecayKind.GAUSSIAN, 0.5))
    out_grid = make_radial_grid(measure, 6.0, 12, 16, certify=False)
    transformed = hankel_transform(f, out_grid)
    np.testing.assert_allclose(transformed.values, np.exp(-out_grid.nodes ** 2 / 2.0), atol=1e-9)


def test_unitarity():
    """‖H f‖₂ = ‖f‖₂"""
    f = AnalyticProfile("exponential", {"a": 1.0}, make_measure(0.5))
    F = to_spectral(f)
    spectral = np.sqrt(F.grid.integrate(F.values ** 2))
    assert spectral == pytest.approx(lp_norm(f, 2.0), rel=1e-6)


def test_involution():
    """H(H f) = f"""
    f = AnalyticProfile("gaussian_moment", {"n": 1, "a": 0.5}, make_measure(1.0))
    F = to_spectral(f)
    t = np.array([0.0, 0.5, 1.3, 2.0, 4.0])
    np.testing.assert_allclose(F(t), f(t), atol=1e-8)


def test_bandlimit_projection():
    """The smooth cutoff keeps [0, σ] and removes everything beyond 2σ"""
    f = gaussian(make_measure(0.0))
    P = bandlimit_project(f, 1.5)
    assert P.band == pytest.approx(3.0)
    inside = np.array([0.2, 1.0, 1.5])
    np.testing.assert_allclose(P.spectrum(inside), f.spectrum(inside), rtol=1e-6)
    np.testing.assert_array_equal(P.spectrum(np.array([3.5, 10.0])), 0.0)
    with pytest.raises(ValueError):
        bandlimit_project(f, 0.0)


def test_transform_needs_decay():
    """A constant profile has no Hankel transform"""
    f = AnalyticProfile("constant", {}, make_measure(0.0))
    with pytest.raises(UnboundedTailError):
        to_spectral(f)


def test_singular_multiplier():
    """1/r on a spectrum that does not vanish at 0"""
    f = gaussian(make_measure(0.0))
    with pytest.raises(SingularMultiplierError):
        spectral_multiply(f, lambda r: 1.0 / r)
    excised = spectral_multiply(f, lambda r: 1.0 / r, excise=0.1)
    assert np.all(np.isfinite(excised.values))


def test_cutoff_kernel_is_integrable():
    """H(η₀) decays faster than t^{-(2λ+2)}"""
    result = cutoff_multiplier_decay(0.0, t_max=60.0, points=120)
    assert result["integrable"]
    assert np.isfinite(result["l1_mass"])


def test_bump_spectrum():
    """Sonine closed form against quadrature; ∫ (1 − t²/4)₊^6 dν_1 = 1/14"""
    measure = make_measure(1.0)
    f = AnalyticProfile("bump", {"radius": 2.0, "k": 6}, measure)
    grid = make_radial_grid(measure, 2.0, 16, 16, certify=False)
    sampled = SampledProfile(grid, f(grid.nodes), Decay(DecayKind.COMPACT, support=2.0))
    out_grid = make_radial_grid(measure, 5.0, 10, 16, certify=False)
    np.testing.assert_allclose(hankel_transform(sampled, out_grid).values, f.spectrum(out_grid.nodes), atol=1e-10)
    assert f.spectrum(0.0) == pytest.approx(1.0 / 14.0)


@pytest.mark.parametrize("lam", [0.0, 0.5, 2.5])
def test_translation_closed_form(lam):
    """Angular quadrature matches e^{-(x−t)²/2} j_λ(ixt) e^{-xt}"""
    f = gaussian(make_measure(lam))
    x = np.array([0.0, 0.5, 1.0, 3.0])
    t = np.array([1.0, 2.0, 0.0, 1.5])
    quadrature = translation_values(f, x, t)
    closed = translation_values(f, x, t, closed_form=True)
    np.testing.assert_allclose(quadrature, closed, atol=1e-10)


def test_classical_translation():
    """λ = -1/2 averages f(x − t) and f(x + t)"""
    f = gaussian(make_measure(-0.5))
    x, t = 1.2, 0.7
    expected = 0.5 * (np.exp(-(x - t) ** 2 / 2.0) + np.exp(-(x + t) ** 2 / 2.0))
    assert translation_values(f, x, t) == pytest.approx(expected)


def test_translation_properties():
    """Mass, positivity, L^p contraction and the rank-one average"""
    f = AnalyticProfile("bump", {"radius": 4.0, "k": 12}, make_measure(0.5))
    assert mass_check(f, 1.5).verdict is Verdict.PASS
    assert positivity_margin(f, 2.0) >= -1e-12
    assert contraction_check(f, [0.5, 2.0], 2.0).verdict is Verdict.PASS
    assert rank_one_consistency_check(f, 1.0, [0.3, 1.0, 2.0]).verdict is Verdict.PASS


def test_young_exponent():
    """1/r = 1/p + 1/q − 1"""
    assert young_exponent(1.0, 1.0) == pytest.approx(1.0)
    assert young_exponent(2.0, 1.0) == pytest.approx(2.0)
    assert young_exponent(2.0, 2.0) == float("inf")
    with pytest.raises(InvalidExponentsError):
        young_exponent(0.5, 1.0)
    with pytest.raises(InvalidExponentsError):
        young_exponent(3.0, 3.0)


def test_young_inequality():
    """‖f ∗ g‖_r <= ‖f‖_p ‖g‖_q"""
    measure = make_measure(0.0)
    grid = make_radial_grid(measure, 12.0, 24, 16)
    f = gaussian(measure)
    g = gaussian(measure, a=1.0)
    assert young_check(f, g, 2.0, 1.0, grid).verdict is Verdict.PASS


def test_gaussian_convolution():
    """e^{-t²/2} ∗ e^{-t²/2} = 2^{-λ-1} e^{-t²/4}"""
    measure = make_measure(0.0)
    grid = make_radial_grid(measure, 12.0, 24, 16)
    f = gaussian(measure)
    conv = convolve(f, f, grid)
    expected = 0.5 * np.exp(-grid.nodes ** 2 / 4.0)
    np.testing.assert_allclose(conv.values[grid.nodes < 6.0], expected[grid.nodes < 6.0], atol=1e-8)


if __name__ == "__main__":
    pytest.main([__file__])
