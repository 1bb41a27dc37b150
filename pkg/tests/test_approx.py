from dataclasses import dataclass

import numpy as np
import pytest
from scipy import special

from dunkl_analyzer.approx import best as best_module
from dunkl_analyzer.approx.best import (
    best_approx,
    find_a,
    k_functional_bruteforce,
    k_functional_realization,
    spectral_tail_mass,
)
from dunkl_analyzer.approx.checks import error_sequence, vallee_poussin_reproduction_check
from dunkl_analyzer.approx.differences import (
    DifferenceScheme,
    difference,
    laplacian_power,
    modulus,
    path_equivalence_check,
)
from dunkl_analyzer.errors import NotFoundError
from dunkl_analyzer.measure.norms import lp_norm
from dunkl_analyzer.measure.profile import AnalyticProfile, PointwiseProfile, SpectralProfile, spectral_grid
from dunkl_analyzer.measure.quadrature import make_measure
from dunkl_analyzer.reports import Verdict
from dunkl_analyzer.specfun.bessel import bessel_j
from dunkl_analyzer.specfun.cutoff import CutoffProfile, eta0
from dunkl_analyzer.specfun.kernels import Scheme
from dunkl_analyzer.transforms.hankel import bandlimit_project


def test_difference_scheme_validation():
    """Order zero is rejected and the iterated scheme has no translation sum"""
    with pytest.raises(ValueError):
        DifferenceScheme(Scheme.FORWARD, 0)
    with pytest.raises(ValueError):
        DifferenceScheme(Scheme.ITERATED, 2).translation_terms()


def test_translation_terms():
    assert DifferenceScheme(Scheme.FORWARD, 2).translation_terms() == [(0, 1.0), (1, -2.0), (2, 1.0)]
    symmetric = dict(DifferenceScheme(Scheme.SYMMETRIC, 1).translation_terms())
    assert symmetric[0] == 1.0
    assert symmetric[1] == pytest.approx(-1.0)
    assert DifferenceScheme("symmetric", 3).label == "symmetric3"


@pytest.mark.parametrize("scheme", ["iterated", "forward", "symmetric"])
def test_bessel_wave_eigen_difference(scheme):
    """Δ_t j_λ(σ·) = ĵ(tσ) j_λ(σ·)"""
    lam, sigma, t = 0.5, 2.0, 0.5
    wave = AnalyticProfile("bessel_wave", {"sigma": sigma}, make_measure(lam))
    difference_scheme = DifferenceScheme(scheme, 2)
    result = difference(wave, difference_scheme, t)
    x = np.linspace(0.0, 5.0, 11)
    expected = difference_scheme.kernel(lam)(t * sigma) * wave(x)
    np.testing.assert_allclose(result(x), expected, atol=1e-14)


def test_first_order_eigen_amplitude():
    wave = AnalyticProfile("bessel_wave", {"sigma": 2.0}, make_measure(0.0))
    result = difference(wave, DifferenceScheme("forward", 1), 0.5)
    assert result.amplitude == pytest.approx(1.0 - bessel_j(0.0, 1.0), rel=1e-12)


def test_difference_argument_errors():
    f = AnalyticProfile("gaussian", {}, make_measure(0.0))
    with pytest.raises(ValueError):
        difference(f, DifferenceScheme("forward", 1), 0.0)
    with pytest.raises(ValueError):
        difference(f, DifferenceScheme("forward", 1), 0.5, path="fourier")


@pytest.mark.parametrize("r", [0, 1, 2])
def test_laplacian_power_on_bessel_wave(r):
    """(−Δ)^r j_λ(σ·) = σ^{2r} j_λ(σ·), with the radial operator applied to the wave"""
    wave = AnalyticProfile("bessel_wave", {"sigma": 1.5}, make_measure(1.0))
    result = laplacian_power(wave, r)
    assert isinstance(result, PointwiseProfile)
    x = np.linspace(0.0, 4.0, 33)
    np.testing.assert_allclose(result(x), 1.5 ** (2 * r) * wave(x), rtol=1e-7, atol=1e-9)


def test_translation_difference_of_bessel_wave():
    """Translations of j_λ(σ·) reproduce the kernel factor of the spectral path"""
    wave = AnalyticProfile("bessel_wave", {"sigma": 1.0}, make_measure(0.5))
    scheme = DifferenceScheme("symmetric", 1)
    spatial = difference(wave, scheme, 0.4, path="translation")
    spectral = difference(wave, scheme, 0.4, path="spectral")
    assert isinstance(spatial, PointwiseProfile)
    x = np.array([0.0, 0.3, 1.1, 2.5])
    np.testing.assert_allclose(spatial(x), spectral(x), atol=1e-9)


def test_laplacian_of_gaussian():
    """−Δ_λ e^{-t²/2} = (2λ + 2 − t²) e^{-t²/2}"""
    lam = 0.5
    f = AnalyticProfile("gaussian", {}, make_measure(lam))
    result = laplacian_power(f, 1)
    x = np.linspace(0.0, 6.0, 25)
    np.testing.assert_allclose(result(x), (2 * lam + 2 - x ** 2) * np.exp(-x ** 2 / 2), atol=1e-8)


def test_laplacian_power_negative():
    with pytest.raises(ValueError):
        laplacian_power(AnalyticProfile("gaussian", {}, make_measure(0.0)), -1)


def test_modulus_validation():
    f = AnalyticProfile("gaussian", {}, make_measure(0.0))
    scheme = DifferenceScheme("symmetric", 1)
    with pytest.raises(ValueError):
        modulus(f, scheme, 0.0, 2.0)
    with pytest.raises(ValueError):
        modulus(f, scheme, 0.5, 2.0, t_grid_size=8)


def test_modulus_grows_with_delta():
    f = AnalyticProfile("gaussian", {}, make_measure(0.5))
    scheme = DifferenceScheme("forward", 1)
    small = modulus(f, scheme, 0.25, 2.0)
    large = modulus(f, scheme, 1.0, 2.0)
    assert 0.0 < small <= large * (1 + 1e-6)


def test_path_equivalence_gaussian():
    """Translation and spectral differences of the Gaussian agree"""
    f = AnalyticProfile("gaussian", {}, make_measure(0.5))
    report = path_equivalence_check(f, DifferenceScheme("forward", 1), 0.5)
    assert report.verdict is Verdict.PASS


def test_best_approx_edge_cases():
    f = AnalyticProfile("gaussian", {}, make_measure(0.0))
    with pytest.raises(ValueError):
        best_approx(f, 1.0, 0.5)
    assert best_approx(f, 0.0, 2.0).E_sigma == pytest.approx(lp_norm(f, 2.0))
    bandlimited = bandlimit_project(f, 1.0)
    assert best_approx(bandlimited, 3.0, 2.0).E_sigma == 0.0


@pytest.mark.parametrize("lam", [0.0, 0.5, 2.0])
@pytest.mark.parametrize("sigma", [0.5, 1.0, 2.0])
def test_gaussian_l2_error_closed_form(lam, sigma):
    """E_σ(e^{-t²/2})_2² = 2^{-λ-1} Γ(λ+1, σ²)/Γ(λ+1)"""
    f = AnalyticProfile("gaussian", {}, make_measure(lam))
    expected = 2.0 ** (-lam - 1.0) * special.gammaincc(lam + 1.0, sigma ** 2)
    assert spectral_tail_mass(f, sigma) == pytest.approx(expected, rel=1e-12)
    record = best_approx(f, sigma, 2.0)
    assert record.E_sigma == pytest.approx(np.sqrt(expected), rel=1e-6)
    assert not record.near_best


def test_lambda_zero_error_value():
    f = AnalyticProfile("gaussian", {}, make_measure(0.0))
    assert best_approx(f, 1.0, 2.0).E_sigma == pytest.approx(np.sqrt(0.5 * np.exp(-1.0)), rel=1e-6)


def test_non_hilbert_exponent_is_near_best():
    f = AnalyticProfile("gaussian", {}, make_measure(0.5))
    record = best_approx(f, 1.0, 4.0)
    assert record.near_best
    assert 0.0 < record.E_sigma < np.inf


def test_error_sequence_decreases():
    f = AnalyticProfile("exponential", {}, make_measure(0.5))
    errors = error_sequence(f, 4, 2.0)
    assert errors[0] == pytest.approx(lp_norm(f, 2.0))
    assert np.all(np.diff(errors) <= 1e-12)


def test_k_functional_bruteforce_below_realization():
    """The minimum over spectral levels is at most the sharp level 1/t"""
    f = AnalyticProfile("exponential", {}, make_measure(0.0))
    for t in [0.25, 0.5, 1.0]:
        brute = k_functional_bruteforce(f, t, 1)
        realized = k_functional_realization(f, t, 1, 2.0)
        assert brute <= realized * (1 + 1e-3)
    with pytest.raises(ValueError):
        k_functional_realization(f, 0.0, 1, 2.0)


def test_vallee_poussin_reproduces_bandlimited():
    g = bandlimit_project(AnalyticProfile("gaussian", {}, make_measure(0.5)), 1.0)
    report = vallee_poussin_reproduction_check(g, 2.0)
    assert report.verdict is Verdict.PASS
    with pytest.raises(ValueError):
        vallee_poussin_reproduction_check(g, 1.0)


def test_find_a():
    a = find_a(0.5, 1)
    assert 0.0 <= a < np.inf
    with pytest.raises(ValueError):
        find_a(0.5, 9)
    with pytest.raises(NotFoundError):
        find_a(-0.5, 1)


if __name__ == "__main__":
    pytest.main([__file__])


def _compact_spectrum(lam: float, band: float) -> SpectralProfile:
    measure = make_measure(lam)
    grid = spectral_grid(measure, band, 20.0)
    values = np.clip(1.0 - (grid.nodes / band) ** 2, 0.0, None) ** 4
    return SpectralProfile(grid, values, band=band)


@dataclass(frozen=True)
class _HalvedCutoff(CutoffProfile):
    def __call__(self, rho, sigma: float):
        return eta0(2.0 * np.asarray(rho, dtype=float) / sigma)


def test_vallee_poussin_reproduces_compact_spectrum():
    g = _compact_spectrum(0.5, 1.5)
    report = vallee_poussin_reproduction_check(g, 1.5)
    assert report.verdict is Verdict.PASS
    assert report.details["cutoff_min_on_band"] == 1.0


def test_vallee_poussin_reproduction_detects_short_cutoff():
    """A cutoff that drops below 1 inside the band cannot reproduce g"""
    g = _compact_spectrum(0.5, 1.5)
    report = vallee_poussin_reproduction_check(g, 1.5, _HalvedCutoff())
    assert report.verdict is Verdict.FAIL
    assert report.details["cutoff_min_on_band"] < 1.0


def test_realization_reuses_best_approximation(monkeypatch):
    """The distance term is the residual norm already measured by best_approx"""
    calls = []
    original = best_module._low_pass_residual

    def counting(f, sigma, p):
        calls.append((sigma, p))
        return original(f, sigma, p)

    monkeypatch.setattr(best_module, "_low_pass_residual", counting)
    f = AnalyticProfile("gaussian", {}, make_measure(0.5))
    realized = k_functional_realization(f, 0.5, 1, 1.0)
    record = best_approx(f, 2.0, 1.0)
    assert len(calls) == 2
    assert realized >= record.E_sigma
