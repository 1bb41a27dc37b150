import numpy as np
import pytest

from dunkl_analyzer.approx import differences
from dunkl_analyzer.errors import InvalidExponentsError, InvalidRangeError
from dunkl_analyzer.eft.inequalities import (
    bernstein_check,
    bernstein_nikolskii_check,
    boas_closed_form,
    nikolskii_check,
    stechkin_boas_check,
    stechkin_closed_form,
)
from dunkl_analyzer.reports import Contract, Verdict


@pytest.mark.parametrize("lam,p,q", [(0.0, 1.0, np.inf), (0.5, 2.0, np.inf), (1.0, 2.0, 4.0)])
def test_nikolskii_exponent(lam, p, q):
    """The extremizer ratio grows like σ^{(2λ+2)(1/p − 1/q)}"""
    report = nikolskii_check(lam, 2, [1.0, 2.0, 4.0, 8.0], p, q)
    expected = (2 * lam + 2) * (1 / p - (0.0 if np.isinf(q) else 1 / q))
    assert report.contract is Contract.EXACT
    assert report.details["slope"] == pytest.approx(expected, abs=0.1)
    assert report.verdict is Verdict.PASS


def test_nikolskii_exponent_errors():
    with pytest.raises(InvalidExponentsError):
        nikolskii_check(0.0, 2, [1.0, 2.0], 2.0, 1.0)
    with pytest.raises(InvalidExponentsError):
        # 2mp = 2 does not exceed 2λ+2 = 3
        nikolskii_check(0.5, 1, [1.0, 2.0], 1.0, 2.0)


@pytest.mark.parametrize("r", [1, 2])
def test_bernstein_eigen_is_sharp(r):
    report = bernstein_check(0.5, 2.0, r, np.inf, "eigen")
    assert report.verdict is Verdict.PASS


def test_bernstein_eigen_follows_the_operator(monkeypatch):
    """A Laplacian that is off by 0.1% on j_λ(σ·) breaks the equality"""
    original = differences.bessel_j_laplacian
    monkeypatch.setattr(differences, "bessel_j_laplacian", lambda lam, t, r=1: 1.001 * original(lam, t, r))
    report = bernstein_check(0.5, 2.0, 1, np.inf, "eigen")
    assert report.verdict is Verdict.FAIL


def test_bernstein_zero_member():
    report = bernstein_check(0.0, 1.0, 1, 2.0, "zero")
    assert report.verdict is Verdict.TRIVIALLY_SATISFIED


def test_bernstein_errors():
    with pytest.raises(InvalidExponentsError):
        # p(λ+1/2) = 2 does not exceed 2λ+2 = 3
        bernstein_check(0.5, 1.0, 1, 2.0, "eigen")
    with pytest.raises(ValueError):
        bernstein_check(0.0, 1.0, 1, np.inf, "plateau")


def test_bernstein_nikolskii_sup_exponent():
    report = bernstein_nikolskii_check(0.0, [1.0, 2.0, 4.0], 1, np.inf)
    assert report.details["slope"] == pytest.approx(2.0, abs=1e-6)
    assert report.verdict is Verdict.PASS


def test_stechkin_boas_eigen():
    """Both ratios on j_λ(σ·) match their closed forms"""
    pairs = [(0.5, 0.25), (0.5, 0.5), (0.25, 0.1)]
    report = stechkin_boas_check(0.5, 1.0, 1, np.inf, pairs)
    assert report.verdict is Verdict.PASS
    assert report.params["frequency"] == 1.0


def test_stechkin_boas_follows_the_translations(monkeypatch):
    """Ratios are measured through translations, not read off the closed forms"""
    original = differences.translation_values
    monkeypatch.setattr(differences, "translation_values", lambda f, x, t, **kwargs: 1.001 * original(f, x, t, **kwargs))
    report = stechkin_boas_check(0.5, 1.0, 1, np.inf, [(0.5, 0.25)])
    assert report.verdict is Verdict.FAIL


def test_stechkin_boas_range():
    with pytest.raises(InvalidRangeError):
        stechkin_boas_check(0.0, 1.0, 1, np.inf, [(0.6, 0.1)])
    with pytest.raises(InvalidRangeError):
        stechkin_boas_check(0.0, 1.0, 1, np.inf, [(0.2, 0.3)])


def test_closed_forms_at_equal_steps():
    assert boas_closed_form(0.5, 1.0, 2, 0.3, 0.3) == pytest.approx(1.0)
    # u^{2m}/j**(u) tends to a finite limit as u -> 0
    small = stechkin_closed_form(0.0, 1.0, 1, 1e-3)
    assert 0.0 < small < np.inf


if __name__ == "__main__":
    pytest.main([__file__])
