import numpy as np
import pytest

from dunkl_analyzer.approx.checks import (
    derivative_inverse_check,
    difference_k_equivalence_check,
    equivalence_check,
    inverse_check,
    jackson_check,
    k_scaling_check,
    marchaud_check,
    saturation_report,
)
from dunkl_analyzer.errors import InsufficientDecayError, InvalidExponentsError
from dunkl_analyzer.measure.norms import lp_norm
from dunkl_analyzer.measure.profile import AnalyticProfile, gaussian
from dunkl_analyzer.measure.quadrature import make_measure
from dunkl_analyzer.reports import Contract, Verdict
from dunkl_analyzer.specfun.kernels import Scheme
from dunkl_analyzer.transforms.riesz import hls_check, make_riesz, pointwise_bound_check

LAM = 0.5
MEMBERS = ["gaussian", "exponential"]


def member(name: str) -> AnalyticProfile:
    measure = make_measure(LAM)
    if name == "gaussian":
        return gaussian(measure)
    return AnalyticProfile("exponential", {"a": 1.0}, measure)


def assert_band(report, check_id: str):
    """Undecided band report that accepts its own band and rejects a shifted one"""
    assert report.check_id == check_id
    assert report.contract is Contract.BAND
    assert report.verdict is None
    assert 0.0 < report.ratio_min <= report.ratio_max < np.inf
    expected = Verdict.NEAR_BEST_FLAGGED if report.near_best else Verdict.PASS
    report.record_band()
    assert report.judge_band(report.band_lo, report.band_hi, 0.1) is expected
    assert report.judge_band(10.0 * report.ratio_max, 20.0 * report.ratio_max, 0.1) is Verdict.FAIL


@pytest.mark.parametrize("name", MEMBERS)
def test_jackson(name):
    report = jackson_check(member(name), [1.0, 2.0, 4.0], 0, 1, Scheme.SYMMETRIC, 2.0)
    assert report.params["profile"] == name
    assert report.details["sweep"] == [1.0, 2.0, 4.0]
    assert_band(report, "jackson.direct")


def test_jackson_above_band_is_trivial():
    """Every E_σ of a bandlimited profile vanishes once σ passes the band"""
    wave = AnalyticProfile("bessel_wave", {"sigma": 0.5}, make_measure(LAM))
    report = jackson_check(wave, [1.0, 2.0], 0, 1, Scheme.SYMMETRIC, 2.0)
    assert report.verdict is Verdict.TRIVIALLY_SATISFIED


@pytest.mark.parametrize("name", MEMBERS)
def test_inverse(name):
    f = member(name)
    report = inverse_check(f, [2, 4], 1, 2.0)
    assert report.details["E_j"][0] == pytest.approx(lp_norm(f, 2.0))
    assert np.all(np.diff(report.details["E_j"]) <= 1e-12)
    assert report.details["marchaud"]["check_id"] == "inverse.marchaud"
    assert_band(report, "inverse.direct")


def test_inverse_needs_positive_n():
    with pytest.raises(ValueError):
        inverse_check(member("gaussian"), [0, 2], 1, 2.0)


@pytest.mark.parametrize("name", MEMBERS)
def test_marchaud(name):
    report = marchaud_check(member(name), [0.5, 0.25], 1, 2.0, points=16)
    assert report.details["sweep"] == [0.25, 0.5]
    assert_band(report, "inverse.marchaud")
    with pytest.raises(ValueError):
        marchaud_check(member(name), [0.5, 1.5], 1, 2.0)


def test_derivative_inverse_on_gaussian():
    report = derivative_inverse_check(member("gaussian"), 1, 1, [2, 4], 2.0)
    assert report.details["series_tail"] >= 0.0
    assert_band(report, "inverse.derivative")


def test_derivative_inverse_needs_summable_series():
    """E_j of e^{−t} falls like j^{−λ−2}, too slowly for the r = 2 series"""
    with pytest.raises(InsufficientDecayError):
        derivative_inverse_check(member("exponential"), 2, 1, [2, 4], 2.0)


@pytest.mark.parametrize("name", MEMBERS)
def test_equivalence(name):
    report = equivalence_check(member(name), [0.25, 0.5], 1, 2.0)
    ranges = report.details["ranges"]
    assert set(ranges) == {"iterated", "symmetric", "forward_odd", "forward_even"}
    assert all(0.0 < lo <= hi for lo, hi in ranges.values())
    assert_band(report, "kfunctional.equivalence")
    with pytest.raises(ValueError):
        equivalence_check(member(name), [0.0, 0.5], 1, 2.0)


@pytest.mark.parametrize("name", MEMBERS)
def test_saturation(name):
    report = saturation_report(member(name), [2, 4], 1, 2.0)
    assert len(report.details["omega_next"]) == 2
    lo, hi = report.details["order_range"]
    assert 0.0 < lo <= hi
    assert_band(report, "kfunctional.saturation")


@pytest.mark.parametrize("name", MEMBERS)
def test_k_scaling(name):
    """Exact K of the p = 2 infimum scales by max(1, s^{2r})"""
    report = k_scaling_check(member(name), 0.25, (0.5, 2.0), 1)
    assert report.contract is Contract.UPPER
    assert report.verdict is Verdict.PASS


@pytest.mark.parametrize("name", MEMBERS)
def test_difference_k_equivalence(name):
    report = difference_k_equivalence_check(member(name), [0.25, 0.5], 1, 2.0)
    assert report.params["r"] == 1
    assert_band(report, "kfunctional.difference")


def test_hls_constant_is_scale_free():
    params = make_riesz(1.0, LAM)
    report = hls_check(member("gaussian"), params, 1.5)
    assert report.contract is Contract.EXACT
    assert report.verdict is Verdict.PASS
    assert report.params["q"] == pytest.approx(params.conjugate_exponent(1.5))
    assert report.details["hls_constant"] > 0.0


def test_hls_index_mismatch():
    with pytest.raises(InvalidExponentsError):
        hls_check(member("gaussian"), make_riesz(1.0, 1.0), 1.5)


@pytest.mark.parametrize("name", MEMBERS)
def test_pointwise_bound(name):
    report = pointwise_bound_check(member(name), make_riesz(1.0, LAM), 1.5, [0.25, 1.0, 3.0])
    assert report.details["fitted_constant"] == report.ratio_max
    assert_band(report, "riesz.pointwise")
