import json

import numpy as np
import pytest

from dunkl_analyzer.reports import CSV_COLUMNS, Contract, InequalityReport, Verdict, param_key, plain


def test_upper_contract_verdicts():
    """ratio <= 1 + slack passes, anything above fails"""
    assert InequalityReport("c", {}, 1.0, 2.0, 0.5).verdict is Verdict.PASS
    assert InequalityReport("c", {}, 2.0, 1.0, 2.0).verdict is Verdict.FAIL
    assert InequalityReport("c", {}, 1.0, 1.0, 1.0 + 5e-7).verdict is Verdict.PASS
    assert InequalityReport("c", {}, 1.0, 1.0, 1.0 + 5e-7, tolerance=1e-8).failed


def test_error_budgets_widen_slack():
    report = InequalityReport("c", {}, 1.0, 1.0, 1.01, tolerance=0.0, quadrature_error=0.005, tail_error=0.006)
    assert report.verdict is Verdict.PASS


def test_near_best_flag():
    report = InequalityReport("c", {}, 1.0, 2.0, 0.5, near_best=True)
    assert report.verdict is Verdict.NEAR_BEST_FLAGGED
    assert not report.failed


def test_band_contract_waits_for_a_band():
    report = InequalityReport("c", {}, 1.0, 1.0, 3.0, contract=Contract.BAND)
    assert report.verdict is None
    assert not report.failed
    assert report.judge_band(2.0, 3.0, 0.0) is Verdict.PASS
    assert report.judge_band(1.0, 2.9, 0.01) is Verdict.FAIL
    assert report.judge_band(1.0, 2.98, 0.01) is Verdict.PASS
    assert (report.band_lo, report.band_hi) == (1.0, 2.98)


def test_record_band():
    report = InequalityReport.from_sweep("c", {}, [1.0, 4.0], [2.0, 2.0], contract=Contract.BAND)
    assert report.record_band() is Verdict.BASELINE_RECORDED
    assert (report.band_lo, report.band_hi) == (0.5, 2.0)


def test_identity_report():
    report = InequalityReport.identity("c", {}, [1.0, 2.0, 3.0], [1.0, 2.0, 3.0 + 3e-9], tolerance=1e-8)
    assert report.contract is Contract.EXACT
    assert report.verdict is Verdict.PASS
    assert report.ratio == pytest.approx(1.0 + 1e-9)
    failing = InequalityReport.identity("c", {}, [1.0], [1.1], tolerance=1e-8)
    assert failing.failed


def test_identity_floor():
    """Errors on a vanishing right side are measured against the floor"""
    report = InequalityReport.identity("c", {}, [1e-12], [0.0], tolerance=1e-8, floor=1.0)
    assert report.verdict is Verdict.PASS


def test_sweep_worst_point():
    report = InequalityReport.from_sweep("c", {}, [1.0, 3.0, 2.0], [2.0, 4.0, 4.0], sweep=["a", "b", "c"])
    assert report.ratio == pytest.approx(0.75)
    assert report.ratio_min == pytest.approx(0.5)
    assert report.details["sweep"] == ["a", "b", "c"]
    assert report.verdict is Verdict.PASS


def test_sweep_drops_vanishing_points():
    report = InequalityReport.from_sweep("c", {}, [0.0, 1.0], [0.0, 2.0])
    assert report.ratio == pytest.approx(0.5)
    assert np.isnan(report.details["ratios"][0])


def test_all_vanishing_sweep_is_trivial():
    report = InequalityReport.from_sweep("c", {}, [0.0, 0.0], [0.0, 0.0], contract=Contract.BAND)
    assert report.verdict is Verdict.TRIVIALLY_SATISFIED


def test_nonzero_over_zero_fails():
    report = InequalityReport.from_sweep("c", {}, [1.0], [0.0])
    assert report.failed
    assert report.ratio == float("inf")


def test_param_key_is_stable():
    a = param_key({"p": 2.0, "lambda": np.float64(0.5), "sweep": np.array([1, 2])})
    b = param_key({"sweep": [1, 2], "lambda": 0.5, "p": 2.0})
    assert a == b
    assert json.loads(a)["lambda"] == 0.5


def test_plain_handles_infinities():
    assert plain({"q": float("inf"), "n": float("nan")}) == {"q": "inf", "n": None}
    assert plain(Verdict.PASS) == "pass"


def test_to_dict_and_row():
    report = InequalityReport.from_sweep("young.inequality", {"lambda": 0.5, "q": np.inf}, [1.0], [2.0])
    document = report.to_dict()
    assert document["verdict"] == "pass"
    assert document["params"]["q"] == "inf"
    json.dumps(document)
    row = report.to_row()
    assert list(row) == CSV_COLUMNS
    assert row["params"] == report.param_key


if __name__ == "__main__":
    pytest.main([__file__])
