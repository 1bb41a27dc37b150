import json

import numpy as np
import pandas as pd
import pytest

from dunkl_analyzer.database.connection import BaselineRegistry
from dunkl_analyzer.eft.lattice import AvoidanceSequence
from dunkl_analyzer.errors import UnboundedTailError
from dunkl_analyzer.reports import CSV_COLUMNS, Contract, Verdict
from dunkl_analyzer.suite import checks
from dunkl_analyzer.suite.checks import CATALOGUE, analytic_battery, run_check, select_checks
from dunkl_analyzer.suite.config import SuiteConfig
from dunkl_analyzer.suite.runner import collect_reports, run_suite


def small_config(tmp_path, selection=("specfun.omega", "sampling.nyquist"), **extra):
    overrides = {
        "checks": list(selection),
        "sweeps": {"gamma": [0.3]},
        "registry": str(tmp_path / "baselines.db"),
        "output": str(tmp_path / "reports"),
    }
    overrides.update(extra)
    return SuiteConfig(overrides=overrides)


def test_select_all():
    assert select_checks(["all"]) == sorted(CATALOGUE)


def test_select_prefix():
    """A prefix with or without its trailing dot selects the whole group"""
    translate = select_checks(["translate"])
    assert translate == select_checks(["translate."])
    assert "translate.mass" in translate
    assert all(check_id.startswith("translate.") for check_id in translate)
    assert select_checks(["riesz.hls", "riesz.hls"]) == ["riesz.hls"]


def test_select_unknown():
    with pytest.raises(KeyError):
        select_checks(["fourier"])


def test_battery_members():
    battery = analytic_battery(0.5)
    assert set(checks.TRANSLATION_MEMBERS) <= set(battery)
    assert battery["bump"].family == "bump"


def test_nyquist_entry_passes(tmp_path):
    reports = run_check("sampling.nyquist", small_config(tmp_path))
    assert len(reports) == 1
    assert reports[0].verdict is Verdict.PASS
    assert "type-too-large" in reports[0].notes[0]


def test_failing_entry_becomes_report(tmp_path, monkeypatch):
    """A toolkit error raised by an entry fails that entry only"""
    def broken(config):
        raise UnboundedTailError("no decay")
    monkeypatch.setitem(CATALOGUE, "specfun.omega", broken)
    reports = collect_reports(["sampling.nyquist", "specfun.omega"], small_config(tmp_path))
    verdicts = {r.check_id: r.verdict for r in reports}
    assert verdicts == {"sampling.nyquist": Verdict.PASS, "specfun.omega": Verdict.FAIL}
    failed = [r for r in reports if r.failed][0]
    assert "UnboundedTailError" in failed.notes[0]


def test_broken_sequence_fails_its_report(tmp_path, monkeypatch):
    def drifted(b_vectors, d, N):
        nodes = np.zeros((1, d), dtype=int)
        return AvoidanceSequence(nodes, nodes + 5, np.zeros((0, d)), N, 0)
    monkeypatch.setattr(checks, "build_sequence", drifted)
    reports = run_check("sampling.sequence", small_config(tmp_path))
    assert reports
    assert all(r.verdict is Verdict.FAIL for r in reports)
    assert all("exceeds" in r.notes[0] for r in reports)


def test_reports_are_sorted(tmp_path):
    reports = collect_reports(select_checks(["specfun.omega", "sampling.nyquist"]), small_config(tmp_path))
    keys = [(r.check_id, r.param_key) for r in reports]
    assert keys == sorted(keys)


def test_missing_registry_fails_bands(tmp_path):
    result = run_suite(small_config(tmp_path), workers=1)
    bands = [r for r in result.reports if r.contract is Contract.BAND]
    assert bands
    assert all(r.verdict is Verdict.FAIL for r in bands)
    assert all("MissingBaselineError" in r.notes[-1] for r in bands)
    assert result.exit_status == 1


def test_default_registry_is_seeded(tmp_path, monkeypatch):
    """Without a named registry the packaged bands judge the ω_γ checks"""
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("DUNKL_ANALYZER_REGISTRY", raising=False)
    config = SuiteConfig(overrides={"checks": ["specfun.omega"], "output": str(tmp_path / "reports")})
    assert config.uses_default_registry()
    result = run_suite(config, workers=1)
    assert (tmp_path / "baselines.db").exists()
    assert len(result.reports) == 6
    assert all(r.verdict is Verdict.PASS for r in result.reports)
    assert result.exit_status == 0


def test_record_then_judge(tmp_path):
    """Bands recorded by one run accept the next identical run"""
    config = small_config(tmp_path)
    recorded = run_suite(config, record=True, workers=1)
    assert recorded.exit_status == 0
    counts = recorded.verdict_counts()
    assert counts["baseline-recorded"] == 2
    assert counts["pass"] == 1

    judged = run_suite(config, workers=1)
    assert judged.exit_status == 0
    assert all(r.verdict is Verdict.PASS for r in judged.reports)
    band = [r for r in judged.reports if r.contract is Contract.BAND][0]
    assert band.band_lo <= band.ratio_min <= band.ratio_max <= band.band_hi


def test_shifted_band_fails(tmp_path):
    config = small_config(tmp_path)
    run_suite(config, record=True, workers=1)
    with BaselineRegistry(config.get_registry()) as registry:
        frame = registry.export_frame()
        for _, row in frame.iterrows():
            registry.record_band(row["check_id"], row["param_key"], 10 * row["band_hi"], 20 * row["band_hi"], 0.1)
    judged = run_suite(config, workers=1)
    assert judged.exit_status == 1
    assert len(judged.failed) == 2


def test_output_files(tmp_path):
    result = run_suite(small_config(tmp_path), record=True, workers=1)
    document = json.loads(result.reports_path.read_text())
    assert len(document) == len(result.reports)
    summary = pd.read_csv(result.summary_path)
    assert list(summary.columns) == CSV_COLUMNS
    assert set(summary["verdict"]) == {"baseline-recorded", "pass"}


def test_summary_is_deterministic(tmp_path):
    config = small_config(tmp_path)
    run_suite(config, record=True, workers=1)
    first = (tmp_path / "reports" / "summary.csv").read_bytes()
    run_suite(config, workers=1)
    run_suite(config, record=True, workers=1)
    second = (tmp_path / "reports" / "summary.csv").read_bytes()
    assert first == second


if __name__ == "__main__":
    pytest.main([__file__])
