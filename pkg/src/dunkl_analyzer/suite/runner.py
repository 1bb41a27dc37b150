import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional

import pandas as pd

from ..database.connection import BaselineRegistry
from ..errors import MissingBaselineError
from ..reports import CSV_COLUMNS, Contract, InequalityReport, Verdict
from .checks import run_check, select_checks
from .config import SuiteConfig

logger = logging.getLogger(__name__)

REPORTS_FILE = "reports.json"
SUMMARY_FILE = "summary.csv"
FLOAT_FORMAT = "%.10e"


@dataclass
class SuiteResult:
    reports: List[InequalityReport]
    reports_path: Path
    summary_path: Path

    @property
    def failed(self) -> List[InequalityReport]:
        return [r for r in self.reports if r.failed]

    @property
    def exit_status(self) -> int:
        return 1 if self.failed else 0

    def verdict_counts(self) -> Dict[str, int]:
        counts: Dict[str, int] = {}
        for report in self.reports:
            key = report.verdict.value if report.verdict else "undecided"
            counts[key] = counts.get(key, 0) + 1
        return counts


def collect_reports(check_ids: List[str], config: SuiteConfig, workers: int = 1) -> List[InequalityReport]:
    """
    Run catalogue entries, on a process pool when workers > 1

    Returns:
        Reports sorted by check id and parameter key
    """
    reports: List[InequalityReport] = []
    if workers > 1 and len(check_ids) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            futures = [executor.submit(run_check, check_id, config) for check_id in check_ids]
            for future in futures:
                reports.extend(future.result())
    else:
        for check_id in check_ids:
            reports.extend(run_check(check_id, config))
    return sorted(reports, key=lambda r: (r.check_id, r.param_key))


def _missing_baseline(report: InequalityReport, where: str) -> None:
    error = MissingBaselineError(f"No band for {report.check_id} {report.param_key} in {where}")
    report.verdict = Verdict.FAIL
    report.notes.append(f"{type(error).__name__}: {error}")


def judge_reports(reports: List[InequalityReport], registry: Optional[BaselineRegistry], where: str) -> None:
    """Decide band contracts against recorded bands; a missing band fails the report"""
    for report in reports:
        if report.contract is not Contract.BAND or report.verdict is not None:
            continue
        band = registry.get_band(report.check_id, report.param_key) if registry else None
        if band is None:
            _missing_baseline(report, where)
            continue
        band_lo, band_hi, tolerance = band
        report.judge_band(band_lo, band_hi, tolerance)


def record_reports(reports: List[InequalityReport], registry: BaselineRegistry, tolerance: float) -> int:
    """Store [ratio_min, ratio_max] of every undecided band contract"""
    recorded = 0
    for report in reports:
        if report.contract is not Contract.BAND or report.verdict is not None:
            continue
        report.record_band()
        registry.record_band(report.check_id, report.param_key, report.band_lo, report.band_hi, tolerance)
        recorded += 1
    logger.info(f"Recorded {recorded} band(s) in {registry.db_path}")
    return recorded


def write_outputs(reports: List[InequalityReport], output: Path) -> tuple:
    """
    Write the JSON report array and the CSV summary

    Returns:
        (reports path, summary path)
    """
    output.mkdir(parents=True, exist_ok=True)
    reports_path = output / REPORTS_FILE
    summary_path = output / SUMMARY_FILE
    with open(reports_path, 'w') as f:
        json.dump([r.to_dict() for r in reports], f, indent=2)
    frame = pd.DataFrame([r.to_row() for r in reports], columns=CSV_COLUMNS)
    frame.to_csv(summary_path, index=False, float_format=FLOAT_FORMAT)
    logger.info(f"Wrote {len(reports)} report(s) to {reports_path} and {summary_path}")
    return reports_path, summary_path


def _log_verdicts(reports: List[InequalityReport]) -> None:
    for report in reports:
        if report.verdict is Verdict.FAIL:
            logger.error(f"FAIL {report.check_id} {report.param_key}: ratio {report.ratio} {'; '.join(report.notes)}")
        elif report.verdict is Verdict.NEAR_BEST_FLAGGED:
            logger.warning(f"near-best {report.check_id} {report.param_key}: ratio {report.ratio}")


def open_registry(config: SuiteConfig) -> Optional[BaselineRegistry]:
    """
    Open the registry used for judging

    A missing default registry is created from the packaged seed dump; a
    missing registry named by the configuration or the environment is not.

    Returns:
        Open BaselineRegistry, or None when there is nothing to judge against
    """
    path = Path(config.get_registry())
    if path.exists():
        return BaselineRegistry(str(path))
    if config.uses_default_registry():
        logger.info(f"Baseline registry {path} does not exist; creating it from the packaged seed")
        return BaselineRegistry.from_seed(str(path))
    return None


def run_suite(config: SuiteConfig, record: bool = False, workers: Optional[int] = None) -> SuiteResult:
    """
    Run the selected checks, judge or record their bands and write the report files

    Args:
        config: Suite configuration
        record: Store band ratios in the registry instead of judging them
        workers: Process count, defaults to the environment setting

    Returns:
        SuiteResult; its exit_status is 1 iff some verdict is fail
    """
    check_ids = select_checks(config.get_checks())
    workers = workers or config.get_workers()
    logger.info(f"Running {len(check_ids)} check(s) on {workers} worker(s)")
    reports = collect_reports(check_ids, config, workers)

    registry_path = Path(config.get_registry())
    if record:
        with BaselineRegistry(str(registry_path), create=True) as registry:
            record_reports(reports, registry, config.band_tolerance())
    else:
        registry = open_registry(config)
        if registry is None:
            logger.error(f"Baseline registry {registry_path} does not exist; run 'suite record' first")
            judge_reports(reports, None, str(registry_path))
        else:
            with registry:
                judge_reports(reports, registry, str(registry_path))

    _log_verdicts(reports)
    reports_path, summary_path = write_outputs(reports, config.get_output())
    return SuiteResult(reports, reports_path, summary_path)


def record_baselines(config: SuiteConfig, workers: Optional[int] = None) -> SuiteResult:
    return run_suite(config, record=True, workers=workers)
