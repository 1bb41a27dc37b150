import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["check_id", "params", "lhs", "rhs", "ratio", "band_lo", "band_hi", "verdict"]


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    BASELINE_RECORDED = "baseline-recorded"
    TRIVIALLY_SATISFIED = "trivially-satisfied"
    NEAR_BEST_FLAGGED = "near-best-flagged"


class Contract(str, Enum):
    """How a report is judged: ratio <= 1, ratio == 1, or ratio inside a recorded band"""

    UPPER = "upper"
    EXACT = "exact"
    BAND = "band"


def plain(value: Any) -> Any:
    """Convert numpy scalars and arrays into JSON-ready Python values"""
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return plain(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, float) and not np.isfinite(value):
        return None if np.isnan(value) else ("inf" if value > 0 else "-inf")
    return value


def param_key(params: Dict[str, Any]) -> str:
    """Sorted-key JSON of the parameters, stable across runs"""
    return json.dumps(plain(params), sort_keys=True)


@dataclass
class InequalityReport:
    """
    Outcome of one numerical inequality or identity check

    ratio is lhs/rhs at the worst point of the sweep; ratio_min and
    ratio_max bound it over the whole sweep.
    """

    check_id: str
    params: Dict[str, Any]
    lhs: float
    rhs: float
    ratio: float
    ratio_min: Optional[float] = None
    ratio_max: Optional[float] = None
    tolerance: float = 1.0e-6
    contract: Contract = Contract.UPPER
    verdict: Optional[Verdict] = None
    band_lo: Optional[float] = None
    band_hi: Optional[float] = None
    quadrature_error: float = 0.0
    tail_error: float = 0.0
    near_best: bool = False
    notes: List[str] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.contract = Contract(self.contract)
        if self.ratio_min is None:
            self.ratio_min = self.ratio
        if self.ratio_max is None:
            self.ratio_max = self.ratio
        if self.verdict is None:
            self.verdict = self.decide()
        else:
            self.verdict = Verdict(self.verdict)

    @property
    def param_key(self) -> str:
        return param_key(self.params)

    @property
    def failed(self) -> bool:
        return self.verdict is Verdict.FAIL

    def decide(self) -> Optional[Verdict]:
        """Intrinsic verdict; band contracts stay undecided until a band is known"""
        if self.contract is Contract.BAND:
            return None
        slack = self.tolerance + self.quadrature_error + self.tail_error
        if self.contract is Contract.EXACT:
            ok = abs(self.ratio_min - 1.0) <= slack and abs(self.ratio_max - 1.0) <= slack
        else:
            ok = self.ratio_max <= 1.0 + slack
        if not ok:
            return Verdict.FAIL
        return Verdict.NEAR_BEST_FLAGGED if self.near_best else Verdict.PASS

    def judge_band(self, band_lo: float, band_hi: float, tolerance: float) -> Verdict:
        """Verdict against a recorded band [band_lo, band_hi] widened by tolerance"""
        self.band_lo, self.band_hi = float(band_lo), float(band_hi)
        inside = band_lo * (1.0 - tolerance) <= self.ratio_min and self.ratio_max <= band_hi * (1.0 + tolerance)
        if not inside:
            self.verdict = Verdict.FAIL
        else:
            self.verdict = Verdict.NEAR_BEST_FLAGGED if self.near_best else Verdict.PASS
        return self.verdict

    def record_band(self) -> Verdict:
        self.band_lo, self.band_hi = float(self.ratio_min), float(self.ratio_max)
        self.verdict = Verdict.BASELINE_RECORDED
        return self.verdict

    def to_dict(self) -> Dict[str, Any]:
        return plain({
            "check_id": self.check_id,
            "params": self.params,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "ratio": self.ratio,
            "ratio_min": self.ratio_min,
            "ratio_max": self.ratio_max,
            "tolerance": self.tolerance,
            "contract": self.contract,
            "verdict": self.verdict.value if self.verdict else None,
            "band_lo": self.band_lo,
            "band_hi": self.band_hi,
            "quadrature_error": self.quadrature_error,
            "tail_error": self.tail_error,
            "near_best": self.near_best,
            "notes": self.notes,
            "details": self.details,
        })

    def to_row(self) -> Dict[str, Any]:
        return {
            "check_id": self.check_id,
            "params": self.param_key,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "ratio": self.ratio,
            "band_lo": self.band_lo,
            "band_hi": self.band_hi,
            "verdict": self.verdict.value if self.verdict else "",
        }

    @classmethod
    def identity(cls, check_id: str, params: Dict[str, Any], lhs: Sequence[float], rhs: Sequence[float],
                 tolerance: float, floor: float = 1e-300, **kwargs) -> "InequalityReport":
        """
        Report for an identity lhs == rhs; ratio is 1 + the relative sup error

        The error is taken relative to max |rhs| (never below floor), so the
        exact contract passes when the identity holds to tolerance.
        """
        lhs = np.atleast_1d(np.asarray(lhs, dtype=float))
        rhs = np.atleast_1d(np.asarray(rhs, dtype=float))
        difference = np.abs(lhs - rhs)
        worst = int(np.argmax(difference)) if difference.size else 0
        scale = max(float(np.max(np.abs(rhs))) if rhs.size else 0.0, floor)
        error = float(difference[worst]) / scale if difference.size else 0.0
        details = dict(kwargs.pop("details", {}))
        details.update({"max_abs_error": float(difference.max()) if difference.size else 0.0,
                        "relative_error": error, "scale": scale})
        return cls(check_id, params, float(lhs[worst]) if lhs.size else 0.0,
                   float(rhs[worst]) if rhs.size else 0.0, 1.0 + error,
                   tolerance=tolerance, contract=Contract.EXACT, details=details, **kwargs)

    @classmethod
    def from_sweep(cls, check_id: str, params: Dict[str, Any], lhs: Sequence[float], rhs: Sequence[float],
                   sweep: Optional[Sequence[Any]] = None, **kwargs) -> "InequalityReport":
        """
        Report over a sweep of (lhs, rhs) pairs

        Points where both sides vanish carry no information and are dropped;
        a sweep made only of such points is trivially satisfied.
        """
        lhs = np.asarray(lhs, dtype=float)
        rhs = np.asarray(rhs, dtype=float)
        scale = max(float(np.max(np.abs(rhs))) if rhs.size else 0.0, 1e-300)
        informative = ~((np.abs(lhs) <= 1e-14 * scale) & (np.abs(rhs) <= 1e-14 * scale)) & (rhs != 0.0)
        details = dict(kwargs.pop("details", {}))
        details["sweep"] = list(sweep) if sweep is not None else list(range(lhs.size))
        details["lhs"] = lhs.tolist()
        details["rhs"] = rhs.tolist()
        if not np.any(informative):
            if np.any((rhs == 0.0) & (np.abs(lhs) > 1e-14 * scale)):
                return cls(check_id, params, float(np.max(np.abs(lhs))), 0.0, float("inf"),
                           verdict=Verdict.FAIL, details=details, **kwargs)
            return cls(check_id, params, 0.0, 0.0, 0.0, ratio_min=0.0, ratio_max=0.0,
                       verdict=Verdict.TRIVIALLY_SATISFIED, details=details, **kwargs)
        ratios = np.full(lhs.shape, np.nan)
        ratios[informative] = lhs[informative] / rhs[informative]
        details["ratios"] = ratios.tolist()
        worst = int(np.nanargmax(ratios))
        report = cls(check_id, params, float(lhs[worst]), float(rhs[worst]), float(ratios[worst]),
                     ratio_min=float(np.nanmin(ratios)), ratio_max=float(np.nanmax(ratios)),
                     details=details, **kwargs)
        logger.debug(f"{check_id} {report.param_key}: ratio in [{report.ratio_min:.6g}, {report.ratio_max:.6g}]")
        return report
