import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from ..approx.differences import DifferenceScheme, difference_norm, laplacian_power
from ..errors import InvalidExponentsError, InvalidRangeError
from ..fitting import log_log_fit
from ..measure.norms import lp_norm
from ..measure.profile import AnalyticProfile, Profile, gaussian
from ..measure.quadrature import make_measure
from ..reports import Contract, InequalityReport, Verdict
from ..specfun.bessel import IndexLike, as_index
from ..specfun.cutoff import SMOOTH
from ..specfun.kernels import MultiplierKernel, Scheme
from ..transforms.hankel import bandlimit_project

logger = logging.getLogger(__name__)

SLOPE_TOLERANCE = 0.1


def _finite_p_eigen_ok(lam: float, p: float) -> bool:
    """j_λ(σ·) lies in L^p(dν_λ) iff p(λ+1/2) > 2λ+2"""
    return np.isinf(p) or p * (lam + 0.5) > 2.0 * lam + 2.0


def nikolskii_extremizer(lam: IndexLike, sigma: float, m: int) -> AnalyticProfile:
    """sin^{2m}(θt)/t^{2m} with θ = σ/(2m), a function of band σ"""
    return AnalyticProfile("nikolskii_extremizer", {"theta": sigma / (2.0 * m), "m": m}, make_measure(lam))


def _slope_report(check_id: str, params: dict, sweep, ratios, expected: float) -> InequalityReport:
    slope, intercept, r_squared = log_log_fit(sweep, ratios)
    residual = np.log(ratios) - (intercept + slope * np.log(sweep))
    details = {"sweep": list(sweep), "ratios": list(ratios), "slope": slope, "expected": expected,
               "r_squared": r_squared, "max_residual": float(np.max(np.abs(residual)))}
    logger.info(f"{check_id}: fitted exponent {slope:.4f}, expected {expected:.4f}")
    return InequalityReport(check_id, params, slope, expected, 1.0 + abs(slope - expected),
                            tolerance=SLOPE_TOLERANCE, contract=Contract.EXACT, details=details)


def nikolskii_check(lam: IndexLike, m: int, sigma_sweep: Sequence[float], p: float, q: float) -> InequalityReport:
    """
    Fitted exponent of ‖f_σ‖_q/‖f_σ‖_p against (2λ+2)(1/p − 1/q)

    f_σ is the extremizer sin^{2m}(θt)/t^{2m}, θ = σ/(2m), so the ratio is
    an exact power of σ and the fit residual measures quadrature error.

    Raises:
        InvalidExponentsError: q < p, or the extremizer is not p-integrable
    """
    lam = float(as_index(lam))
    if q < p:
        raise InvalidExponentsError(f"Nikolskii needs q >= p, got p={p}, q={q}")
    if not p * 2 * m > 2.0 * lam + 2.0:
        raise InvalidExponentsError(f"Extremizer of order m={m} is not in L^{p}(dν_λ) for λ={lam}: need 2mp > 2λ+2")
    sigmas = np.asarray(sorted(float(s) for s in sigma_sweep))
    ratios = []
    for sigma in sigmas:
        f = nikolskii_extremizer(lam, sigma, m)
        ratios.append(lp_norm(f, q) / lp_norm(f, p))
    expected = (2.0 * lam + 2.0) * (1.0 / p - (0.0 if np.isinf(q) else 1.0 / q))
    return _slope_report("polynomial.nikolskii", {"lambda": lam, "m": m, "p": p, "q": q}, sigmas,
                         np.asarray(ratios), expected)


def bernstein_battery(lam: IndexLike, sigma: float, member: str) -> Profile:
    """Battery member of band <= σ: eigen (j_λ(σ·)), gaussian (smooth truncation) or zero"""
    measure = make_measure(lam)
    if member == "eigen":
        return AnalyticProfile("bessel_wave", {"sigma": sigma}, measure)
    if member == "gaussian":
        return bandlimit_project(gaussian(measure), sigma / 2.0, SMOOTH)
    if member == "zero":
        return AnalyticProfile("zero", {}, measure)
    raise ValueError(f"Unknown Bernstein battery member '{member}'")


def bernstein_check(lam: IndexLike, sigma: float, r: int, p: float, member: str = "eigen") -> InequalityReport:
    """
    ‖(−Δ)^r f‖_p against σ^{2r} ‖f‖_p for f of band <= σ

    The eigenfunction saturates the estimate, so its ratio must be 1;
    other members are banded.

    Raises:
        InvalidExponentsError: j_λ(σ·) is not p-integrable
    """
    lam = float(as_index(lam))
    if member == "eigen" and not _finite_p_eigen_ok(lam, p):
        raise InvalidExponentsError(f"j_λ(σ·) is not in L^{p}(dν_λ) for λ={lam}: need p(λ+1/2) > 2λ+2")
    f = bernstein_battery(lam, sigma, member)
    params = {"lambda": lam, "sigma": sigma, "r": r, "p": p, "member": member}
    norm = lp_norm(f, p)
    if norm == 0.0:
        return InequalityReport("polynomial.bernstein", params, 0.0, 0.0, 0.0,
                                verdict=Verdict.TRIVIALLY_SATISFIED)
    lhs = lp_norm(laplacian_power(f, r), p)
    rhs = sigma ** (2 * r) * norm
    if member == "eigen":
        return InequalityReport.identity("polynomial.bernstein", params, [lhs], [rhs], tolerance=1e-6)
    return InequalityReport("polynomial.bernstein", params, lhs, rhs, lhs / rhs, contract=Contract.BAND)


def bernstein_nikolskii_check(lam: IndexLike, sigma_sweep: Sequence[float], r: int, p: float) -> InequalityReport:
    """
    Fitted exponent of ‖(−Δ)^r f_σ‖_∞/‖f_σ‖_p on f_σ = j_λ(σ·) against 2r + (2λ+2)/p
    """
    lam = float(as_index(lam))
    if not _finite_p_eigen_ok(lam, p):
        raise InvalidExponentsError(f"j_λ(σ·) is not in L^{p}(dν_λ) for λ={lam}: need p(λ+1/2) > 2λ+2")
    sigmas = np.asarray(sorted(float(s) for s in sigma_sweep))
    measure = make_measure(lam)
    ratios = []
    for sigma in sigmas:
        f = AnalyticProfile("bessel_wave", {"sigma": sigma}, measure)
        ratios.append(lp_norm(laplacian_power(f, r), np.inf) / lp_norm(f, p))
    expected = 2.0 * r + (2.0 * lam + 2.0) / p
    return _slope_report("polynomial.bernstein_nikolskii", {"lambda": lam, "r": r, "p": p}, sigmas,
                         np.asarray(ratios), expected)


def _validate_pairs(pairs: Sequence[Tuple[float, float]], sigma: float):
    for t, delta in pairs:
        if not 0.0 < delta <= t <= 1.0 / (2.0 * sigma):
            raise InvalidRangeError(f"(t, δ)=({t}, {delta}) outside 0 < δ <= t <= 1/(2σ) = {1.0 / (2.0 * sigma):g}")


def stechkin_closed_form(lam: float, sigma: float, m: int, t: float) -> float:
    """‖(−Δ)^m f‖/(t^{−2m}‖**Δ_t^m f‖) = u^{2m}/j**_{λ,m}(u), u = σt, for f = j_λ(σ·)"""
    u = sigma * t
    return u ** (2 * m) / float(MultiplierKernel(Scheme.SYMMETRIC, m, lam)(u))


def boas_closed_form(lam: float, sigma: float, m: int, t: float, delta: float) -> float:
    """δ^{−2m}‖**Δ_δ^m f‖/(t^{−2m}‖**Δ_t^m f‖) for f = j_λ(σ·)"""
    kernel = MultiplierKernel(Scheme.SYMMETRIC, m, lam)
    return float(kernel(sigma * delta)) * delta ** (-2 * m) / (float(kernel(sigma * t)) * t ** (-2 * m))


def stechkin_boas_check(lam: IndexLike, sigma: float, m: int, p: float, t_delta_pairs: Sequence[Tuple[float, float]],
                        f: Optional[Profile] = None) -> InequalityReport:
    """
    Nikolskii–Stechkin ‖(−Δ)^m f‖ <= C t^{−2m}‖**Δ_t^m f‖ and Boas
    δ^{−2m}‖**Δ_δ^m f‖ <= C t^{−2m}‖**Δ_t^m f‖ over (t, δ) pairs

    With f = j_λ(σ'·) (the default, σ' = σ) both ratios have closed forms
    and the report compares against them; other f of band <= σ are banded.

    Raises:
        InvalidRangeError: A pair leaves 0 < δ <= t <= 1/(2σ)
    """
    lam = float(as_index(lam))
    _validate_pairs(t_delta_pairs, sigma)
    if f is None and not _finite_p_eigen_ok(lam, p):
        raise InvalidExponentsError(f"j_λ(σ·) is not in L^{p}(dν_λ) for λ={lam}: need p(λ+1/2) > 2λ+2")
    f = f if f is not None else AnalyticProfile("bessel_wave", {"sigma": sigma}, make_measure(lam))
    single = isinstance(f, AnalyticProfile) and f.family == "bessel_wave"
    # a single frequency is measured through translations; its closed forms are the reference
    path = "translation" if single else "spectral"
    scheme = DifferenceScheme(Scheme.SYMMETRIC, m)
    smooth = lp_norm(laplacian_power(f, m), p)

    def scaled_difference(step: float) -> float:
        return step ** (-2 * m) * difference_norm(f, scheme, step, p, path)

    stechkin, boas, labels = [], [], []
    for t, delta in t_delta_pairs:
        at_t = scaled_difference(t)
        stechkin.append(smooth / at_t)
        boas.append(scaled_difference(delta) / at_t)
        labels.append([t, delta])
    params = {"lambda": lam, "sigma": sigma, "m": m, "p": p}

    if single:
        frequency = f.band
        params["frequency"] = frequency
        expected = [stechkin_closed_form(lam, frequency, m, t) for t, _ in t_delta_pairs]
        expected += [boas_closed_form(lam, frequency, m, t, delta) for t, delta in t_delta_pairs]
        return InequalityReport.identity("polynomial.stechkin_boas", params, stechkin + boas, expected,
                                         tolerance=1e-8, details={"pairs": labels})
    lhs = stechkin + boas
    sweep = [f"stechkin@{t:g}" for t, _ in t_delta_pairs] + [f"boas@{t:g},{d:g}" for t, d in t_delta_pairs]
    return InequalityReport.from_sweep("polynomial.stechkin_boas", params, lhs, [1.0] * len(lhs), sweep=sweep,
                                       contract=Contract.BAND)
