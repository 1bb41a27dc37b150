import logging
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy.integrate import trapezoid

from ..errors import InsufficientDecayError
from ..fitting import log_log_fit
from ..measure.norms import lp_norm
from ..measure.profile import AnalyticProfile, Profile, SpectralProfile
from ..reports import Contract, InequalityReport, Verdict
from ..specfun.cutoff import SMOOTH, CutoffProfile
from ..specfun.kernels import Scheme
from ..transforms.hankel import spectral_multiply, to_spectral
from .best import (
    best_approx,
    k_functional_bruteforce,
    k_functional_realization,
    spectral_tail_mass,
    vallee_poussin,
)
from .differences import DifferenceScheme, difference_norm, laplacian_power, modulus

logger = logging.getLogger(__name__)

MARCHAUD_POINTS = 64
# terms j^{2r−1} E_j must fall faster than j^{-1-margin} to certify the tail
TAIL_SLOPE_MARGIN = 0.05
TAIL_FIT_POINTS = 16


def _params(f: Profile, **extra) -> Dict:
    params = {"lambda": f.lam}
    if isinstance(f, AnalyticProfile):
        params["profile"] = f.family
        params.update({f"profile.{k}": v for k, v in f.params.items()})
    else:
        params["profile"] = f.variant
    params.update(extra)
    return params


def _band(f: Profile) -> Optional[float]:
    if isinstance(f, (SpectralProfile, AnalyticProfile)):
        return f.band
    return None


def error_sequence(f: Profile, top: int, p: float) -> np.ndarray:
    """E_j(f)_p for j = 0..top, with E_0 = ‖f‖_p"""
    errors = np.zeros(top + 1)
    errors[0] = lp_norm(f, p)
    source = f
    if p == 2 and not (isinstance(f, AnalyticProfile) and f.family in ("gaussian", "exponential")):
        source = to_spectral(f)
    for j in range(1, top + 1):
        if p == 2:
            errors[j] = np.sqrt(max(spectral_tail_mass(source, float(j)), 0.0))
        else:
            errors[j] = best_approx(source, float(j), p).E_sigma
    return errors


def jackson_check(f: Profile, sigma_sweep: Sequence[float], r: int, m: int, scheme, p: float) -> InequalityReport:
    """
    E_σ(f)_p σ^{2r} against Ω_m(1/σ, (−Δ)^r f)_p over a sweep of σ

    Points where E_σ = 0 (σ above the band of f) satisfy the estimate
    trivially and are left out of the ratio.

    Args:
        f: Profile
        sigma_sweep: Bands σ >= 1
        r: Laplacian power, >= 0
        m: Modulus order
        scheme: Difference scheme of the modulus
        p: Exponent

    Returns:
        InequalityReport with a band contract
    """
    difference_scheme = DifferenceScheme(Scheme(scheme), m)
    params = _params(f, r=r, m=m, scheme=difference_scheme.scheme.value, p=p)
    smoothed = laplacian_power(f, r)
    sigmas = [float(s) for s in sigma_sweep]
    errors = np.array([best_approx(f, s, p).E_sigma for s in sigmas])
    near_best = p != 2

    if np.all(errors == 0.0):
        logger.info(f"jackson: f has band <= {min(sigmas):g}, every E_σ vanishes")
        return InequalityReport("jackson.direct", params, 0.0, 0.0, 0.0, contract=Contract.BAND,
                                verdict=Verdict.TRIVIALLY_SATISFIED, details={"sweep": sigmas})

    keep = [i for i, e in enumerate(errors) if e > 0.0]
    lhs = [errors[i] * sigmas[i] ** (2 * r) for i in keep]
    rhs = [modulus(smoothed, difference_scheme, 1.0 / sigmas[i], p) for i in keep]
    notes = []
    if len(keep) < len(sigmas):
        notes.append(f"{len(sigmas) - len(keep)} sweep points above the band of f dropped")
    return InequalityReport.from_sweep("jackson.direct", params, lhs, rhs, sweep=[sigmas[i] for i in keep],
                                       contract=Contract.BAND, near_best=near_best, notes=notes)


def equivalence_quantities(f: Profile, delta: float, r: int, p: float) -> Dict[str, float]:
    """R*_{2r}, ω_r, **ω_r, *ω_{2r−1} and *ω_{2r} at δ"""
    return {
        "realization": k_functional_realization(f, delta, r, p),
        "iterated": modulus(f, DifferenceScheme(Scheme.ITERATED, r), delta, p),
        "symmetric": modulus(f, DifferenceScheme(Scheme.SYMMETRIC, r), delta, p),
        "forward_odd": modulus(f, DifferenceScheme(Scheme.FORWARD, 2 * r - 1), delta, p),
        "forward_even": modulus(f, DifferenceScheme(Scheme.FORWARD, 2 * r), delta, p),
    }


def equivalence_check(f: Profile, delta_sweep: Sequence[float], r: int, p: float) -> InequalityReport:
    """
    Cross-ratios of each modulus to the K-realization over δ in (0, 1]

    The report band covers every ratio of every modulus at every δ;
    the per-modulus ratio ranges are kept in the details.
    """
    deltas = [float(d) for d in delta_sweep]
    if any(not 0.0 < d <= 1.0 for d in deltas):
        raise ValueError(f"Equivalence sweep must lie in (0, 1], got {deltas}")
    params = _params(f, r=r, p=p)
    table = [equivalence_quantities(f, d, r, p) for d in deltas]

    sweep, lhs, rhs = [], [], []
    per_modulus: Dict[str, List[float]] = {}
    for delta, row in zip(deltas, table):
        base = row["realization"]
        for name, value in row.items():
            if name == "realization":
                continue
            sweep.append(f"{name}@{delta:g}")
            lhs.append(value)
            rhs.append(base)
            if base > 0:
                per_modulus.setdefault(name, []).append(value / base)
    details = {"quantities": table,
               "ranges": {name: [min(v), max(v)] for name, v in per_modulus.items()}}
    return InequalityReport.from_sweep("kfunctional.equivalence", params, lhs, rhs, sweep=sweep,
                                       contract=Contract.BAND, near_best=p != 2, details=details)


def marchaud_check(f: Profile, delta_sweep: Sequence[float], m: int, p: float,
                   points: int = MARCHAUD_POINTS) -> InequalityReport:
    """
    K_{2m}(δ) against δ^{2m} (‖f‖_p + ∫_δ^1 t^{−2m} K_{2m+2}(t) dt/t)

    The integral is a trapezoid rule in log t over a geometric grid that
    contains every δ of the sweep.
    """
    deltas = sorted(float(d) for d in delta_sweep)
    if any(not 0.0 < d <= 1.0 for d in deltas):
        raise ValueError(f"Marchaud sweep must lie in (0, 1], got {deltas}")
    params = _params(f, m=m, p=p)
    t_grid = np.unique(np.concatenate([np.geomspace(deltas[0], 1.0, points), deltas, [1.0]]))
    higher = np.array([k_functional_realization(f, t, m + 1, p) for t in t_grid])
    integrand = t_grid ** (-2.0 * m) * higher
    norm = lp_norm(f, p)

    lhs, rhs = [], []
    for delta in deltas:
        inside = t_grid >= delta
        integral = trapezoid(integrand[inside], np.log(t_grid[inside])) if np.count_nonzero(inside) > 1 else 0.0
        lhs.append(k_functional_realization(f, delta, m, p))
        rhs.append(delta ** (2 * m) * (norm + integral))
    return InequalityReport.from_sweep("inverse.marchaud", params, lhs, rhs, sweep=deltas,
                                       contract=Contract.BAND, near_best=p != 2)


def inverse_check(f: Profile, n_sweep: Sequence[int], m: int, p: float) -> InequalityReport:
    """
    K_{2m}(1/n, f)_p against n^{−2m} Σ_{j=0}^n (j+1)^{2m−1} E_j(f)_p

    The Marchaud form on the δ = 1/n sweep is attached as a sub-report.
    """
    ns = sorted(int(n) for n in n_sweep)
    if ns[0] < 1:
        raise ValueError(f"n must be >= 1, got {ns[0]}")
    params = _params(f, m=m, p=p)
    errors = error_sequence(f, ns[-1], p)
    weights = (np.arange(ns[-1] + 1) + 1.0) ** (2 * m - 1)

    lhs, rhs = [], []
    for n in ns:
        lhs.append(k_functional_realization(f, 1.0 / n, m, p))
        rhs.append(n ** (-2.0 * m) * float(np.sum(weights[:n + 1] * errors[:n + 1])))
    marchaud = marchaud_check(f, [1.0 / n for n in ns], m, p)
    details = {"E_j": errors.tolist(), "marchaud": marchaud.to_dict()}
    return InequalityReport.from_sweep("inverse.direct", params, lhs, rhs, sweep=ns, contract=Contract.BAND,
                                       near_best=p != 2, details=details)


def _certified_tail(errors: np.ndarray, r: int) -> float:
    """
    Bound on Σ_{j>J} j^{2r−1} E_j from a log-log fit of the last terms

    Raises:
        InsufficientDecayError: The terms do not decay faster than 1/j
    """
    top = errors.size - 1
    if errors[top] == 0.0:
        return 0.0
    j = np.arange(max(1, top - TAIL_FIT_POINTS + 1), top + 1, dtype=float)
    terms = j ** (2 * r - 1) * errors[j.astype(int)]
    if np.any(terms <= 0.0):
        # some E_j already vanished; the band ends inside the fit window
        return 0.0
    slope, _, _ = log_log_fit(j, terms)
    if slope >= -1.0 - TAIL_SLOPE_MARGIN:
        raise InsufficientDecayError(
            f"Σ j^{2 * r - 1} E_j: terms decay like j^{slope:.3f}, the series tail beyond {top} is not summable"
        )
    return float(terms[-1] * top / (-slope - 1.0))


def derivative_inverse_check(f: Profile, r: int, m: int, n_sweep: Sequence[int], p: float,
                             horizon: Optional[int] = None) -> InequalityReport:
    """
    K_{2m}(1/n, (−Δ)^r f)_p against
    n^{−2m} Σ_{j<=n} (j+1)^{2m+2r−1} E_j + Σ_{j>n} j^{2r−1} E_j

    E_j is computed up to `horizon` (default 4 max n) and the series beyond
    it is bounded from the decay of its last terms.

    Raises:
        InsufficientDecayError: The series Σ j^{2r−1} E_j cannot be certified
    """
    ns = sorted(int(n) for n in n_sweep)
    horizon = horizon or max(4 * ns[-1], 64)
    params = _params(f, r=r, m=m, p=p)
    errors = error_sequence(f, horizon, p)
    tail_beyond = _certified_tail(errors, r)
    j = np.arange(horizon + 1, dtype=float)
    head_weights = (j + 1.0) ** (2 * m + 2 * r - 1)
    tail_terms = np.where(j > 0, j, 1.0) ** (2 * r - 1) * errors
    smoothed = laplacian_power(f, r)

    lhs, rhs = [], []
    for n in ns:
        head = n ** (-2.0 * m) * float(np.sum(head_weights[:n + 1] * errors[:n + 1]))
        tail = float(np.sum(tail_terms[n + 1:])) + tail_beyond
        lhs.append(k_functional_realization(smoothed, 1.0 / n, m, p))
        rhs.append(head + tail)
    return InequalityReport.from_sweep("inverse.derivative", params, lhs, rhs, sweep=ns, contract=Contract.BAND,
                                       near_best=p != 2, tail_error=tail_beyond / max(max(rhs), 1e-300),
                                       details={"series_tail": tail_beyond})


def saturation_report(f: Profile, n_sweep: Sequence[int], m: int, p: float,
                      scheme=Scheme.ITERATED) -> InequalityReport:
    """
    ω_m(1/n)/E_n side by side with ω_m(1/n)/ω_{m+1}(1/n)

    The report's ratio is the first series; the second is kept in the
    details. Both ranges are printed for comparison, nothing is asserted
    about one implying the other.
    """
    ns = sorted(int(n) for n in n_sweep)
    lower = DifferenceScheme(Scheme(scheme), m)
    upper = DifferenceScheme(Scheme(scheme), m + 1)
    params = _params(f, m=m, p=p, scheme=lower.scheme.value)
    moduli = [modulus(f, lower, 1.0 / n, p) for n in ns]
    next_moduli = [modulus(f, upper, 1.0 / n, p) for n in ns]
    errors = [best_approx(f, float(n), p).E_sigma for n in ns]
    order_ratios = [a / b if b > 0 else None for a, b in zip(moduli, next_moduli)]
    finite = [x for x in order_ratios if x is not None]
    details = {"omega_next": next_moduli, "order_ratios": order_ratios,
               "order_range": [min(finite), max(finite)] if finite else None}
    return InequalityReport.from_sweep("kfunctional.saturation", params, moduli, errors, sweep=ns,
                                       contract=Contract.BAND, near_best=p != 2, details=details)


def spectral_difference(f: Profile, g: Profile) -> SpectralProfile:
    """f − g on the spectral grid of f"""
    F = to_spectral(f)
    G = to_spectral(g)
    band = None
    if F.band is not None and G.band is not None:
        band = max(F.band, G.band)
    tail = F.spectral_tail if not F.truncated else G.spectral_tail
    return F.with_values(F.values - G.spectrum(F.grid.nodes), band=band, spectral_tail=tail)


def k_functional_lipschitz_check(f: Profile, g: Profile, t_sweep: Sequence[float], r: int,
                                 p: float) -> InequalityReport:
    """
    |K(t, f) − K(t, g)| <= ‖f − g‖_p

    For p = 2 the brute-force infimum is an exact K and the check is an
    upper bound; other p run on the realization, which is only equivalent
    to K, so the ratios are banded.
    """
    ts = [float(t) for t in t_sweep]
    distance = lp_norm(spectral_difference(f, g), p)
    params = _params(f, r=r, p=p, other=g.family if isinstance(g, AnalyticProfile) else g.variant)
    if p == 2:
        lhs = [abs(k_functional_bruteforce(f, t, r) - k_functional_bruteforce(g, t, r)) for t in ts]
        return InequalityReport.from_sweep("kfunctional.lipschitz", params, lhs, [distance] * len(ts), sweep=ts,
                                           tolerance=1e-3)
    lhs = [abs(k_functional_realization(f, t, r, p) - k_functional_realization(g, t, r, p)) for t in ts]
    return InequalityReport.from_sweep("kfunctional.lipschitz", params, lhs, [distance] * len(ts), sweep=ts,
                                       contract=Contract.BAND, near_best=True)


def bandlimited_modulus_check(g: Profile, delta_sweep: Sequence[float], scheme, m: int,
                              p: float) -> InequalityReport:
    """
    ω_m(δ, g)_p against (σδ)^k ‖g‖_p for g of band σ, with k the zero order of the scheme

    Raises:
        ValueError: g has no finite band
    """
    sigma = _band(g)
    if sigma is None:
        raise ValueError("Bandlimited modulus bound needs a profile with finite band")
    difference_scheme = DifferenceScheme(Scheme(scheme), m)
    order = difference_scheme.kernel(g.lam).zero_order
    params = _params(g, m=m, scheme=difference_scheme.scheme.value, p=p, band=sigma)
    deltas = [float(d) for d in delta_sweep]
    norm = lp_norm(g, p)
    lhs = [modulus(g, difference_scheme, d, p) for d in deltas]
    rhs = [(sigma * d) ** order * norm for d in deltas]
    return InequalityReport.from_sweep("modulus.bandlimited", params, lhs, rhs, sweep=deltas,
                                       contract=Contract.BAND)


def difference_k_equivalence_check(f: Profile, delta_sweep: Sequence[float], r: int,
                                   p: float) -> InequalityReport:
    """‖Δ_δ^r f‖_p (iterated) against the realization K_{2r}(δ, f)_p"""
    deltas = [float(d) for d in delta_sweep]
    scheme = DifferenceScheme(Scheme.ITERATED, r)
    params = _params(f, r=r, p=p)
    lhs = [difference_norm(f, scheme, d, p) for d in deltas]
    rhs = [k_functional_realization(f, d, r, p) for d in deltas]
    return InequalityReport.from_sweep("kfunctional.difference", params, lhs, rhs, sweep=deltas,
                                       contract=Contract.BAND, near_best=p != 2)


def k_scaling_check(f: Profile, t: float, s_sweep: Sequence[float], r: int) -> InequalityReport:
    """K(s t) <= max(1, s^{2r}) K(t) for the exact p = 2 infimum"""
    scales = [float(s) for s in s_sweep]
    base = k_functional_bruteforce(f, t, r)
    lhs = [k_functional_bruteforce(f, s * t, r) for s in scales]
    rhs = [max(1.0, s ** (2 * r)) * base for s in scales]
    return InequalityReport.from_sweep("kfunctional.scaling", _params(f, t=t, r=r), lhs, rhs, sweep=scales,
                                       tolerance=1e-3)


def realization_bruteforce_check(f: Profile, t_sweep: Sequence[float], r: int) -> InequalityReport:
    """R*_{2r}(t, f)_2 against the truncation-level minimum; both should agree within 5%"""
    ts = [float(t) for t in t_sweep]
    lhs = [k_functional_realization(f, t, r, 2.0) for t in ts]
    rhs = [k_functional_bruteforce(f, t, r) for t in ts]
    report = InequalityReport.from_sweep("kfunctional.bruteforce", _params(f, r=r), lhs, rhs, sweep=ts,
                                         contract=Contract.EXACT, tolerance=0.05)
    return report


def difference_bound_check(f: Profile, scheme: DifferenceScheme, t_sweep: Sequence[float],
                           p: float) -> InequalityReport:
    """‖Δ_t f‖_p <= 2^m ‖f‖_p (forward and iterated) or 2 ‖f‖_p (symmetric)"""
    ts = [float(t) for t in t_sweep]
    if scheme.scheme is Scheme.SYMMETRIC:
        total = sum(abs(c) for _, c in scheme.translation_terms())
    else:
        total = 2.0 ** scheme.m
    norm = lp_norm(f, p)
    lhs = [difference_norm(f, scheme, t, p) for t in ts]
    return InequalityReport.from_sweep("modulus.bound", _params(f, scheme=scheme.label, p=p), lhs,
                                       [total * norm] * len(ts), sweep=ts, tolerance=1e-6)


def modulus_order_check(f: Profile, scheme, m: int, extra: int, delta_sweep: Sequence[float],
                        p: float) -> InequalityReport:
    """ω_{m+r}(δ, f) <= 2^r ω_m(δ, f)"""
    deltas = [float(d) for d in delta_sweep]
    lower = DifferenceScheme(Scheme(scheme), m)
    higher = DifferenceScheme(Scheme(scheme), m + extra)
    lhs = [modulus(f, higher, d, p) for d in deltas]
    rhs = [2.0 ** extra * modulus(f, lower, d, p) for d in deltas]
    params = _params(f, scheme=lower.scheme.value, m=m, extra=extra, p=p)
    return InequalityReport.from_sweep("modulus.order", params, lhs, rhs, sweep=deltas, tolerance=1e-4)


def modulus_monotone_check(f: Profile, scheme: DifferenceScheme, delta_sweep: Sequence[float],
                           p: float) -> InequalityReport:
    """ω(δ_i) <= ω(δ_{i+1}) along an increasing sweep"""
    deltas = sorted(float(d) for d in delta_sweep)
    values = [modulus(f, scheme, d, p) for d in deltas]
    return InequalityReport.from_sweep("modulus.monotone", _params(f, scheme=scheme.label, p=p),
                                       values[:-1], values[1:], sweep=deltas[:-1], tolerance=1e-4)


def vallee_poussin_reproduction_check(g: Profile, sigma: float,
                                      cutoff: CutoffProfile = SMOOTH) -> InequalityReport:
    """
    P_σ g = g for g of band <= σ

    H(g) is multiplied by the cutoff η(·/σ) on its spectral grid, so the
    report fails unless η equals 1 on [0, σ].
    """
    band = _band(g)
    if band is None or band > sigma:
        raise ValueError(f"Reproduction needs band <= σ={sigma}, got {band}")
    G = to_spectral(g)
    projected = spectral_multiply(G, lambda r: cutoff(r, sigma), band=cutoff.support_factor * sigma)
    grid = g.integration_grid()
    inside = G.grid.nodes <= band
    details = {"cutoff_min_on_band": float(np.min(cutoff(G.grid.nodes[inside], sigma))) if np.any(inside) else 1.0}
    return InequalityReport.identity("approx.vallee_poussin.reproduction", _params(g, sigma=sigma),
                                     projected.values_on(grid), g.values_on(grid), tolerance=1e-10, details=details)


def vallee_poussin_error_check(f: Profile, sigma_sweep: Sequence[float]) -> InequalityReport:
    """‖f − P_σ f‖_2 against E_σ(f)_2"""
    sigmas = [float(s) for s in sigma_sweep]
    lhs, rhs = [], []
    for sigma in sigmas:
        record = best_approx(f, sigma, 2.0)
        residual = spectral_difference(f, vallee_poussin(f, sigma))
        lhs.append(lp_norm(residual, 2.0))
        rhs.append(record.E_sigma)
    return InequalityReport.from_sweep("approx.vallee_poussin.error", _params(f), lhs, rhs, sweep=sigmas,
                                       contract=Contract.BAND)
