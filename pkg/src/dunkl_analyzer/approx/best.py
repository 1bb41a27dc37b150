import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy import special
from scipy.optimize import brentq, minimize_scalar

from ..errors import NotFoundError
from ..measure.norms import lp_norm
from ..measure.profile import AnalyticProfile, DecayKind, Profile, SpectralProfile
from ..measure.quadrature import make_interval_grid
from ..specfun.bessel import as_index, bessel_decay_constant
from ..specfun.cutoff import SHARP, SMOOTH
from ..specfun.kernels import MultiplierKernel, Scheme
from ..transforms.hankel import bandlimit_project, spectral_multiply, to_spectral
from .differences import laplacian_power

logger = logging.getLogger(__name__)

FIND_A_LIMIT = 200.0
FIND_A_STEP = 1.0e-3
MAX_FIND_A_ORDER = 8
BRUTE_FORCE_LEVELS = 64


@dataclass
class ApproximationRecord:
    """Best approximation of f by functions of band <= sigma"""

    sigma: float
    E_sigma: float
    approximant: Profile
    p: float
    near_best: bool = False

    def to_dict(self) -> dict:
        return {"sigma": self.sigma, "E_sigma": self.E_sigma, "p": self.p, "near_best": self.near_best}


def vallee_poussin(f: Profile, sigma: float) -> SpectralProfile:
    """P_σ f = f ∗ θ_σ, i.e. H(P_σ f) = η₀(·/σ) H(f); band <= 2σ"""
    return bandlimit_project(f, sigma, SMOOTH)


def _band(f: Profile) -> Optional[float]:
    if isinstance(f, SpectralProfile):
        return f.band
    if isinstance(f, AnalyticProfile):
        return f.band
    return None


def spectral_tail_mass(f: Profile, sigma: float) -> float:
    """∫_σ^∞ |H f|² dν_λ"""
    band = _band(f)
    if band is not None and band <= sigma:
        return 0.0
    lam = f.lam
    b = f.measure.b
    if isinstance(f, AnalyticProfile) and f.family == "gaussian":
        # A (2a)^{−λ−1} e^{−r²/4a} squared and integrated in closed form
        a = f.gaussian_rate
        return f.amplitude ** 2 * (4.0 * a) ** (-(lam + 1.0)) * float(special.gammaincc(lam + 1.0, sigma ** 2 / (2.0 * a)))
    if isinstance(f, AnalyticProfile) and f.family == "exponential":
        a = f.params.get("a", 1.0) * f.scale
        peak = b * special.gamma(2.0 * lam + 2.0) * a * f.amplitude
        w = a * a / (a * a + sigma * sigma)
        incomplete = special.beta(lam + 2.0, lam + 1.0) * special.betainc(lam + 2.0, lam + 1.0, w)
        return float(peak ** 2 * b * 0.5 * a ** (-2.0 * lam - 4.0) * incomplete)

    F = to_spectral(f)
    hi = F.frequency
    if sigma >= hi:
        return F.spectral_tail_integral(2.0) if not F.truncated else 0.0
    panels = max(1, int(np.ceil((hi - sigma) / F.grid.panel_width)))
    grid = make_interval_grid(f.measure, sigma, hi, panels, F.grid.order)
    inside = grid.integrate(F.spectrum(grid.nodes) ** 2)
    tail = 0.0 if F.truncated else F.spectral_tail_integral(2.0)
    return float(inside + tail)


def _low_pass_residual(f: Profile, sigma: float, p: float) -> SpectralProfile:
    """f − g* with g* the sharp (p = 2) or de la Vallée Poussin (p ≠ 2) approximant"""
    if p == 2:
        return spectral_multiply(f, lambda rho: 1.0 - SHARP(rho, sigma))
    half = sigma / 2.0
    return spectral_multiply(f, lambda rho: 1.0 - SMOOTH(rho, half))


def best_approx(f: Profile, sigma: float, p: float) -> ApproximationRecord:
    """
    E_σ(f)_p = inf ‖f − g‖_p over g of band <= σ, with an approximant

    p = 2 is exact through Parseval with the sharp truncation as
    approximant; other p use P_{σ/2} f and report an upper bound flagged
    near-best.

    Args:
        f: Profile
        sigma: Band, >= 0
        p: Exponent in [1, ∞]

    Returns:
        ApproximationRecord
    """
    if p < 1:
        raise ValueError(f"Best approximation needs p >= 1, got {p}")
    if sigma <= 0:
        return ApproximationRecord(0.0, lp_norm(f, p), f.scaled(0.0) if isinstance(f, AnalyticProfile) else
                                   spectral_multiply(f, lambda rho: np.zeros_like(rho)), p)
    band = _band(f)
    if band is not None and band <= sigma:
        return ApproximationRecord(sigma, 0.0, f, p)
    if p == 2:
        value = float(np.sqrt(max(spectral_tail_mass(f, sigma), 0.0)))
        return ApproximationRecord(sigma, value, bandlimit_project(f, sigma, SHARP), p)
    approximant = vallee_poussin(f, sigma / 2.0)
    value = lp_norm(_low_pass_residual(f, sigma, p), p)
    logger.debug(f"E_{sigma:g}(f)_{p} <= {value:.6g} (near-best)")
    return ApproximationRecord(sigma, value, approximant, p, near_best=True)


def k_functional_realization(f: Profile, t: float, r: int, p: float) -> float:
    """
    R*_{2r}(t, f)_p = ‖f − g*‖_p + t^{2r} ‖(−Δ)^r g*‖_p with g* the approximant of band 1/t

    Args:
        f: Profile
        t: Scale, > 0
        r: Laplacian power, >= 1
        p: Exponent

    Returns:
        Realization value
    """
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    sigma = 1.0 / t
    record = best_approx(f, sigma, p)
    # E_sigma is the residual norm of the reported approximant for every p
    distance = record.E_sigma
    smooth_part = lp_norm(laplacian_power(record.approximant, r), p)
    return distance + t ** (2 * r) * smooth_part


def k_functional_bruteforce(f: Profile, t: float, r: int) -> float:
    """
    min over σ' <= 1/t of ‖f − g_σ'‖₂ + t^{2r} ‖(−Δ)^r g_σ'‖₂ for sharp truncations g_σ'

    Both terms are spectral masses of H(f), so every level costs two quadratures.
    """
    F = to_spectral(f)
    measure = f.measure
    top = min(1.0 / t, F.frequency)
    total = spectral_tail_mass(f, 0.0)

    def mass_below(level: float, power: int) -> float:
        if level <= 0:
            return 0.0
        panels = max(1, int(np.ceil(level / F.grid.panel_width)))
        grid = make_interval_grid(measure, 1e-12 * level, level, panels, F.grid.order)
        return grid.integrate(grid.nodes ** (2 * power) * F.spectrum(grid.nodes) ** 2)

    def objective(level: float) -> float:
        remainder = max(total - mass_below(level, 0), 0.0)
        return float(np.sqrt(remainder) + t ** (2 * r) * np.sqrt(mass_below(level, 2 * r)))

    levels = np.linspace(top / BRUTE_FORCE_LEVELS, top, BRUTE_FORCE_LEVELS)
    values = np.array([objective(level) for level in levels])
    best = int(np.argmin(values))
    value = float(values[best])
    lo = levels[best - 1] if best > 0 else 0.0
    hi = levels[best + 1] if best + 1 < levels.size else levels[best]
    if hi > lo:
        result = minimize_scalar(objective, bounds=(lo, hi), method="bounded")
        if result.success:
            value = min(value, float(result.fun))
    return min(value, float(np.sqrt(total)))


def _tau(lam: float, m: int, t: np.ndarray) -> np.ndarray:
    """1 − symmetric kernel of order m"""
    return 1.0 - MultiplierKernel(Scheme.SYMMETRIC, m, lam)(t)


@lru_cache(maxsize=64)
def find_a(lam: float, m: int, limit: float = FIND_A_LIMIT, step: float = FIND_A_STEP) -> float:
    """
    Smallest a with |1 − j**_{λ,m}(t)| <= 1/2 for every t >= a/2

    The dense grid reaches `limit`; beyond it the decay bound
    |j_λ(t)| <= C (t+1)^{−(λ+1/2)} must keep the symmetric sum below 1/2.

    Args:
        lam: Bessel index
        m: Order, 1 <= m <= 8
        limit: End of the dense grid
        step: Grid spacing

    Returns:
        The constant a

    Raises:
        NotFoundError: No such a up to the limit, or the tail cannot be certified
    """
    lam = float(as_index(lam))
    if m < 1 or m > MAX_FIND_A_ORDER:
        raise ValueError(f"find_a supports 1 <= m <= {MAX_FIND_A_ORDER}, got {m}")
    if lam <= -0.5:
        raise NotFoundError("j_{-1/2} = cos does not decay; |τ| <= 1/2 fails on every half-line")

    central = special.comb(2 * m, m, exact=True)
    weights = [2.0 * special.comb(2 * m, m - s, exact=True) / central for s in range(1, m + 1)]
    constant = bessel_decay_constant(lam)
    tail_bound = sum(w * constant * (s * limit + 1.0) ** (-(lam + 0.5)) for s, w in enumerate(weights, start=1))
    if tail_bound > 0.5:
        raise NotFoundError(f"Decay bound {tail_bound:.3g} beyond t={limit:g} does not certify |τ| <= 1/2")

    t = np.arange(0.0, limit + step, step)
    excess = np.abs(_tau(lam, m, t)) - 0.5
    violating = np.nonzero(excess > 0)[0]
    if violating.size == 0:
        return 0.0
    last = int(violating[-1])
    if last + 1 >= t.size:
        raise NotFoundError(f"|τ| exceeds 1/2 up to t={limit:g}; raise the search bound")
    crossing = brentq(lambda s: abs(float(_tau(lam, m, s))) - 0.5, t[last], t[last + 1])
    a = 2.0 * crossing
    logger.debug(f"find_a(λ={lam}, m={m}) = {a:.6f}")
    return float(a)


def decays_fast(f: Profile) -> bool:
    """Spectrum with Gaussian or exponential decay"""
    if isinstance(f, AnalyticProfile):
        decay = f.spectral_decay()
        return decay is not None and decay.kind in (DecayKind.GAUSSIAN, DecayKind.EXPONENTIAL)
    return False
