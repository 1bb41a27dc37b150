import logging
from dataclasses import dataclass
from math import comb
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from ..measure.norms import lp_norm
from ..measure.profile import AnalyticProfile, Decay, DecayKind, PointwiseProfile, Profile, SampledProfile
from ..measure.quadrature import RadialGrid
from ..reports import InequalityReport
from ..specfun.bessel import bessel_j_laplacian
from ..specfun.kernels import MultiplierKernel, Scheme, forward_coefficients
from ..transforms.hankel import spectral_multiply
from ..transforms.translate import gegenbauer_translate, translation_values

logger = logging.getLogger(__name__)

MODULUS_POINTS = 32
# smallest t of the modulus grid relative to δ
MODULUS_SPAN = 1.0e-3


@dataclass(frozen=True)
class DifferenceScheme:
    """
    Difference operator of order m built from the translation R^t

    iterated:  (I − R^t)^m
    forward:   Σ_{s=0}^m (−1)^s C(m, s) R^{st}
    symmetric: C(2m, m)^{−1} Σ_{s=−m}^m (−1)^s C(2m, m−|s|) R^{|s|t}
    """

    scheme: Scheme
    m: int

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        if self.m < 1:
            raise ValueError(f"Difference order must be >= 1, got {self.m}")

    def kernel(self, lam) -> MultiplierKernel:
        return MultiplierKernel(self.scheme, self.m, lam)

    def translation_terms(self) -> List[Tuple[int, float]]:
        """(s, c_s) with the difference equal to Σ c_s R^{st}; not defined for the iterated scheme"""
        if self.scheme is Scheme.FORWARD:
            return [(s, float(c)) for s, c in enumerate(forward_coefficients(self.m))]
        if self.scheme is Scheme.SYMMETRIC:
            central = comb(2 * self.m, self.m)
            terms = [(0, 1.0)]
            terms += [(s, 2.0 * (-1) ** s * comb(2 * self.m, self.m - s) / central) for s in range(1, self.m + 1)]
            return terms
        raise ValueError("The iterated scheme is a composition, not a sum of translations")

    @property
    def label(self) -> str:
        return f"{self.scheme.value}{self.m}"


def _point_spectrum(f: Profile) -> Optional[float]:
    """σ when the spectrum of f is a point mass at σ, i.e. f = A j_λ(σ·)"""
    if isinstance(f, AnalyticProfile) and f.family == "bessel_wave":
        return f.band
    return None


def _translation_sum(f: Profile, scheme: DifferenceScheme, t: float) -> PointwiseProfile:
    """Σ c_s R^{st} f evaluated by angular quadrature wherever it is asked for"""
    terms = scheme.translation_terms()

    def values(x):
        total = np.zeros(np.shape(x))
        for s, c in terms:
            total = total + c * (f.evaluate(x) if s == 0 else translation_values(f, x, s * t))
        return total

    decay = f.decay
    if decay.kind is DecayKind.COMPACT:
        decay = Decay(DecayKind.COMPACT, support=decay.support + scheme.m * t)
    return PointwiseProfile(f.measure, values, decay, f.spatial_extent() + scheme.m * t,
                            f"{scheme.label} difference at t={t:g}")


def difference(f: Profile, scheme: DifferenceScheme, t: float, path: str = "spectral",
               grid: Optional[RadialGrid] = None) -> Profile:
    """
    Difference of f at step t

    Args:
        f: Profile
        scheme: Scheme and order
        t: Step, > 0
        path: "spectral" multiplies H(f) by the scheme's kernel at t·ρ,
            "translation" combines translations R^{st} f
        grid: Output grid of the translation path; without one the forward
            and symmetric schemes are evaluated pointwise

    Returns:
        Spectral path: SpectralProfile, or a rescaled analytic profile when
        the spectrum of f is a point mass. Translation path: SampledProfile
        on the grid, or a PointwiseProfile.
    """
    if t <= 0:
        raise ValueError(f"Difference step must be positive, got {t}")
    kernel = scheme.kernel(f.lam)
    if path == "spectral":
        sigma = _point_spectrum(f)
        if sigma is not None:
            return f.scaled(float(kernel(t * sigma)))
        return spectral_multiply(f, lambda rho: kernel(t * rho))
    if path != "translation":
        raise ValueError(f"Unknown difference path '{path}'")

    if grid is None and scheme.scheme is not Scheme.ITERATED:
        return _translation_sum(f, scheme, t)
    grid = grid or f.integration_grid()
    if scheme.scheme is Scheme.ITERATED:
        current = SampledProfile(grid, f.values_on(grid), f.decay)
        for _ in range(scheme.m):
            translated = gegenbauer_translate(current, t, grid=grid)
            current = SampledProfile(grid, current.values - translated.values, f.decay)
        return current
    values = np.zeros(grid.size)
    for s, c in scheme.translation_terms():
        if s == 0:
            values += c * f.values_on(grid)
        else:
            values += c * gegenbauer_translate(f, s * t, grid=grid).values
    return SampledProfile(grid, values, f.decay)


def difference_norm(f: Profile, scheme: DifferenceScheme, t: float, p: float, path: str = "spectral") -> float:
    """‖Δ_t f‖_p"""
    return lp_norm(difference(f, scheme, t, path), p)


def modulus(f: Profile, scheme: DifferenceScheme, delta: float, p: float,
            t_grid_size: int = MODULUS_POINTS) -> float:
    """
    ω(δ, f)_p = sup_{0<t<=δ} ‖Δ_t f‖_p

    The sup runs over a geometric grid in (0, δ] and is refined around the
    best grid point.

    Args:
        f: Profile
        scheme: Difference scheme
        delta: Step bound, > 0
        p: Exponent
        t_grid_size: Grid points, >= 16

    Returns:
        Modulus of smoothness
    """
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    if t_grid_size < 16:
        raise ValueError(f"t_grid_size must be >= 16, got {t_grid_size}")
    t_grid = np.geomspace(MODULUS_SPAN * delta, delta, t_grid_size)
    norms = np.array([difference_norm(f, scheme, t, p) for t in t_grid])
    best = int(np.argmax(norms))
    value = float(norms[best])
    lo = t_grid[best - 1] if best > 0 else t_grid[0]
    hi = t_grid[best + 1] if best + 1 < t_grid.size else t_grid[best]
    if hi > lo and best + 1 < t_grid.size:
        result = minimize_scalar(lambda t: -difference_norm(f, scheme, t, p), bounds=(lo, hi), method="bounded",
                                 options={"xatol": 1e-6 * hi})
        if result.success:
            value = max(value, float(-result.fun))
    logger.debug(f"ω_{scheme.label}({delta:g}, f)_{p} = {value:.6g}")
    return value


def laplacian_power(f: Profile, r: int) -> Profile:
    """
    (−Δ)^r f with H((−Δ)^r f)(ρ) = ρ^{2r} H(f)(ρ)

    On radial profiles this is the r-th power of −(d²/dt² + (2λ+1)/t d/dt).
    A single frequency A j_λ(σ·) has no spectrum to multiply, so the radial
    operator is applied to it directly.
    """
    if r < 0:
        raise ValueError(f"Laplacian power must be >= 0, got {r}")
    if r == 0:
        return f
    sigma = _point_spectrum(f)
    if sigma is not None:
        amplitude, lam = f.amplitude, f.lam

        def values(t):
            return amplitude * sigma ** (2 * r) * bessel_j_laplacian(lam, sigma * t, r)

        return PointwiseProfile(f.measure, values, f.decay, f.spatial_extent(), f"(−Δ)^{r} of j_λ({sigma:g}·)")
    return spectral_multiply(f, lambda rho: rho ** (2 * r))


def path_equivalence_check(f: Profile, scheme: DifferenceScheme, t: float,
                           grid: Optional[RadialGrid] = None) -> InequalityReport:
    """Translation and spectral differences agree on the grid"""
    grid = grid or f.integration_grid()
    spatial = difference(f, scheme, t, path="translation", grid=grid)
    spectral = difference(f, scheme, t, path="spectral")
    return InequalityReport.identity("modulus.path_equivalence",
                                     {"lambda": f.lam, "scheme": scheme.scheme.value, "m": scheme.m, "t": t},
                                     spatial.values, spectral.values_on(grid), tolerance=1e-6,
                                     floor=float(np.max(np.abs(f.values_on(grid)))))
