import json
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from math import factorial
from typing import Any, Callable, Dict, Optional

import numpy as np
from scipy import special
from scipy.interpolate import CubicSpline

from ..errors import OutOfRangeError, UnboundedTailError
from ..specfun.bessel import bessel_j, bessel_j_imaginary
from ..specfun.cutoff import eta0
from .quadrature import (
    DEFAULT_PANELS,
    RadialGrid,
    WeightedMeasure,
    default_t_max,
    grid_with_extent,
    make_interval_grid,
    make_measure,
    make_radial_grid,
)

logger = logging.getLogger(__name__)

# e^{-40} is below double-precision resolution relative to O(1) values
NEGLIGIBLE_EXPONENT = 40.0
SYNTHESIS_CHUNK = 2048
ZERO_EXTENSION_THRESHOLD = 1.0e-12


class DecayKind(str, Enum):
    GAUSSIAN = "gaussian"
    EXPONENTIAL = "exponential"
    POLYNOMIAL = "polynomial"
    COMPACT = "compact"
    BANDLIMITED = "bandlimited"
    NONE = "none"


def _scaled_upper_gamma(s: float, x: float) -> float:
    """Upper bound for e^x Γ(s, x)"""
    if x <= 50.0:
        return float(np.exp(np.log(special.gammaincc(s, x)) + special.gammaln(s) + x)) if x > 0 else float(special.gamma(s))
    shift = max(s - 1.0, 0.0)
    return float(x ** (s - 1.0) * x / (x - shift))


@dataclass(frozen=True)
class Decay:
    """
    Decay class of a profile at infinity

    rate: a for e^{-a t²} and e^{-a t}, β for t^{-β} envelopes
    support: radius of the support for compact profiles
    """

    kind: DecayKind
    rate: float = 0.0
    support: float = float("inf")

    def __post_init__(self):
        object.__setattr__(self, "kind", DecayKind(self.kind))

    @property
    def allows_zero_extension(self) -> bool:
        return self.kind in (DecayKind.GAUSSIAN, DecayKind.COMPACT)

    def dilated(self, s: float) -> "Decay":
        """Decay of f(s·)"""
        if self.kind is DecayKind.GAUSSIAN:
            return Decay(self.kind, self.rate * s * s, self.support)
        if self.kind is DecayKind.EXPONENTIAL:
            return Decay(self.kind, self.rate * s, self.support)
        return Decay(self.kind, self.rate, self.support / s)

    def tail_integral(self, measure: WeightedMeasure, T: float, p: float, amplitude: float) -> float:
        """
        Estimated ∫_T^∞ |f|^p dν_λ from the envelope anchored at |f(T)| ≈ amplitude

        Returns the sup bound beyond T when p is infinite, and inf when the
        decay class cannot certify the tail.
        """
        if self.kind is DecayKind.COMPACT and self.support <= T:
            return 0.0
        if amplitude == 0.0 and self.kind is not DecayKind.NONE:
            return 0.0
        if np.isinf(p):
            return float("inf") if self.kind in (DecayKind.NONE, DecayKind.COMPACT) else amplitude

        lam = float(measure.lam)
        b = measure.b
        scale = amplitude ** p
        if self.kind is DecayKind.GAUSSIAN:
            pa = p * self.rate
            return b * scale * 0.5 * pa ** (-(lam + 1.0)) * _scaled_upper_gamma(lam + 1.0, pa * T * T)
        if self.kind is DecayKind.EXPONENTIAL:
            pa = p * self.rate
            return b * scale * pa ** (-(2.0 * lam + 2.0)) * _scaled_upper_gamma(2.0 * lam + 2.0, pa * T)
        if self.kind in (DecayKind.POLYNOMIAL, DecayKind.BANDLIMITED):
            excess = p * self.rate - measure.homogeneity
            if excess <= 0:
                return float("inf")
            return b * scale * T ** measure.homogeneity / excess
        return float("inf")

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "rate": self.rate, "support": None if np.isinf(self.support) else self.support}

    @classmethod
    def from_dict(cls, data: dict) -> "Decay":
        support = data.get("support")
        return cls(data["kind"], data.get("rate", 0.0), float("inf") if support is None else support)


class Profile(ABC):
    """A radial function f_0 on [0, ∞) tied to a weighted measure"""

    variant = "abstract"

    def __init__(self, measure: WeightedMeasure, decay: Decay):
        self.measure = measure
        self.decay = decay

    @property
    def lam(self) -> float:
        return float(self.measure.lam)

    @abstractmethod
    def evaluate(self, t) -> np.ndarray:
        """Values at arbitrary radii"""

    def __call__(self, t):
        values = self.evaluate(np.atleast_1d(np.asarray(t, dtype=float)))
        if np.ndim(t) == 0:
            return float(values[0])
        return values.reshape(np.shape(t))

    @abstractmethod
    def spatial_extent(self) -> float:
        """Radius beyond which the profile is negligible or described by its decay class"""

    def integration_grid(self) -> RadialGrid:
        extent = max(default_t_max(self.lam), self.spatial_extent())
        return grid_with_extent(self.measure, extent)

    def values_on(self, grid: RadialGrid) -> np.ndarray:
        return self.evaluate(grid.nodes)

    def tail_integral(self, grid: RadialGrid, p: float, values: np.ndarray = None) -> float:
        if values is None:
            values = self.values_on(grid)
        amplitude = float(np.max(np.abs(values[grid.last_panel()]))) if values.size else 0.0
        return self.decay.tail_integral(self.measure, grid.hi, p, amplitude)

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        """Self-describing JSON document"""

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


# ---------------------------------------------------------------------------
# Analytic families


@dataclass(frozen=True)
class AnalyticFamily:
    value: Callable
    decay: Callable
    extent: Callable
    spectrum: Optional[Callable] = None
    spectral_extent: Optional[Callable] = None
    spectral_decay: Optional[Callable] = None
    band: Optional[Callable] = None


def _gaussian_value(t, lam, a=0.5):
    return np.exp(-a * t * t)


def _gaussian_spectrum(r, lam, a=0.5):
    return (2.0 * a) ** (-lam - 1.0) * np.exp(-r * r / (4.0 * a))


def _moment_root(n: float) -> float:
    # solves u − n log u = NEGLIGIBLE_EXPONENT
    u = NEGLIGIBLE_EXPONENT
    for _ in range(20):
        u = NEGLIGIBLE_EXPONENT + n * np.log(max(u, 1.0))
    return u


def _moment_value(t, lam, n=1, a=0.5):
    return t ** (2 * n) * np.exp(-a * t * t)


def _moment_spectrum(r, lam, n=1, a=0.5):
    u = r * r / (4.0 * a)
    return factorial(int(n)) * (2.0 * a) ** (-lam - 1.0) * a ** (-n) * np.exp(-u) * special.eval_genlaguerre(int(n), lam, u)


def _exponential_spectrum(r, lam, a=1.0):
    b = WeightedMeasure(lam).b
    return b * special.gamma(2.0 * lam + 2.0) * a * (a * a + r * r) ** (-(lam + 1.5))


def _rational_value(t, lam, beta=3.0):
    return (1.0 + t * t) ** (-beta)


def _rational_spectrum(r, lam, beta=3.0):
    r = np.asarray(r, dtype=float)
    out = np.empty_like(r)
    at_zero = r == 0.0
    if np.any(at_zero):
        # b_λ ∫ (1+t²)^{-β} t^{2λ+1} dt = b_λ B(λ+1, β−λ−1)/2
        out[at_zero] = WeightedMeasure(lam).b * 0.5 * special.beta(lam + 1.0, beta - lam - 1.0)
    rr = r[~at_zero]
    order = abs(lam + 1.0 - beta)
    out[~at_zero] = 2.0 ** (1.0 - beta) / special.gamma(beta) * rr ** (beta - 1.0 - lam) * special.kv(order, rr)
    return out


def _bump_value(t, lam, radius=4.0, k=12):
    return np.clip(1.0 - (t / radius) ** 2, 0.0, None) ** int(k)


def _bump_spectrum(r, lam, radius=4.0, k=12):
    # Sonine: H((1−t²)₊^k)(ρ) = k! / (2^{λ+1} Γ(λ+k+2)) j_{λ+k+1}(ρ)
    k = int(k)
    log_factor = (special.gammaln(k + 1.0) - (lam + 1.0) * np.log(2.0) - special.gammaln(lam + k + 2.0)
                  + (2.0 * lam + 2.0) * np.log(radius))
    return np.exp(log_factor) * bessel_j(lam + k + 1.0, radius * np.asarray(r, dtype=float))


def _nikolskii_value(t, lam, theta=1.0, m=1):
    return (theta * np.sinc(theta * t / np.pi)) ** (2 * int(m))


FAMILIES: Dict[str, AnalyticFamily] = {
    "zero": AnalyticFamily(
        value=lambda t, lam: np.zeros_like(t),
        decay=lambda lam: Decay(DecayKind.COMPACT, support=0.0),
        extent=lambda lam: 1.0,
        spectrum=lambda r, lam: np.zeros_like(r),
        spectral_extent=lambda lam: 1.0,
        spectral_decay=lambda lam: Decay(DecayKind.COMPACT, support=0.0),
        band=lambda lam: 0.0,
    ),
    "constant": AnalyticFamily(
        value=lambda t, lam, c=1.0: np.full_like(t, c),
        decay=lambda lam, c=1.0: Decay(DecayKind.NONE),
        extent=lambda lam, c=1.0: default_t_max(lam),
    ),
    "gaussian": AnalyticFamily(
        value=_gaussian_value,
        decay=lambda lam, a=0.5: Decay(DecayKind.GAUSSIAN, a),
        extent=lambda lam, a=0.5: float(np.sqrt(NEGLIGIBLE_EXPONENT / a)),
        spectrum=_gaussian_spectrum,
        spectral_extent=lambda lam, a=0.5: float(np.sqrt(4.0 * a * NEGLIGIBLE_EXPONENT)),
        spectral_decay=lambda lam, a=0.5: Decay(DecayKind.GAUSSIAN, 1.0 / (4.0 * a)),
    ),
    "gaussian_moment": AnalyticFamily(
        value=_moment_value,
        decay=lambda lam, n=1, a=0.5: Decay(DecayKind.GAUSSIAN, a),
        extent=lambda lam, n=1, a=0.5: float(np.sqrt(_moment_root(n) / a)),
        spectrum=_moment_spectrum,
        spectral_extent=lambda lam, n=1, a=0.5: float(np.sqrt(4.0 * a * _moment_root(n))),
        spectral_decay=lambda lam, n=1, a=0.5: Decay(DecayKind.GAUSSIAN, 1.0 / (4.0 * a)),
    ),
    "exponential": AnalyticFamily(
        value=lambda t, lam, a=1.0: np.exp(-a * t),
        decay=lambda lam, a=1.0: Decay(DecayKind.EXPONENTIAL, a),
        extent=lambda lam, a=1.0: NEGLIGIBLE_EXPONENT / a,
        spectrum=_exponential_spectrum,
        spectral_extent=lambda lam, a=1.0: 200.0 * a,
        spectral_decay=lambda lam, a=1.0: Decay(DecayKind.POLYNOMIAL, 2.0 * lam + 3.0),
    ),
    "rational": AnalyticFamily(
        value=_rational_value,
        decay=lambda lam, beta=3.0: Decay(DecayKind.POLYNOMIAL, 2.0 * beta),
        extent=lambda lam, beta=3.0: default_t_max(lam),
        spectrum=_rational_spectrum,
        spectral_extent=lambda lam, beta=3.0: NEGLIGIBLE_EXPONENT + max(beta - lam, 0.0) * 2.0,
        spectral_decay=lambda lam, beta=3.0: Decay(DecayKind.EXPONENTIAL, 1.0),
    ),
    "plateau": AnalyticFamily(
        value=lambda t, lam, radius=1.0: eta0(2.0 * t / radius),
        decay=lambda lam, radius=1.0: Decay(DecayKind.COMPACT, support=radius),
        extent=lambda lam, radius=1.0: radius,
        spectral_extent=lambda lam, radius=1.0: 60.0 / radius,
        spectral_decay=lambda lam, radius=1.0: Decay(DecayKind.POLYNOMIAL, 2.0 * lam + 6.0),
    ),
    "bump": AnalyticFamily(
        value=_bump_value,
        decay=lambda lam, radius=4.0, k=12: Decay(DecayKind.COMPACT, support=radius),
        extent=lambda lam, radius=4.0, k=12: radius,
        spectrum=_bump_spectrum,
        spectral_extent=lambda lam, radius=4.0, k=12: 80.0 / radius,
        spectral_decay=lambda lam, radius=4.0, k=12: Decay(DecayKind.POLYNOMIAL, lam + k + 1.5),
    ),
    "bessel_wave": AnalyticFamily(
        value=lambda t, lam, sigma=1.0: bessel_j(lam, sigma * t),
        decay=lambda lam, sigma=1.0: Decay(DecayKind.BANDLIMITED, lam + 0.5),
        extent=lambda lam, sigma=1.0: default_t_max(lam),
        band=lambda lam, sigma=1.0: sigma,
    ),
    "nikolskii_extremizer": AnalyticFamily(
        value=_nikolskii_value,
        decay=lambda lam, theta=1.0, m=1: Decay(DecayKind.POLYNOMIAL, 2.0 * m),
        extent=lambda lam, theta=1.0, m=1: default_t_max(lam) / theta,
        band=lambda lam, theta=1.0, m=1: 2.0 * m * theta,
    ),
}


class AnalyticProfile(Profile):
    """
    Closed-form family member A·g(s·t)

    The dilation s and amplitude A apply to every family, so dilates stay
    analytic with known spectrum H(A g(s·))(ρ) = A s^{-(2λ+2)} H(g)(ρ/s).
    """

    variant = "analytic"

    def __init__(self, family: str, params: Dict[str, float] = None, measure: WeightedMeasure = None,
                 scale: float = 1.0, amplitude: float = 1.0):
        if family not in FAMILIES:
            raise ValueError(f"Unknown analytic family '{family}'. Available: {', '.join(sorted(FAMILIES))}")
        if scale <= 0:
            raise ValueError(f"Dilation must be positive, got {scale}")
        if measure is None:
            measure = make_measure(0.0)
        self.family = family
        self.params = dict(params or {})
        self.scale = float(scale)
        self.amplitude = float(amplitude)
        self._spec = FAMILIES[family]
        decay = self._spec.decay(float(measure.lam), **self.params).dilated(self.scale)
        if self.amplitude == 0.0:
            decay = Decay(DecayKind.COMPACT, support=0.0)
        super().__init__(measure, decay)

    def evaluate(self, t) -> np.ndarray:
        t = np.abs(np.asarray(t, dtype=float))
        return self.amplitude * self._spec.value(self.scale * t, self.lam, **self.params)

    def spatial_extent(self) -> float:
        return self._spec.extent(self.lam, **self.params) / self.scale

    @property
    def has_spectrum(self) -> bool:
        return self._spec.spectrum is not None

    def spectrum(self, r) -> np.ndarray:
        """Closed-form Hankel transform"""
        if self._spec.spectrum is None:
            raise NotImplementedError(f"Family '{self.family}' has no closed-form spectrum")
        r = np.abs(np.asarray(r, dtype=float))
        factor = self.amplitude * self.scale ** (-self.measure.homogeneity)
        return factor * self._spec.spectrum(r / self.scale, self.lam, **self.params)

    def spectral_extent(self) -> Optional[float]:
        if self._spec.spectral_extent is None:
            return None
        return self._spec.spectral_extent(self.lam, **self.params) * self.scale

    def spectral_decay(self) -> Optional[Decay]:
        if self._spec.spectral_decay is None:
            return None
        return self._spec.spectral_decay(self.lam, **self.params).dilated(1.0 / self.scale)

    @property
    def band(self) -> Optional[float]:
        """Spectral support radius for bandlimited families"""
        if self._spec.band is None:
            return None
        return self._spec.band(self.lam, **self.params) * self.scale

    def dilate(self, s: float) -> "AnalyticProfile":
        """f(s·)"""
        return AnalyticProfile(self.family, self.params, self.measure, self.scale * s, self.amplitude)

    def scaled(self, c: float) -> "AnalyticProfile":
        return AnalyticProfile(self.family, self.params, self.measure, self.scale, self.amplitude * c)

    def with_measure(self, measure: WeightedMeasure) -> "AnalyticProfile":
        return AnalyticProfile(self.family, self.params, measure, self.scale, self.amplitude)

    @property
    def gaussian_rate(self) -> Optional[float]:
        """a with f = A e^{-a t²}, or None for other families"""
        if self.family != "gaussian":
            return None
        return self.params.get("a", 0.5) * self.scale ** 2

    def translate_closed_form(self, x, t) -> np.ndarray:
        """R^t f(x) = A e^{-a(x²+t²)} j_λ(2iaxt) for Gaussian members"""
        a = self.gaussian_rate
        if a is None:
            raise NotImplementedError(f"No closed-form translation for family '{self.family}'")
        x = np.abs(np.asarray(x, dtype=float))
        t = np.abs(np.asarray(t, dtype=float))
        return self.amplitude * np.exp(-a * (x - t) ** 2) * bessel_j_imaginary(self.lam, 2.0 * a * x * t, scaled=True)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "variant": self.variant,
            "family": self.family,
            "params": self.params,
            "scale": self.scale,
            "amplitude": self.amplitude,
            "lambda": self.lam,
            "decay": self.decay.to_dict(),
        }

    def __repr__(self) -> str:
        return f"AnalyticProfile({self.family}, {self.params}, λ={self.lam}, s={self.scale}, A={self.amplitude})"


def gaussian(measure: WeightedMeasure, a: float = 0.5) -> AnalyticProfile:
    return AnalyticProfile("gaussian", {"a": a}, measure)


# ---------------------------------------------------------------------------
# Sampled profiles


class SampledProfile(Profile):
    """Values on the nodes of a radial grid, interpolated by an even cubic spline"""

    variant = "sampled"

    def __init__(self, grid: RadialGrid, values, decay: Decay = None):
        values = np.asarray(values, dtype=float)
        if values.shape != grid.nodes.shape:
            raise ValueError(f"Expected {grid.size} values, got {values.size}")
        super().__init__(grid.measure, decay or Decay(DecayKind.NONE))
        self.grid = grid
        self.values = values
        self._spline = None

    @property
    def spline(self) -> CubicSpline:
        if self._spline is None:
            nodes = self.grid.nodes
            if self.grid.lo == 0.0:
                # mirrored nodes make the interpolant even
                x = np.concatenate([-nodes[::-1], nodes])
                y = np.concatenate([self.values[::-1], self.values])
            else:
                x, y = nodes, self.values
            self._spline = CubicSpline(x, y)
        return self._spline

    @property
    def zero_extension(self) -> bool:
        if not self.decay.allows_zero_extension:
            return False
        peak = np.max(np.abs(self.values)) if self.values.size else 0.0
        edge = np.max(np.abs(self.values[self.grid.last_panel()])) if self.values.size else 0.0
        return edge <= ZERO_EXTENSION_THRESHOLD * max(peak, 1e-300)

    def evaluate(self, t) -> np.ndarray:
        t = np.abs(np.asarray(t, dtype=float))
        out = np.zeros_like(t)
        inside = t <= self.grid.hi
        if np.any(~inside) and not self.zero_extension:
            raise OutOfRangeError(
                f"Sampled profile evaluated at t={t[~inside].max():g} beyond T_max={self.grid.hi:g}"
            )
        if np.any(inside):
            out[inside] = self.spline(t[inside])
        return out

    def values_on(self, grid: RadialGrid) -> np.ndarray:
        if grid is self.grid:
            return self.values
        return self.evaluate(grid.nodes)

    def integration_grid(self) -> RadialGrid:
        return self.grid

    def spatial_extent(self) -> float:
        return self.grid.hi

    def to_dict(self) -> Dict[str, Any]:
        return {
            "variant": self.variant,
            "lambda": self.lam,
            "grid": self.grid.to_dict(),
            "nodes": self.grid.nodes.tolist(),
            "values": self.values.tolist(),
            "decay": self.decay.to_dict(),
        }


# ---------------------------------------------------------------------------
# Spectral profiles


@lru_cache(maxsize=8)
def _synthesis_matrix(grid: RadialGrid, points_key: bytes, shape: tuple) -> np.ndarray:
    points = np.frombuffer(points_key, dtype=float).reshape(shape)
    return bessel_j(grid.measure.lam, np.outer(points, grid.nodes))


def hankel_matrix(points: np.ndarray, grid: RadialGrid) -> np.ndarray:
    """Kernel j_λ(points_i · nodes_j) times the dν_λ weights of the grid"""
    points = np.ascontiguousarray(points, dtype=float)
    if points.size * grid.size > SYNTHESIS_CHUNK * SYNTHESIS_CHUNK:
        return bessel_j(grid.measure.lam, np.outer(points, grid.nodes)) * grid.measure_weights
    kernel = _synthesis_matrix(grid, points.tobytes(), points.shape)
    return kernel * grid.measure_weights


def hankel_sum(points: np.ndarray, grid: RadialGrid, values: np.ndarray) -> np.ndarray:
    """Σ_j b w_j values_j j_λ(points_i nodes_j), chunked over points"""
    points = np.asarray(points, dtype=float).ravel()
    out = np.empty(points.size)
    for start in range(0, points.size, SYNTHESIS_CHUNK):
        chunk = points[start:start + SYNTHESIS_CHUNK]
        out[start:start + chunk.size] = hankel_matrix(chunk, grid) @ values
    return out


class SpectralProfile(Profile):
    """
    Hankel-domain values F on a grid [0, R]; the profile is H_λ(F)

    band: exact spectral support radius (values vanish beyond it), or None
    when the spectrum continues past R with the decay class `spectral_tail`.
    """

    variant = "spectral"

    def __init__(self, grid: RadialGrid, values, band: Optional[float] = None,
                 spectral_tail: Decay = None, decay: Decay = None, extent: float = None):
        values = np.asarray(values, dtype=float)
        if values.shape != grid.nodes.shape:
            raise ValueError(f"Expected {grid.size} spectral values, got {values.size}")
        if band is not None:
            values = np.where(grid.nodes <= band, values, 0.0)
            if band <= grid.hi or spectral_tail is None:
                spectral_tail = Decay(DecayKind.COMPACT, support=band)
        lam = float(grid.measure.lam)
        if decay is None:
            # oscillatory tail of a bandlimited function
            decay = Decay(DecayKind.BANDLIMITED, lam + 1.5)
        super().__init__(grid.measure, decay)
        self.grid = grid
        self.values = values
        self.band = band
        self.spectral_tail = spectral_tail or Decay(DecayKind.NONE)
        self._extent = extent if extent is not None else default_t_max(lam)

    @property
    def truncated(self) -> bool:
        return self.band is not None

    def evaluate(self, t) -> np.ndarray:
        t = np.abs(np.asarray(t, dtype=float))
        return hankel_sum(t, self.grid, self.values).reshape(t.shape)

    def spectrum(self, r) -> np.ndarray:
        r = np.abs(np.asarray(r, dtype=float))
        out = np.zeros_like(r)
        inside = r <= self.grid.hi
        if self.band is not None:
            inside &= r <= self.band
        if np.any(inside):
            spline = CubicSpline(np.concatenate([-self.grid.nodes[::-1], self.grid.nodes]),
                                 np.concatenate([self.values[::-1], self.values]))
            out[inside] = spline(r[inside])
        return out

    def spectral_tail_integral(self, p: float = 2.0) -> float:
        """∫_R^∞ |F|^p dν_λ estimated from the spectral decay class"""
        amplitude = float(np.max(np.abs(self.values[self.grid.last_panel()])))
        return self.spectral_tail.tail_integral(self.measure, self.grid.hi, p, amplitude)

    def spatial_extent(self) -> float:
        return self._extent

    @property
    def frequency(self) -> float:
        """Largest frequency present in the spectrum"""
        return min(self.band, self.grid.hi) if self.band is not None else self.grid.hi

    def integration_grid(self) -> RadialGrid:
        extent = max(default_t_max(self.lam), self._extent)
        width = min(default_t_max(self.lam) / DEFAULT_PANELS, 3.0 / max(self.frequency, 1.0))
        return grid_with_extent(self.measure, extent, width)

    def with_values(self, values, band: Optional[float] = None, spectral_tail: Decay = None,
                    decay: Decay = None) -> "SpectralProfile":
        return SpectralProfile(self.grid, values, band if band is not None else self.band,
                               spectral_tail if spectral_tail is not None else self.spectral_tail,
                               decay if decay is not None else self.decay, self._extent)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "variant": self.variant,
            "lambda": self.lam,
            "band": self.band,
            "grid": self.grid.to_dict(),
            "nodes": self.grid.nodes.tolist(),
            "values": self.values.tolist(),
            "spectral_tail": self.spectral_tail.to_dict(),
            "decay": self.decay.to_dict(),
            "extent": self._extent,
        }


def spectral_grid(measure: WeightedMeasure, R: float, spatial_extent: float, order: int = 16) -> RadialGrid:
    """Grid on [0, R] resolving j_λ(t r) for t up to spatial_extent"""
    width = min(0.25, 3.0 / max(spatial_extent, 1.0))
    panels = max(1, int(np.ceil(R / width)))
    return make_radial_grid(measure, float(R), panels, order, certify=False)


# ---------------------------------------------------------------------------
# Pointwise profiles


class PointwiseProfile(Profile):
    """
    Values computed on demand at any radius, e.g. an operator applied term by term

    Used where neither a closed-form family nor a fixed grid fits, such as
    a difference built from translations evaluated at arbitrary points.
    """

    variant = "pointwise"

    def __init__(self, measure: WeightedMeasure, values: Callable, decay: Decay, extent: float, label: str):
        if extent <= 0:
            raise ValueError(f"Extent must be positive, got {extent}")
        super().__init__(measure, decay)
        self._values = values
        self.extent = float(extent)
        self.label = label

    def evaluate(self, t) -> np.ndarray:
        t = np.abs(np.asarray(t, dtype=float))
        return np.asarray(self._values(t), dtype=float).reshape(t.shape)

    def spatial_extent(self) -> float:
        return self.extent

    def to_dict(self) -> Dict[str, Any]:
        return {
            "variant": self.variant,
            "label": self.label,
            "lambda": self.lam,
            "extent": self.extent,
            "decay": self.decay.to_dict(),
        }

    def __repr__(self) -> str:
        return f"PointwiseProfile({self.label}, λ={self.lam})"


# ---------------------------------------------------------------------------
# Serialization


def _grid_from_dict(data: dict) -> RadialGrid:
    measure = make_measure(data["lambda"])
    if data["lo"] == 0.0:
        return make_radial_grid(measure, data["hi"], data["panels"], data["order"], certify=False)
    return make_interval_grid(measure, data["lo"], data["hi"], data["panels"], data["order"])


def profile_from_dict(data: Dict[str, Any]) -> Profile:
    """Rebuild a profile from its JSON document"""
    variant = data.get("variant")
    if variant == "analytic":
        measure = make_measure(data["lambda"])
        return AnalyticProfile(data["family"], data.get("params", {}), measure,
                               data.get("scale", 1.0), data.get("amplitude", 1.0))
    if variant == "sampled":
        return SampledProfile(_grid_from_dict(data["grid"]), data["values"], Decay.from_dict(data["decay"]))
    if variant == "spectral":
        return SpectralProfile(_grid_from_dict(data["grid"]), data["values"], data.get("band"),
                               Decay.from_dict(data["spectral_tail"]), Decay.from_dict(data["decay"]),
                               data.get("extent"))
    if variant == PointwiseProfile.variant:
        raise ValueError(f"Pointwise profile '{data.get('label')}' is computed on demand and has no stored values")
    raise ValueError(f"Unknown profile variant '{variant}'")


def profile_eval(f: Profile, t):
    """Value of a profile at t (sampled: spline, spectral: inverse Hankel sum)"""
    return f(t)
