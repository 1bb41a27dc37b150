import logging
from typing import Callable, Dict, Optional

import numpy as np

from ..errors import SingularMultiplierError, UnboundedTailError
from ..fitting import log_log_fit
from ..measure.profile import (
    AnalyticProfile,
    Decay,
    DecayKind,
    Profile,
    SampledProfile,
    SpectralProfile,
    hankel_sum,
    spectral_grid,
)
from ..measure.quadrature import (
    DEFAULT_PANELS,
    RadialGrid,
    default_t_max,
    grid_with_extent,
    make_measure,
    make_radial_grid,
)
from ..specfun.cutoff import SMOOTH, CutoffProfile

logger = logging.getLogger(__name__)

DEFAULT_SPECTRAL_EXTENT = 40.0
# points per unit of r·t needed by an order-16 panel to resolve j_λ(r t)
RESOLUTION = 3.0


def _spatial_grid(f: Profile, R: float) -> RadialGrid:
    """Grid carrying f accurately enough to resolve j_λ(r t) for r <= R"""
    if isinstance(f, SampledProfile):
        return f.grid
    lam = f.lam
    width = min(default_t_max(lam) / DEFAULT_PANELS, RESOLUTION / max(R, 1.0))
    if f.decay.kind is DecayKind.COMPACT and np.isfinite(f.decay.support) and f.decay.support > 0:
        support = f.decay.support
        panels = max(1, int(np.ceil(support / width)))
        return make_radial_grid(f.measure, float(support), panels, 16, certify=False)
    extent = max(default_t_max(lam), f.spatial_extent())
    return grid_with_extent(f.measure, extent, width)


def _quadrature_transform(f: Profile, points: np.ndarray, R: float) -> np.ndarray:
    grid = _spatial_grid(f, R)
    values = f.values_on(grid)
    tail = f.tail_integral(grid, 1.0, values)
    if np.isinf(tail):
        raise UnboundedTailError(
            f"Hankel transform needs an integrable tail; {f.decay.kind.value} decay beyond {grid.hi:g} is not"
        )
    logger.debug(f"quadrature Hankel transform on {grid.size} nodes, tail {tail:.2e}")
    return hankel_sum(points, grid, values)


def to_spectral(f: Profile, R: Optional[float] = None, order: int = 16) -> SpectralProfile:
    """
    Hankel-domain representation of f on [0, R]

    Analytic profiles with a closed spectrum are sampled exactly; other
    profiles go through quadrature.

    Args:
        f: Profile
        R: Spectral radius; defaults to the family's spectral extent
        order: Gauss points per panel of the spectral grid

    Returns:
        SpectralProfile with H(f) on its grid
    """
    if isinstance(f, SpectralProfile):
        return f

    extent = max(default_t_max(f.lam), f.spatial_extent())
    if isinstance(f, AnalyticProfile):
        band = f.band
        natural = f.spectral_extent()
        if band is not None:
            natural = band
        if R is None:
            R = natural if natural is not None else DEFAULT_SPECTRAL_EXTENT
        elif natural is not None and f.spectral_decay() is not None:
            R = min(R, natural)
        grid = spectral_grid(f.measure, R, extent, order)
        if f.has_spectrum:
            values = f.spectrum(grid.nodes)
        else:
            values = _quadrature_transform(f, grid.nodes, R)
        return SpectralProfile(grid, values, band=band, spectral_tail=f.spectral_decay(),
                               decay=f.decay, extent=extent)

    R = DEFAULT_SPECTRAL_EXTENT if R is None else R
    grid = spectral_grid(f.measure, R, extent, order)
    values = _quadrature_transform(f, grid.nodes, R)
    return SpectralProfile(grid, values, spectral_tail=Decay(DecayKind.NONE), decay=f.decay, extent=extent)


def hankel_transform(f: Profile, out_grid: RadialGrid) -> SampledProfile:
    """
    H_λ(f)(r) = ∫ f(t) j_λ(r t) dν_λ(t) sampled on out_grid

    A spectral profile already stores H(f), so its transform is read off
    directly; H_λ is its own inverse.

    Args:
        f: Profile with a certified tail
        out_grid: Grid of output radii

    Returns:
        SampledProfile of H_λ(f)

    Raises:
        UnboundedTailError: f is not integrable as far as its decay class shows
        UnsupportedArgumentError: r·T_max beyond the Bessel evaluation range
    """
    if float(out_grid.measure.lam) != f.lam:
        raise ValueError(f"Output grid is built for λ={float(out_grid.measure.lam)}, profile has λ={f.lam}")
    if isinstance(f, SpectralProfile):
        return SampledProfile(out_grid, f.spectrum(out_grid.nodes), f.spectral_tail)
    if isinstance(f, AnalyticProfile) and f.has_spectrum:
        return SampledProfile(out_grid, f.spectrum(out_grid.nodes), f.spectral_decay() or Decay(DecayKind.NONE))
    values = _quadrature_transform(f, out_grid.nodes, out_grid.hi)
    return SampledProfile(out_grid, values, Decay(DecayKind.NONE))


def spectral_multiply(f: Profile, multiplier: Callable, excise: float = 0.0, band: Optional[float] = None,
                      decay: Optional[Decay] = None, R: Optional[float] = None) -> SpectralProfile:
    """
    Profile with Hankel transform multiplier(r)·H(f)(r)

    Args:
        f: Profile (converted to its spectral form when needed)
        multiplier: Vectorized real map on [0, ∞)
        excise: Radius of a neighbourhood of 0 where the product is set to 0
        band: Support radius of the multiplier, intersected with that of f
        decay: Spatial decay class of the result, defaults to that of f
        R: Spectral radius for the conversion of f

    Returns:
        SpectralProfile

    Raises:
        SingularMultiplierError: multiplier blows up at 0 where H(f) does not vanish
    """
    F = to_spectral(f, R)
    nodes = F.grid.nodes
    with np.errstate(divide="ignore", invalid="ignore"):
        at_zero = np.asarray(multiplier(np.array([0.0])), dtype=float)
        m = np.asarray(multiplier(nodes), dtype=float)
    if excise <= 0.0 and not np.all(np.isfinite(at_zero)):
        peak = float(np.max(np.abs(F.values))) if F.values.size else 0.0
        if abs(float(F.spectrum(np.array([0.0]))[0])) > 1e-12 * max(peak, 1e-300):
            raise SingularMultiplierError(
                "Multiplier is singular at 0 while H(f)(0) does not vanish; pass an excision radius"
            )
    values = m * F.values
    if excise > 0.0:
        values = np.where(nodes < excise, 0.0, values)
    if np.any(~np.isfinite(values)):
        raise SingularMultiplierError("Multiplier is not finite on the spectral grid")

    if band is not None and F.band is not None:
        band = min(band, F.band)
    elif band is None:
        band = F.band
    return SpectralProfile(F.grid, values, band=band, spectral_tail=F.spectral_tail,
                           decay=decay or F.decay, extent=F.spatial_extent())


def cutoff_decay(measure, sharp: bool) -> Decay:
    """Spatial decay of a profile after band projection"""
    lam = float(measure.lam)
    if sharp:
        return Decay(DecayKind.BANDLIMITED, lam + 1.5)
    return Decay(DecayKind.BANDLIMITED, 2.0 * lam + 4.0)


def bandlimit_project(f: Profile, sigma: float, cutoff: CutoffProfile = SMOOTH) -> SpectralProfile:
    """
    P_σ f with H(P_σ f) = η(·/σ) H(f)

    Args:
        f: Profile
        sigma: Band parameter, > 0
        cutoff: Smooth η₀ (support [0, 2σ]) or sharp indicator of [0, σ]

    Returns:
        SpectralProfile with band support_factor·σ
    """
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    support = cutoff.support_factor * sigma
    F = to_spectral(f, support)
    if F.band is not None and F.band <= sigma:
        # both cutoffs equal 1 on [0, σ]
        return F
    decay = cutoff_decay(f.measure, cutoff.sharp)
    if F.truncated and F.band < support:
        decay = F.decay
    return spectral_multiply(F, lambda r: cutoff(r, sigma), band=support, decay=decay)


def cutoff_multiplier_decay(lam: float, r0: float = 1.0, t_max: float = 200.0, points: int = 400) -> Dict[str, float]:
    """
    Decay of the kernel K = H_λ(η₀(·/r0)) out to t_max

    Fits a power law to the envelope of |K| where it stands above the
    quadrature noise and integrates |K| against dν_λ.

    Args:
        lam: Bessel index
        r0: Cutoff radius
        t_max: Largest t examined
        points: Number of envelope windows

    Returns:
        Dictionary with exponent (fitted decay rate), r_squared, l1_mass,
        required (2λ+2) and integrable
    """
    measure = make_measure(lam)
    support = 2.0 * r0
    panels = max(8, int(np.ceil(support * t_max / RESOLUTION)))
    spatial = make_radial_grid(measure, support, panels, 16, certify=False)
    cutoff_values = SMOOTH(spatial.nodes, r0)

    t_grid = grid_with_extent(measure, t_max, min(default_t_max(lam) / DEFAULT_PANELS, RESOLUTION / support))
    kernel = hankel_sum(t_grid.nodes, spatial, cutoff_values)
    l1_mass = t_grid.integrate(np.abs(kernel))

    edges = np.linspace(1.0, t_max, points + 1)
    centres, envelope = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        inside = (t_grid.nodes >= lo) & (t_grid.nodes < hi)
        if np.any(inside):
            centres.append(0.5 * (lo + hi))
            envelope.append(float(np.max(np.abs(kernel[inside]))))
    centres, envelope = np.array(centres), np.array(envelope)
    floor = 1e-13 * max(float(np.max(np.abs(kernel))), 1e-300)
    usable = envelope > floor
    required = measure.homogeneity
    if usable.sum() >= 3:
        slope, _, r_squared = log_log_fit(centres[usable], envelope[usable])
        exponent = -slope
    else:
        exponent, r_squared = float("inf"), 1.0
    integrable = exponent > required or usable.sum() < usable.size
    result = {
        "lambda": float(lam),
        "r0": float(r0),
        "exponent": float(exponent),
        "r_squared": float(r_squared),
        "l1_mass": float(l1_mass),
        "required": float(required),
        "integrable": bool(integrable),
    }
    logger.debug(f"cutoff kernel decay: {result}")
    return result
