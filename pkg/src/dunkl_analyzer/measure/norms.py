import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import minimize_scalar

from ..errors import UnboundedTailError
from .profile import AnalyticProfile, Profile, SpectralProfile
from .quadrature import RadialGrid

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NormEstimate:
    """
    Weighted L^p norm over a grid with its certified tail

    value: (Σ |f|^p w)^{1/p} over the grid, or the refined sup for p = ∞
    tail: bound on how much the part of f beyond T_max can add to value
    """

    value: float
    tail: float
    p: float
    T_max: float
    tolerance: float = 0.0

    @property
    def upper(self) -> float:
        return self.value + self.tail

    def to_dict(self) -> dict:
        return {"value": self.value, "tail": self.tail, "p": self.p, "T_max": self.T_max, "tolerance": self.tolerance}


def _check_grid(f: Profile, grid: RadialGrid):
    if float(grid.measure.lam) != f.lam:
        raise ValueError(f"Grid is built for λ={float(grid.measure.lam)}, profile has λ={f.lam}")


def _sup_refined(f: Profile, grid: RadialGrid, values: np.ndarray) -> float:
    absolute = np.abs(values)
    i = int(np.argmax(absolute))
    best = float(absolute[i])
    lo = grid.nodes[i - 1] if i > 0 else grid.lo
    hi = grid.nodes[i + 1] if i + 1 < grid.size else grid.hi
    if hi <= lo:
        return best
    result = minimize_scalar(lambda t: -abs(f(t)), bounds=(lo, hi), method="bounded",
                             options={"xatol": 1e-10 * max(hi, 1.0)})
    if result.success:
        best = max(best, float(-result.fun))
    # the origin is a common extremum of radial profiles and no quadrature node sits on it
    if grid.lo == 0.0:
        best = max(best, abs(f(0.0)))
    return best


def lp_norm_estimate(f: Profile, p: float, grid: Optional[RadialGrid] = None,
                     truncate: bool = False) -> NormEstimate:
    """
    Weighted norm ‖f‖_{p, dν_λ} with its tail bound

    Args:
        f: Radial profile
        p: Exponent in (0, ∞]; values below 1 give the quasi-norm
        grid: Integration grid, defaults to the profile's own
        truncate: Norm of f·1_{[0, T_max]}, skipping tail certification

    Returns:
        NormEstimate

    Raises:
        UnboundedTailError: The decay class cannot bound the mass beyond T_max
    """
    if not p > 0:
        raise ValueError(f"Exponent must be positive, got {p}")
    if isinstance(f, SpectralProfile) and p == 2 and grid is None and not truncate:
        estimate = _parseval_estimate(f)
        if estimate is not None:
            return estimate

    grid = grid or f.integration_grid()
    _check_grid(f, grid)
    values = f.values_on(grid)

    if np.isinf(p):
        value = _sup_refined(f, grid, values) if values.size else 0.0
        tail = 0.0 if truncate else f.tail_integral(grid, p, values)
        if np.isinf(tail):
            raise UnboundedTailError(f"Cannot bound sup of {f!r} beyond T_max={grid.hi:g}")
        return NormEstimate(value, max(tail - value, 0.0), p, grid.hi, grid.tolerance)

    integral = grid.integrate(np.abs(values) ** p)
    value = integral ** (1.0 / p)
    if truncate:
        return NormEstimate(value, 0.0, p, grid.hi, grid.tolerance)

    tail_mass = f.tail_integral(grid, p, values)
    if np.isinf(tail_mass) or (tail_mass > integral and integral > 0):
        raise UnboundedTailError(
            f"Tail beyond T_max={grid.hi:g} ({tail_mass:.3g}) not controlled for p={p} "
            f"under {f.decay.kind.value} decay"
        )
    tail = (integral + tail_mass) ** (1.0 / p) - value
    logger.debug(f"‖f‖_{p} = {value:.10g} (+{tail:.2e}) on [0, {grid.hi:g}]")
    return NormEstimate(value, tail, p, grid.hi, grid.tolerance)


def _parseval_estimate(f: SpectralProfile) -> Optional[NormEstimate]:
    """‖f‖₂ = ‖H f‖₂, or None when the spectrum beyond R has no certified decay"""
    grid = f.grid
    mass = grid.integrate(f.values ** 2)
    tail_mass = f.spectral_tail_integral(2.0)
    if np.isinf(tail_mass):
        logger.debug(f"spectrum beyond R={grid.hi:g} uncertified, falling back to spatial quadrature")
        return None
    value = float(np.sqrt(mass))
    return NormEstimate(value, float(np.sqrt(mass + tail_mass)) - value, 2.0, f.spatial_extent(), grid.tolerance)


def lp_norm(f: Profile, p: float, grid: Optional[RadialGrid] = None, truncate: bool = False) -> float:
    """‖f‖_{p, dν_λ}; see lp_norm_estimate for the tail handling"""
    return lp_norm_estimate(f, p, grid, truncate).value


def _common_grid(f: Profile, g: Profile) -> RadialGrid:
    a, b = f.integration_grid(), g.integration_grid()
    return a if a.hi >= b.hi else b


def integrate(f: Profile, grid: Optional[RadialGrid] = None) -> float:
    """∫ f dν_λ over the grid"""
    if grid is None:
        if isinstance(f, AnalyticProfile) and f.has_spectrum:
            # H f(0) = ∫ f dν_λ
            return float(f.spectrum(0.0))
        grid = f.integration_grid()
        tail = f.tail_integral(grid, 1.0)
        if np.isinf(tail):
            raise UnboundedTailError(f"{f!r} is not integrable as far as its decay class shows")
    _check_grid(f, grid)
    return grid.integrate(f.values_on(grid))


def inner_product(f: Profile, g: Profile, grid: Optional[RadialGrid] = None) -> float:
    """∫ f g dν_λ; spectral pairs on a shared grid use Parseval"""
    if f.lam != g.lam:
        raise ValueError(f"Profiles live on different measures (λ={f.lam} and λ={g.lam})")
    if grid is None and isinstance(f, SpectralProfile) and isinstance(g, SpectralProfile) and f.grid is g.grid:
        return f.grid.integrate(f.values * g.values)
    grid = grid or _common_grid(f, g)
    _check_grid(f, grid)
    return grid.integrate(f.values_on(grid) * g.values_on(grid))
