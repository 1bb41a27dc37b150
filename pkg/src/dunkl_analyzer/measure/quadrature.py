import logging
from dataclasses import dataclass, field
from functools import lru_cache
from math import ceil
from typing import Tuple

import numpy as np
from scipy import special

from ..errors import InsufficientResolutionError
from ..specfun.bessel import BesselIndex, IndexLike, as_index

logger = logging.getLogger(__name__)

GRID_TOLERANCE_LIMIT = 1.0e-4
ANGULAR_TOLERANCE_LIMIT = 1.0e-10
DEFAULT_PANELS = 48
DEFAULT_ORDER = 16
DEFAULT_ANGULAR_NODES = 64


@dataclass(frozen=True)
class WeightedMeasure:
    """dν_λ(t) = b_λ t^{2λ+1} dt on [0, ∞)"""

    lam: BesselIndex

    def __post_init__(self):
        object.__setattr__(self, "lam", as_index(self.lam))

    @property
    def b(self) -> float:
        # b_λ = 1 / (2^λ Γ(λ+1))
        lam = float(self.lam)
        return float(np.exp(-lam * np.log(2.0) - special.gammaln(lam + 1.0)))

    @property
    def exponent(self) -> float:
        """Power 2λ+1 of the density"""
        return 2.0 * float(self.lam) + 1.0

    @property
    def homogeneity(self) -> float:
        """Dilation degree 2λ+2 of the measure"""
        return 2.0 * float(self.lam) + 2.0

    def ball(self, r: float) -> float:
        """ν_λ([0, r]) = b_λ r^{2λ+2} / (2λ+2)"""
        return self.b * r ** self.homogeneity / self.homogeneity


def make_measure(lam: IndexLike) -> WeightedMeasure:
    return WeightedMeasure(as_index(lam))


@dataclass(frozen=True, eq=False)
class RadialGrid:
    """
    Composite Gauss rule on [lo, hi] for ∫ g(t) t^{2λ+1} dt

    The weights absorb t^{2λ+1} but not b_λ, so Σ w_i g(t_i) b_λ
    approximates ∫ g dν_λ.
    """

    measure: WeightedMeasure
    nodes: np.ndarray
    weights: np.ndarray
    lo: float
    hi: float
    panels: int
    order: int
    tolerance: float = 0.0
    edges: np.ndarray = field(default=None, repr=False)

    @property
    def T_max(self) -> float:
        return self.hi

    @property
    def panel_width(self) -> float:
        return (self.hi - self.lo) / self.panels

    @property
    def size(self) -> int:
        return int(self.nodes.size)

    @property
    def key(self) -> Tuple:
        return (float(self.measure.lam), self.lo, self.hi, self.panels, self.order)

    @property
    def measure_weights(self) -> np.ndarray:
        """Weights including b_λ"""
        return self.measure.b * self.weights

    def integrate(self, values) -> float:
        return float(np.dot(self.measure_weights, values))

    def last_panel(self) -> slice:
        return slice(self.size - self.order, self.size)

    def to_dict(self) -> dict:
        return {
            "lambda": float(self.measure.lam),
            "lo": self.lo,
            "hi": self.hi,
            "panels": self.panels,
            "order": self.order,
        }


def _power_weight_panels(edges: np.ndarray, order: int, exponent: float, singular_start: bool):
    """Nodes and weights of ∫ g(t) t^exponent dt over consecutive panels"""
    x_leg, w_leg = special.roots_legendre(order)
    nodes, weights = [], []
    for i, (a, b) in enumerate(zip(edges[:-1], edges[1:])):
        half = 0.5 * (b - a)
        if i == 0 and singular_start and a == 0.0 and exponent != 0.0:
            # Gauss–Jacobi absorbs t^exponent on the panel touching the origin
            x_jac, w_jac = special.roots_jacobi(order, 0.0, exponent)
            nodes.append(half * (1.0 + x_jac))
            weights.append(w_jac * half ** (exponent + 1.0))
        else:
            t = a + half * (1.0 + x_leg)
            nodes.append(t)
            weights.append(w_leg * half * t ** exponent)
    return np.concatenate(nodes), np.concatenate(weights)


def power_weight_rule(lo: float, hi: float, panels: int, order: int, exponent: float):
    """
    Composite rule for ∫_lo^hi g(t) t^exponent dt, graded at the origin

    Args:
        lo: Left end (>= 0)
        hi: Right end
        panels: Number of equal panels
        order: Gauss points per panel
        exponent: Power of t folded into the weights (> -1)

    Returns:
        Tuple of (nodes, weights)
    """
    edges = np.linspace(lo, hi, panels + 1)
    return _power_weight_panels(edges, order, exponent, singular_start=True)


def breakpoint_rule(breakpoints, order: int, exponent: float):
    """Composite rule on arbitrary ascending breakpoints (first may be 0)"""
    edges = np.asarray(breakpoints, dtype=float)
    return _power_weight_panels(edges, order, exponent, singular_start=True)


def _gaussian_normalization_error(measure: WeightedMeasure, edges: np.ndarray, order: int, certify_tail: bool) -> float:
    lam = float(measure.lam)
    nodes, weights = _power_weight_panels(edges, order, measure.exponent, True)
    nodes2, weights2 = _power_weight_panels(edges, 2 * order, measure.exponent, True)
    q_n = measure.b * np.dot(weights, np.exp(-nodes ** 2 / 2.0))
    q_2n = measure.b * np.dot(weights2, np.exp(-nodes2 ** 2 / 2.0))
    error = abs(q_n - q_2n)
    if certify_tail and edges[0] == 0.0:
        # mass of e^{-t²/2} beyond the grid
        error += float(special.gammaincc(lam + 1.0, edges[-1] ** 2 / 2.0))
    return float(error)


@lru_cache(maxsize=256)
def make_radial_grid(measure: WeightedMeasure, T_max: float, panels: int = DEFAULT_PANELS,
                     order: int = DEFAULT_ORDER, certify: bool = True) -> RadialGrid:
    """
    Composite Gauss–Legendre grid on [0, T_max] for dν_λ

    Args:
        measure: Weighted measure
        T_max: Right end of the grid
        panels: Number of equal panels
        order: Gauss points per panel, 4 <= order <= 64
        certify: Include the Gaussian tail beyond T_max in the tolerance estimate

    Returns:
        RadialGrid with its declared tolerance
    """
    if T_max <= 0:
        raise ValueError(f"T_max must be positive, got {T_max}")
    if panels < 1:
        raise ValueError(f"panels must be >= 1, got {panels}")
    if order < 4 or order > 64:
        raise ValueError(f"order must lie in [4, 64], got {order}")

    edges = np.linspace(0.0, float(T_max), panels + 1)
    nodes, weights = _power_weight_panels(edges, order, measure.exponent, True)
    tolerance = _gaussian_normalization_error(measure, edges, order, certify)
    if tolerance > GRID_TOLERANCE_LIMIT:
        raise InsufficientResolutionError(
            f"Grid on [0, {T_max}] with {panels} panels of order {order} reaches only {tolerance:.2e}"
        )
    logger.debug(f"radial grid λ={float(measure.lam)} T={T_max} panels={panels} order={order} tol={tolerance:.2e}")
    return RadialGrid(measure, nodes, weights, 0.0, float(T_max), panels, order, tolerance, edges)


@lru_cache(maxsize=256)
def make_interval_grid(measure: WeightedMeasure, lo: float, hi: float, panels: int,
                       order: int = DEFAULT_ORDER) -> RadialGrid:
    """Composite grid on [lo, hi] for dν_λ without the Gaussian tail certification"""
    if hi <= lo or lo < 0:
        raise ValueError(f"Invalid interval [{lo}, {hi}]")
    edges = np.linspace(float(lo), float(hi), panels + 1)
    nodes, weights = _power_weight_panels(edges, order, measure.exponent, True)
    tolerance = _gaussian_normalization_error(measure, edges, order, False)
    return RadialGrid(measure, nodes, weights, float(lo), float(hi), panels, order, tolerance, edges)


def default_t_max(lam: IndexLike) -> float:
    return 12.0 + 4.0 * float(as_index(lam))


def default_grid(measure: WeightedMeasure) -> RadialGrid:
    """T_max = 12 + 4λ, 48 panels, order 16"""
    return make_radial_grid(measure, default_t_max(measure.lam), DEFAULT_PANELS, DEFAULT_ORDER)


def grid_with_extent(measure: WeightedMeasure, T_max: float, panel_width: float = None,
                     order: int = DEFAULT_ORDER, certify: bool = True) -> RadialGrid:
    """Grid on [0, T_max] whose panel width does not exceed that of the default grid"""
    if panel_width is None:
        panel_width = default_t_max(measure.lam) / DEFAULT_PANELS
    panels = max(1, int(ceil(round(T_max / panel_width, 9))))
    return make_radial_grid(measure, float(T_max), panels, order, certify)


def refine_grid(grid: RadialGrid) -> RadialGrid:
    """Same interval with twice the panels"""
    if grid.lo == 0.0:
        return make_radial_grid(grid.measure, grid.hi, 2 * grid.panels, grid.order)
    return make_interval_grid(grid.measure, grid.lo, grid.hi, 2 * grid.panels, grid.order)


@dataclass(frozen=True, eq=False)
class AngularRule:
    """Nodes φ_i in (0, π) with weights absorbing c_λ sin^{2λ}φ; weights sum to 1"""

    measure: WeightedMeasure
    phi: np.ndarray
    cos_phi: np.ndarray
    one_minus_cos: np.ndarray
    weights: np.ndarray
    tolerance: float

    @property
    def size(self) -> int:
        return int(self.phi.size)


def angular_constant(lam: float) -> float:
    """c_λ = Γ(λ+1) / (√π Γ(λ+1/2))"""
    return float(np.exp(special.gammaln(lam + 1.0) - 0.5 * np.log(np.pi) - special.gammaln(lam + 0.5)))


@lru_cache(maxsize=64)
def make_angular_rule(measure: WeightedMeasure, M: int = DEFAULT_ANGULAR_NODES) -> AngularRule:
    """
    Gauss–Jacobi rule for c_λ ∫_0^π g(φ) sin^{2λ}φ dφ

    Args:
        measure: Weighted measure (supplies λ)
        M: Number of nodes, M >= 8

    Returns:
        AngularRule; at λ = -1/2 the two-point endpoint rule {0, π}
    """
    if M < 8:
        raise ValueError(f"Angular rule needs M >= 8, got {M}")
    lam = float(measure.lam)

    if measure.lam.is_classical:
        phi = np.array([0.0, np.pi])
        weights = np.array([0.5, 0.5])
        return AngularRule(measure, phi, np.array([1.0, -1.0]), np.array([0.0, 2.0]), weights, 0.0)

    x, w = special.roots_jacobi(M, lam - 0.5, lam - 0.5)
    order = np.argsort(-x)
    x, w = x[order], w[order]
    phi = np.arccos(x)
    weights = angular_constant(lam) * w
    tolerance = abs(float(weights.sum()) - 1.0)
    if tolerance > ANGULAR_TOLERANCE_LIMIT or np.any(weights <= 0):
        raise InsufficientResolutionError(f"Angular rule with M={M} sums to 1 only within {tolerance:.2e}")
    one_minus_cos = 2.0 * np.sin(phi / 2.0) ** 2
    return AngularRule(measure, phi, x, one_minus_cos, weights, tolerance)


def doubled_rule(rule: AngularRule) -> AngularRule:
    """Rule with twice the nodes; the classical endpoint rule is already exact"""
    if rule.measure.lam.is_classical:
        return rule
    return make_angular_rule(rule.measure, 2 * rule.size)
