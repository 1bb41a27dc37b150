import logging
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from ..errors import InsufficientResolutionError, InvalidExponentsError, UnboundedTailError
from ..measure.norms import inner_product, lp_norm, lp_norm_estimate
from ..measure.profile import AnalyticProfile, Decay, DecayKind, Profile, SampledProfile
from ..measure.quadrature import (
    AngularRule,
    RadialGrid,
    doubled_rule,
    grid_with_extent,
    make_angular_rule,
    make_measure,
)
from ..reports import InequalityReport

logger = logging.getLogger(__name__)

GATE_TOLERANCE = 1.0e-8
PAIR_CHUNK = 4096


@dataclass(frozen=True)
class LineFunction:
    """A function on the whole line, not necessarily even"""

    func: Callable
    decay: Decay = field(default_factory=lambda: Decay(DecayKind.NONE))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.asarray(self.func(x), dtype=float)

    @classmethod
    def from_profile(cls, f: Profile) -> "LineFunction":
        """Even extension f(|x|)"""
        return cls(lambda x: f.evaluate(np.abs(x)), f.decay)

    def even_part(self) -> "LineFunction":
        return LineFunction(lambda x: 0.5 * (self.func(x) + self.func(-x)), self.decay)

    def odd_part(self) -> "LineFunction":
        return LineFunction(lambda x: 0.5 * (self.func(x) - self.func(-x)), self.decay)


def _angular(f: Profile, angular: Optional[AngularRule]) -> AngularRule:
    if angular is None:
        return make_angular_rule(f.measure)
    if float(angular.measure.lam) != f.lam:
        raise ValueError(f"Angular rule is built for λ={float(angular.measure.lam)}, profile has λ={f.lam}")
    return angular


def _radius(x: np.ndarray, t: np.ndarray, rule: AngularRule) -> np.ndarray:
    """A = √((x−t)² + 2xt(1−cos φ)) for every node, shape x.shape + (M,)"""
    x = x[..., None]
    t = t[..., None]
    return np.sqrt((x - t) ** 2 + 2.0 * x * t * rule.one_minus_cos)


def _quadrature_values(f: Profile, x: np.ndarray, t: np.ndarray, rule: AngularRule) -> np.ndarray:
    out = np.empty(x.shape)
    flat_x, flat_t, flat_out = x.ravel(), t.ravel(), out.reshape(-1)
    step = max(1, PAIR_CHUNK * 16 // rule.size)
    for start in range(0, flat_x.size, step):
        stop = start + step
        A = _radius(flat_x[start:stop], flat_t[start:stop], rule)
        flat_out[start:stop] = f.evaluate(A.ravel()).reshape(A.shape) @ rule.weights
    return out


def translation_values(f: Profile, x, t, angular: Optional[AngularRule] = None,
                       closed_form: bool = False, gate: bool = True) -> np.ndarray:
    """
    R^t f(x) = c_λ ∫_0^π f(√(x² + t² − 2xt cos φ)) sin^{2λ}φ dφ on arbitrary pairs

    Args:
        f: Radial profile
        x: Radii (broadcast against t)
        t: Translation distances
        angular: Angular rule, defaults to M = 64 nodes
        closed_form: Use e^{-a(x²+t²)} j_λ(2iaxt) for Gaussian profiles
        gate: Compare against the doubled rule and fail above 1e-8

    Returns:
        Array of translated values with the broadcast shape

    Raises:
        InsufficientResolutionError: The doubled angular rule disagrees
        OutOfRangeError: f is sampled and cannot be evaluated that far out
    """
    x, t = np.broadcast_arrays(np.abs(np.asarray(x, dtype=float)), np.abs(np.asarray(t, dtype=float)))
    if closed_form:
        if not (isinstance(f, AnalyticProfile) and f.gaussian_rate is not None):
            raise ValueError("Closed-form translation exists only for Gaussian profiles")
        return f.translate_closed_form(x, t)

    rule = _angular(f, angular)
    values = _quadrature_values(f, x, t, rule)
    if gate and not rule.measure.lam.is_classical:
        check = _quadrature_values(f, x, t, doubled_rule(rule))
        scale = max(float(np.max(np.abs(check))) if check.size else 0.0, 1.0)
        gap = float(np.max(np.abs(check - values))) if check.size else 0.0
        if gap > GATE_TOLERANCE * scale:
            raise InsufficientResolutionError(
                f"Angular rule with M={rule.size} differs from M={2 * rule.size} by {gap:.2e}"
            )
    return values


def _translated_decay(decay: Decay, t: float) -> Decay:
    if decay.kind is DecayKind.COMPACT:
        return Decay(DecayKind.COMPACT, support=decay.support + t)
    return decay


def gegenbauer_translate(f: Profile, t: float, angular: Optional[AngularRule] = None,
                         grid: Optional[RadialGrid] = None, gate: bool = True) -> SampledProfile:
    """
    Generalized translation R^t f sampled on a radial grid

    Args:
        f: Radial profile
        t: Translation distance, >= 0
        angular: Angular rule
        grid: Output grid, defaults to the profile's integration grid
        gate: Doubled-rule accuracy gate

    Returns:
        SampledProfile of R^t f
    """
    if t < 0:
        raise ValueError(f"Translation distance must be >= 0, got {t}")
    grid = grid or f.integration_grid()
    if t == 0.0:
        return SampledProfile(grid, f.values_on(grid), f.decay)
    values = translation_values(f, grid.nodes, np.full(grid.size, float(t)), angular, gate=gate)
    return SampledProfile(grid, values, _translated_decay(f.decay, t))


def dunkl_translate_1d(f: LineFunction, lam, t: float, x: float, angular: Optional[AngularRule] = None) -> float:
    """
    Rank-one translation of a function on the line

    T^t f(x) = c_λ ∫_0^π ½[f(A)(1+B) + f(−A)(1−B)] sin^{2λ}φ dφ
    with A = √(x² + t² − 2xt cos φ) and B = (x − t cos φ)/A.

    Args:
        f: Function on ℝ
        lam: Bessel index
        t: Translation parameter
        x: Point
        angular: Angular rule for λ

    Returns:
        T^t f(x)
    """
    rule = angular or make_angular_rule(make_measure(lam))
    x = float(x)
    t = float(t)
    if x == 0.0 and t == 0.0:
        return float(f(np.array([0.0]))[0])
    A = np.sqrt((x - t) ** 2 + 2.0 * x * t * rule.one_minus_cos)
    with np.errstate(divide="ignore", invalid="ignore"):
        B = np.where(A > 0.0, (x - t * rule.cos_phi) / A, 0.0)
    values = 0.5 * (f(A) * (1.0 + B) + f(-A) * (1.0 - B))
    return float(values @ rule.weights)


def _pair_matrix(f: Profile, grid: RadialGrid, rule: AngularRule) -> np.ndarray:
    """K[i, j] = R^{t_j} f(t_i); symmetric since R^t f(x) = R^x f(t)"""
    n = grid.size
    rows, cols = np.triu_indices(n)
    upper = translation_values(f, grid.nodes[rows], grid.nodes[cols], rule)
    K = np.empty((n, n))
    K[rows, cols] = upper
    K[cols, rows] = upper
    return K


def _convolution_decay(a: Decay, b: Decay) -> Decay:
    if a.kind is DecayKind.GAUSSIAN and b.kind is DecayKind.GAUSSIAN:
        return Decay(DecayKind.GAUSSIAN, a.rate * b.rate / (a.rate + b.rate))
    if a.kind is DecayKind.COMPACT and b.kind is DecayKind.COMPACT:
        return Decay(DecayKind.COMPACT, support=a.support + b.support)
    kinds = {a.kind, b.kind}
    if DecayKind.NONE in kinds:
        return Decay(DecayKind.NONE)
    if kinds <= {DecayKind.GAUSSIAN, DecayKind.EXPONENTIAL, DecayKind.COMPACT}:
        rates = [d.rate for d in (a, b) if d.kind is DecayKind.EXPONENTIAL]
        if rates:
            return Decay(DecayKind.EXPONENTIAL, min(rates))
        # compact against Gaussian keeps Gaussian decay at the slower rate
        return Decay(DecayKind.GAUSSIAN, min(d.rate for d in (a, b) if d.kind is DecayKind.GAUSSIAN) / 2.0)
    rates = [d.rate for d in (a, b) if d.kind in (DecayKind.POLYNOMIAL, DecayKind.BANDLIMITED)]
    return Decay(DecayKind.POLYNOMIAL, min(rates))


def convolve(f: Profile, g: Profile, grid: Optional[RadialGrid] = None,
             angular: Optional[AngularRule] = None) -> SampledProfile:
    """
    (f ∗ g)(x) = ∫ R^t f(x) g(t) dν_λ(t) on the nodes of one grid

    x and t share the grid so the translated values R^{t_j} f(t_i) are
    computed once per unordered node pair.

    Args:
        f: Bounded radial profile
        g: Integrable radial profile
        grid: Common x/t grid; defaults to the larger integration grid

    Returns:
        SampledProfile of f ∗ g

    Raises:
        UnboundedTailError: g has no certified L¹ tail
    """
    if f.lam != g.lam:
        raise ValueError(f"Profiles live on different measures (λ={f.lam} and λ={g.lam})")
    if grid is None:
        a, b = f.integration_grid(), g.integration_grid()
        grid = a if a.hi >= b.hi else b
    g_values = g.values_on(grid)
    tail = g.tail_integral(grid, 1.0, g_values)
    if np.isinf(tail):
        raise UnboundedTailError(f"Convolution needs g in L¹; {g.decay.kind.value} tail is not certified")

    decay = _convolution_decay(f.decay, g.decay)
    if not np.any(g_values):
        return SampledProfile(grid, np.zeros(grid.size), decay)
    rule = _angular(f, angular)
    K = _pair_matrix(f, grid, rule)
    values = K @ (grid.measure_weights * g_values)
    logger.debug(f"convolution on {grid.size} nodes, dropped g-tail mass {tail:.2e}")
    return SampledProfile(grid, values, decay)


def young_exponent(p: float, q: float) -> float:
    """r with 1/r = 1/p + 1/q − 1"""
    if p < 1 or q < 1:
        raise InvalidExponentsError(f"Young exponents need p, q >= 1, got p={p}, q={q}")
    inverse = 1.0 / p + 1.0 / q - 1.0
    if inverse < -1e-15:
        raise InvalidExponentsError(f"1/p + 1/q must be >= 1, got {1.0 / p + 1.0 / q:.6g}")
    return float("inf") if inverse <= 1e-15 else 1.0 / inverse


def young_check(f: Profile, g: Profile, p: float, q: float, grid: Optional[RadialGrid] = None) -> InequalityReport:
    """‖f ∗ g‖_r <= ‖f‖_p ‖g‖_q"""
    r = young_exponent(p, q)
    conv = convolve(f, g, grid)
    lhs = lp_norm_estimate(conv, r)
    norm_f = lp_norm_estimate(f, p)
    norm_g = lp_norm_estimate(g, q)
    rhs = norm_f.value * norm_g.value
    tail_error = lhs.tail / max(rhs, 1e-300)
    params = {"lambda": f.lam, "p": p, "q": q, "r": r}
    return InequalityReport.from_sweep("convolve.young", params, [lhs.value], [rhs],
                                       tolerance=1e-6, tail_error=tail_error, quadrature_error=conv.grid.tolerance)


def contraction_check(f: Profile, t_sweep: Sequence[float], p: float, angular: Optional[AngularRule] = None,
                      grid: Optional[RadialGrid] = None) -> InequalityReport:
    """‖R^t f‖_p <= ‖f‖_p over a sweep of t"""
    base = lp_norm(f, p)
    if grid is None:
        extent = f.integration_grid().hi + max(t_sweep)
        grid = grid_with_extent(f.measure, extent)
    lhs = [lp_norm(gegenbauer_translate(f, t, angular, grid), p) for t in t_sweep]
    return InequalityReport.from_sweep("translate.contraction", {"lambda": f.lam, "p": p}, lhs,
                                       [base] * len(lhs), sweep=list(t_sweep), tolerance=1e-6)


def mass_check(f: Profile, t: float, angular: Optional[AngularRule] = None) -> InequalityReport:
    """∫ R^t f dν = ∫ f dν"""
    grid = grid_with_extent(f.measure, f.integration_grid().hi + t)
    translated = gegenbauer_translate(f, t, angular, grid)
    moved = grid.integrate(translated.values)
    original = grid.integrate(f.values_on(grid))
    absolute = grid.integrate(np.abs(f.values_on(grid)))
    return InequalityReport.identity("translate.mass", {"lambda": f.lam, "t": t}, [moved], [original],
                                     tolerance=1e-7, floor=absolute)


def dual_norm_check(f: Profile, p: float, x_sample: Sequence[float], angular: Optional[AngularRule] = None,
                    grid: Optional[RadialGrid] = None) -> InequalityReport:
    """‖R^· f(x)‖_{p, dν(t)} <= ‖f‖_p for fixed x"""
    base = lp_norm(f, p)
    x_sample = list(x_sample)
    if grid is None:
        grid = grid_with_extent(f.measure, f.integration_grid().hi + max(x_sample))
    lhs = []
    for x in x_sample:
        column = translation_values(f, np.full(grid.size, float(x)), grid.nodes, angular)
        lhs.append(lp_norm(SampledProfile(grid, column, _translated_decay(f.decay, x)), p))
    return InequalityReport.from_sweep("translate.dual_norm", {"lambda": f.lam, "p": p}, lhs,
                                       [base] * len(lhs), sweep=x_sample, tolerance=1e-6)


def self_adjoint_check(f: Profile, g: Profile, t: float, angular: Optional[AngularRule] = None) -> InequalityReport:
    """∫ (R^t f) g dν = ∫ f (R^t g) dν"""
    a, b = f.integration_grid(), g.integration_grid()
    grid = grid_with_extent(f.measure, max(a.hi, b.hi) + t)
    left = inner_product(gegenbauer_translate(f, t, angular, grid), g, grid)
    right = inner_product(f, gegenbauer_translate(g, t, angular, grid), grid)
    floor = grid.integrate(np.abs(f.values_on(grid) * g.values_on(grid)))
    return InequalityReport.identity("translate.self_adjoint", {"lambda": f.lam, "t": t}, [left], [right],
                                     tolerance=1e-7, floor=floor)


def rank_one_consistency_check(f: Profile, t: float, x_sample: Sequence[float],
                               angular: Optional[AngularRule] = None) -> InequalityReport:
    """½(T^t f(x) + T^t f(−x)) = R^t f(|x|) for even f"""
    rule = _angular(f, angular)
    line = LineFunction.from_profile(f)
    x_sample = np.asarray(list(x_sample), dtype=float)
    averaged = [0.5 * (dunkl_translate_1d(line, f.lam, t, x, rule) + dunkl_translate_1d(line, f.lam, t, -x, rule))
                for x in x_sample]
    radial = translation_values(f, np.abs(x_sample), np.full(x_sample.size, float(t)), rule)
    return InequalityReport.identity("translate.rank_one", {"lambda": f.lam, "t": t}, averaged, radial,
                                     tolerance=1e-8, details={"x": x_sample.tolist()})


def positivity_margin(f: Profile, t: float, angular: Optional[AngularRule] = None,
                      grid: Optional[RadialGrid] = None) -> float:
    """Smallest value of R^t f on the grid"""
    return float(np.min(gegenbauer_translate(f, t, angular, grid).values))
