import logging
from dataclasses import dataclass
from typing import Dict, Optional, Sequence

import numpy as np
from scipy import special
from scipy.optimize import minimize_scalar

from ..errors import (
    InvalidExponentsError,
    TruncatedLevelSetError,
    UnboundedTailError,
    UnsupportedArgumentError,
)
from ..measure.norms import integrate, lp_norm, lp_norm_estimate
from ..measure.profile import AnalyticProfile, Decay, DecayKind, Profile, SampledProfile, hankel_sum
from ..measure.quadrature import (
    RadialGrid,
    breakpoint_rule,
    default_t_max,
    grid_with_extent,
    make_radial_grid,
)
from ..reports import Contract, InequalityReport
from ..specfun.bessel import IndexLike, as_index
from ..specfun.cutoff import eta0
from .translate import translation_values

logger = logging.getLogger(__name__)

PANEL_WIDTH = 0.25
ORDER = 16
INNER_ORDER = 48
# residual window η₀(x/X) for the multiplier identity
MULTIPLIER_WINDOW = 40.0


@dataclass(frozen=True)
class RieszParams:
    """Order α of the potential I_α on L^p(dν_λ), 0 < α < 2λ+2"""

    alpha: float
    lam: float

    def __post_init__(self):
        lam = float(as_index(self.lam))
        object.__setattr__(self, "lam", lam)
        if not 0.0 < self.alpha < 2.0 * lam + 2.0:
            raise InvalidExponentsError(f"Riesz order must lie in (0, {2.0 * lam + 2.0:g}), got {self.alpha}")

    @property
    def d(self) -> float:
        """d_λ^α = 2^{−λ−1+α} Γ(α/2) / Γ(λ+1−α/2)"""
        lam, alpha = self.lam, self.alpha
        return float(np.exp((alpha - lam - 1.0) * np.log(2.0) + special.gammaln(alpha / 2.0)
                            - special.gammaln(lam + 1.0 - alpha / 2.0)))

    @property
    def far_field_rate(self) -> float:
        """β = 2λ+2−α with I_α f(x) ~ κ x^{−β}"""
        return 2.0 * self.lam + 2.0 - self.alpha

    def conjugate_exponent(self, p: float) -> float:
        """q with 1/q = 1/p − α/(2λ+2), requiring 1 < p < q < ∞"""
        if p <= 1.0:
            raise InvalidExponentsError(f"Hardy–Littlewood–Sobolev needs p > 1, got {p}")
        inverse = 1.0 / p - self.alpha / (2.0 * self.lam + 2.0)
        if inverse <= 0.0:
            raise InvalidExponentsError(f"p={p} too large for α={self.alpha}, λ={self.lam}: 1/q would be {inverse:.4g}")
        return 1.0 / inverse

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "lambda": self.lam, "d": self.d}


def make_riesz(alpha: float, lam: IndexLike) -> RieszParams:
    return RieszParams(float(alpha), float(as_index(lam)))


def _translated(f: Profile, x: np.ndarray, t: np.ndarray, gate: bool) -> np.ndarray:
    if isinstance(f, AnalyticProfile) and f.gaussian_rate is not None:
        return f.translate_closed_form(x, t)
    return translation_values(f, x, t, gate=gate)


def _support_radius(f: Profile) -> float:
    if f.decay.kind is DecayKind.COMPACT:
        return float(f.decay.support)
    return float(f.spatial_extent())


def _window_rule(x: float, reach: float, exponent: float):
    """Rule for ∫ g(t) t^exponent dt over t ∈ [max(0, x − reach), x + reach]"""
    width = min(PANEL_WIDTH, reach / 24.0)
    lo = x - reach
    if lo < width:
        lo = 0.0
    hi = x + reach
    panels = max(1, int(np.ceil((hi - lo) / width)))
    return breakpoint_rule(np.linspace(lo, hi, panels + 1), ORDER, exponent)


def _potential_tail(f: Profile, params: RieszParams, x: float, reach: float) -> float:
    """Mass of b ∫_{x+reach}^∞ |R^t f(x)| t^{α−1} dt from the decay class"""
    kind = f.decay.kind
    if kind in (DecayKind.GAUSSIAN, DecayKind.EXPONENTIAL, DecayKind.COMPACT):
        return 0.0
    if kind in (DecayKind.POLYNOMIAL, DecayKind.BANDLIMITED) and f.decay.rate > params.alpha:
        amplitude = float(np.max(np.abs(f(np.linspace(0.9 * reach, reach, 16)))))
        growth = (1.0 + x / reach) ** max(params.alpha - 1.0, 0.0)
        return f.measure.b * amplitude * reach ** params.alpha * growth / (f.decay.rate - params.alpha)
    raise UnboundedTailError(
        f"Riesz potential of order {params.alpha} needs faster decay than {kind.value} (rate {f.decay.rate})"
    )


def riesz_value(f: Profile, params: RieszParams, x: float, gate: bool = True) -> float:
    """I_α f(x) = (d_λ^α)^{−1} b_λ ∫_0^∞ R^t f(x) t^{α−1} dt"""
    reach = _support_radius(f)
    if reach <= 0.0:
        return 0.0
    nodes, weights = _window_rule(float(x), reach, params.alpha - 1.0)
    values = _translated(f, np.full(nodes.size, float(x)), nodes, gate)
    return f.measure.b * float(weights @ values) / params.d


def riesz_potential(f: Profile, params: RieszParams, x_nodes: Optional[RadialGrid] = None,
                    gate: bool = True) -> SampledProfile:
    """
    Weighted Riesz potential I_α f sampled on a radial grid

    The t-integral runs over the window |t − x| <= reach of f, outside of
    which R^t f(x) is negligible; polynomially decaying f add a tail bound.

    Args:
        f: Profile decaying faster than t^{−α}
        params: Order and index
        x_nodes: Output grid, defaults to the profile's integration grid
        gate: Doubled angular rule gate for quadrature translations

    Returns:
        SampledProfile decaying like x^{−(2λ+2−α)}

    Raises:
        InvalidExponentsError: Index mismatch between f and params
        UnboundedTailError: f decays too slowly
    """
    if params.lam != f.lam:
        raise InvalidExponentsError(f"Riesz parameters are for λ={params.lam}, profile has λ={f.lam}")
    grid = x_nodes or f.integration_grid()
    decay = Decay(DecayKind.POLYNOMIAL, params.far_field_rate)
    reach = _support_radius(f)
    if reach <= 0.0 or (isinstance(f, AnalyticProfile) and f.amplitude == 0.0):
        return SampledProfile(grid, np.zeros(grid.size), decay)

    # raises when the decay class cannot bound the far t-range
    _potential_tail(f, params, float(grid.hi), reach)
    values = np.array([riesz_value(f, params, x, gate) for x in grid.nodes])
    logger.debug(f"I_{params.alpha} f on {grid.size} nodes, λ={params.lam}")
    return SampledProfile(grid, values, decay)


def far_field_coefficient(f: Profile, params: RieszParams) -> float:
    """κ = (∫ f dν_λ) / d_λ^α with I_α f(x) ~ κ x^{−(2λ+2−α)}"""
    return integrate(f) / params.d


def riesz_split(f: Profile, params: RieszParams, x: float, R: float, p: float = 2.0) -> Dict[str, float]:
    """
    I_α f(x) split at t = R into J₁ (by parts) and J₂ (direct tail)

    J₁ = d⁻¹ [R^α H(R) + (2λ+2−α) ∫_0^R t^{α−1} H(t) dt] with
    H(t) = b ∫_0^1 R^{tu} f(x) u^{2λ+1} du the ball average of the
    translate, and J₂ = d⁻¹ b ∫_R^∞ R^t f(x) t^{α−1} dt. The Hölder bound
    d⁻¹ ‖f‖_p ‖t^{α−2λ−2} 1_{t>R}‖_{p'} for |J₂| is reported when finite.

    Returns:
        Dictionary with j1, j2, total, direct and holder_bound
    """
    lam, alpha = params.lam, params.alpha
    b = f.measure.b
    x = float(x)
    u, wu = special.roots_jacobi(INNER_ORDER, 0.0, 2.0 * lam + 1.0)
    u = 0.5 * (1.0 + u)
    wu = wu * 0.5 ** (2.0 * lam + 2.0)

    def ball_average(t: np.ndarray) -> np.ndarray:
        s = np.outer(t, u)
        g = _translated(f, np.full(s.size, x), s.ravel(), True).reshape(s.shape)
        return b * (g @ wu)

    panels = max(1, int(np.ceil(R / PANEL_WIDTH)))
    t_nodes, t_weights = breakpoint_rule(np.linspace(0.0, R, panels + 1), ORDER, alpha - 1.0)
    j1 = (R ** alpha * float(ball_average(np.array([R]))[0])
          + (2.0 * lam + 2.0 - alpha) * float(t_weights @ ball_average(t_nodes))) / params.d

    reach = _support_radius(f)
    hi = max(x + reach, R + PANEL_WIDTH)
    panels = max(1, int(np.ceil((hi - R) / PANEL_WIDTH)))
    s_nodes, s_weights = breakpoint_rule(np.linspace(R, hi, panels + 1), ORDER, alpha - 1.0)
    j2 = b * float(s_weights @ _translated(f, np.full(s_nodes.size, x), s_nodes, True)) / params.d

    holder = float("inf")
    if p > 1.0:
        p_dual = p / (p - 1.0) if np.isfinite(p) else 1.0
        excess = (2.0 * lam + 2.0 - alpha) * p_dual - (2.0 * lam + 2.0)
        if excess > 0:
            kernel_norm = (b * R ** (-excess) / excess) ** (1.0 / p_dual)
            holder = lp_norm(f, p) * kernel_norm / params.d
    direct = riesz_value(f, params, x)
    return {"j1": j1, "j2": j2, "total": j1 + j2, "direct": direct, "holder_bound": holder, "R": R}


def riesz_multiplier_check(f: AnalyticProfile, params: RieszParams, rho: Sequence[float] = None,
                           window: float = MULTIPLIER_WINDOW) -> InequalityReport:
    """
    H(I_α f)(ρ) = ρ^{−α} H(f)(ρ)

    I_α f is split into the model κ(1+x²)^{−β/2}, whose transform is closed,
    and a faster decaying residual transformed by quadrature under the
    window η₀(x/window).

    Raises:
        UnsupportedArgumentError: α >= λ + 3/2, where the model transform diverges
    """
    if not (isinstance(f, AnalyticProfile) and f.has_spectrum):
        raise ValueError("Multiplier identity needs a profile with a closed spectrum")
    if params.alpha >= params.lam + 1.5:
        raise UnsupportedArgumentError(
            f"Far-field model transform needs α < λ + 3/2, got α={params.alpha}, λ={params.lam}"
        )
    rho = np.linspace(0.5, 5.0, 10) if rho is None else np.asarray(rho, dtype=float)
    measure = f.measure
    kappa = far_field_coefficient(f, params)
    half_rate = params.far_field_rate / 2.0
    model = AnalyticProfile("rational", {"beta": half_rate}, measure, amplitude=kappa)

    extent = 2.0 * window
    panels = int(np.ceil(extent / PANEL_WIDTH))
    grid = make_radial_grid(measure, extent, panels, ORDER, certify=False)
    potential = riesz_potential(f, params, grid, gate=False)
    residual = (potential.values - model(grid.nodes)) * eta0(grid.nodes / window)
    transformed = model.spectrum(rho) + hankel_sum(rho, grid, residual)
    expected = rho ** (-params.alpha) * f.spectrum(rho)
    report = InequalityReport.identity("riesz.multiplier", {**params.to_dict(), "family": f.family},
                                       transformed, expected, tolerance=1e-4,
                                       details={"rho": rho.tolist(), "kappa": kappa})
    return report


def _ball_averages(g_values: np.ndarray, weights: np.ndarray, panel_of_node: np.ndarray,
                   edges: np.ndarray, homogeneity: float) -> np.ndarray:
    """(2λ+2)/r^{2λ+2} ∫_0^r g t^{2λ+1} dt at every edge r > 0"""
    per_panel = np.bincount(panel_of_node, weights=weights * g_values, minlength=edges.size - 1)
    cumulative = np.cumsum(per_panel)
    return homogeneity * cumulative / edges[1:] ** homogeneity


def _average_at(f: Profile, x: float, r: float, gate: bool) -> float:
    lam = f.lam
    homogeneity = 2.0 * lam + 2.0
    if r <= 0.0:
        return float(_translated(f, np.array([x]), np.array([0.0]), gate)[0])
    panels = max(1, int(np.ceil(r / PANEL_WIDTH)))
    nodes, weights = breakpoint_rule(np.linspace(0.0, r, panels + 1), ORDER, 2.0 * lam + 1.0)
    values = _translated(f, np.full(nodes.size, x), nodes, gate)
    return homogeneity * float(weights @ values) / r ** homogeneity


def maximal_function(f: Profile, x: float, r_sweep: Optional[Sequence[float]] = None, gate: bool = False) -> float:
    """
    M f(x) = sup_r |∫_0^r R^t f(x) dν_λ(t)| / ν_λ([0, r])

    Averages over the sweep come from one cumulative rule whose panel edges
    contain every sweep radius; the best one is then refined between its
    neighbours.

    Args:
        f: Profile
        x: Point
        r_sweep: Ascending radii, defaults to a geometric sweep up to x + reach

    Returns:
        Maximal function value
    """
    x = float(x)
    reach = max(_support_radius(f), PANEL_WIDTH)
    if r_sweep is None:
        r_sweep = np.geomspace(PANEL_WIDTH / 16.0, x + reach + default_t_max(f.lam), 96)
    r_sweep = np.unique(np.asarray(r_sweep, dtype=float))
    r_sweep = r_sweep[r_sweep > 0]

    edges = [0.0]
    for r in r_sweep:
        gap = r - edges[-1]
        pieces = max(1, int(np.ceil(gap / PANEL_WIDTH)))
        edges.extend(np.linspace(edges[-1], r, pieces + 1)[1:])
    edges = np.asarray(edges)
    nodes, weights = breakpoint_rule(edges, ORDER, 2.0 * f.lam + 1.0)
    panel_of_node = np.repeat(np.arange(edges.size - 1), ORDER)
    values = _translated(f, np.full(nodes.size, x), nodes, gate)
    averages = np.abs(_ball_averages(values, weights, panel_of_node, edges, 2.0 * f.lam + 2.0))

    sweep_index = np.searchsorted(edges[1:], r_sweep)
    at_sweep = averages[sweep_index]
    best = int(np.argmax(at_sweep))
    value = float(at_sweep[best])
    lo = r_sweep[best - 1] if best > 0 else 0.0
    hi = r_sweep[best + 1] if best + 1 < r_sweep.size else r_sweep[best]
    if hi > lo:
        refined = minimize_scalar(lambda r: -abs(_average_at(f, x, r, gate)), bounds=(lo, hi), method="bounded",
                                  options={"xatol": 1e-10 * max(hi, 1.0)})
        if refined.success:
            value = max(value, float(-refined.fun))
    if lo == 0.0:
        value = max(value, abs(_average_at(f, x, 0.0, gate)))
    return value


def maximal_profile(f: Profile, grid: Optional[RadialGrid] = None) -> SampledProfile:
    """M f on the nodes of a grid"""
    grid = grid or f.integration_grid()
    values = np.array([maximal_function(f, x) for x in grid.nodes])
    return SampledProfile(grid, values, Decay(DecayKind.POLYNOMIAL, 2.0 * f.lam + 2.0))


def level_set_measure(grid: RadialGrid, values: np.ndarray, a: float) -> float:
    """
    ν_λ{x : F(x) > a} with linear interpolation of F between nodes

    Raises:
        TruncatedLevelSetError: F exceeds a at the end of the grid
    """
    values = np.asarray(values, dtype=float)
    if values[-1] > a:
        raise TruncatedLevelSetError(f"Level set at a={a:g} reaches the grid end {grid.hi:g}; widen T_max")
    nodes = np.concatenate([[0.0], grid.nodes])
    values = np.concatenate([[values[0]], values])
    above = values > a
    homogeneity = grid.measure.homogeneity
    total = 0.0
    start = 0.0 if above[0] else None
    for i in range(1, nodes.size):
        if above[i] == above[i - 1]:
            continue
        # crossing between nodes i−1 and i
        fraction = (a - values[i - 1]) / (values[i] - values[i - 1])
        crossing = nodes[i - 1] + fraction * (nodes[i] - nodes[i - 1])
        if above[i]:
            start = crossing
        else:
            total += crossing ** homogeneity - start ** homogeneity
            start = None
    return grid.measure.b * total / homogeneity


def hls_check(f: AnalyticProfile, params: RieszParams, p: float,
              dilations: Sequence[float] = (0.5, 1.0, 2.0, 4.0)) -> InequalityReport:
    """
    ‖I_α f‖_q / ‖f‖_p at 1/q = 1/p − α/(2λ+2) across dilates of f

    The ratio is scale free, so it must agree across the dilations; its
    common value is the measured constant.
    """
    q = params.conjugate_exponent(p)
    base = f.integration_grid()
    width = base.panel_width
    ratios = []
    for s in dilations:
        dilated = f.dilate(s)
        grid = grid_with_extent(f.measure, base.hi / s, width / s, certify=False)
        potential = riesz_potential(dilated, params, grid)
        lhs = lp_norm_estimate(potential, q)
        rhs = lp_norm(dilated, p)
        ratios.append(lhs.upper / rhs if rhs > 0 else 0.0)
    reference = ratios[list(dilations).index(1.0)] if 1.0 in dilations else ratios[0]
    params_dict = {**params.to_dict(), "p": p, "q": q, "family": f.family}
    return InequalityReport.identity("riesz.hls", params_dict, ratios, [reference] * len(ratios), tolerance=1e-4,
                                     details={"dilations": list(dilations), "hls_constant": reference})


def weak_type_estimate(f: Profile, functional: str, a_sweep: Sequence[float], params: RieszParams = None,
                       q: Optional[float] = None, grid: Optional[RadialGrid] = None) -> InequalityReport:
    """
    Empirical weak-type constant from grid level sets

    maximal: sup_a a ν{M f > a} / ‖f‖₁
    riesz:   sup_a a^q ν{|I_α f| > a} / ‖f‖₁^q with q = (2λ+2)/(2λ+2−α)

    Raises:
        TruncatedLevelSetError: a level set touches the grid end
    """
    grid = grid or f.integration_grid()
    norm_1 = lp_norm(f, 1.0)
    if functional == "maximal":
        F = maximal_profile(f, grid).values
        power = 1.0
    elif functional == "riesz":
        if params is None:
            raise ValueError("Riesz weak type needs RieszParams")
        power = q if q is not None else (2.0 * params.lam + 2.0) / params.far_field_rate
        F = np.abs(riesz_potential(f, params, grid).values)
    else:
        raise ValueError(f"Unknown functional '{functional}'; expected 'maximal' or 'riesz'")

    a_sweep = [float(a) for a in a_sweep]
    lhs = [a ** power * level_set_measure(grid, F, a) for a in a_sweep]
    rhs = [norm_1 ** power] * len(a_sweep)
    uncertainty = grid.measure.b * grid.panel_width * grid.hi ** (grid.measure.homogeneity - 1.0)
    return InequalityReport.from_sweep(f"riesz.weak_type.{functional}",
                                       {"lambda": f.lam, "functional": functional, "power": power},
                                       lhs, rhs, sweep=a_sweep, contract=Contract.BAND,
                                       details={"panel_uncertainty": uncertainty})


def pointwise_bound_check(f: Profile, params: RieszParams, p: float, x_sample: Sequence[float]) -> InequalityReport:
    """|I_α f(x)| <= C (M f(x))^{p/q} ‖f‖_p^{1−p/q} with one fitted C"""
    q = params.conjugate_exponent(p)
    norm_p = lp_norm(f, p)
    x_sample = [float(x) for x in x_sample]
    lhs = [abs(riesz_value(f, params, x)) for x in x_sample]
    rhs = [maximal_function(f, x) ** (p / q) * norm_p ** (1.0 - p / q) for x in x_sample]
    report = InequalityReport.from_sweep("riesz.pointwise", {**params.to_dict(), "p": p, "q": q}, lhs, rhs,
                                         sweep=x_sample, contract=Contract.BAND)
    report.details["fitted_constant"] = report.ratio_max
    return report


def scaling_covariance_check(f: AnalyticProfile, params: RieszParams, s: float,
                             x_sample: Sequence[float]) -> InequalityReport:
    """I_α(f(s·))(x) = s^{−α} (I_α f)(s x)"""
    x_sample = np.asarray(list(x_sample), dtype=float)
    dilated = f.dilate(s)
    lhs = [riesz_value(dilated, params, x) for x in x_sample]
    rhs = [s ** (-params.alpha) * riesz_value(f, params, s * x) for x in x_sample]
    return InequalityReport.identity("riesz.scaling", {**params.to_dict(), "s": s}, lhs, rhs, tolerance=1e-5,
                                     details={"x": x_sample.tolist()})


def split_check(f: Profile, params: RieszParams, x: float, radii: Sequence[float] = (0.5, 1.0, 2.0)) -> InequalityReport:
    """J₁ + J₂ from the split at R equals the direct potential"""
    splits = [riesz_split(f, params, x, R) for R in radii]
    return InequalityReport.identity("riesz.split", {**params.to_dict(), "x": x},
                                     [s["total"] for s in splits], [s["direct"] for s in splits], tolerance=1e-6,
                                     details={"radii": list(radii), "splits": splits})