"""
Check catalogue of the suite

Every entry maps a check id to a module-level function of the suite
configuration returning a list of reports. Instances that raise a toolkit
error become failed reports carrying the error, so one bad parameter
combination never hides the rest of an entry.
"""
import logging
from typing import Callable, Dict, List, Sequence

import numpy as np

from ..approx.best import vallee_poussin
from ..approx.checks import (
    bandlimited_modulus_check,
    derivative_inverse_check,
    difference_bound_check,
    difference_k_equivalence_check,
    equivalence_check,
    inverse_check,
    jackson_check,
    k_functional_lipschitz_check,
    k_scaling_check,
    marchaud_check,
    modulus_monotone_check,
    modulus_order_check,
    realization_bruteforce_check,
    saturation_report,
    vallee_poussin_error_check,
    vallee_poussin_reproduction_check,
)
from ..approx.differences import DifferenceScheme, path_equivalence_check
from ..eft.inequalities import (
    bernstein_check,
    bernstein_nikolskii_check,
    nikolskii_check,
    stechkin_boas_check,
)
from ..eft.lattice import build_sequence, make_lattice, verify_sequence
from ..eft.sampling import pp_boas_check, pp_boas_stability_check, sinc_power
from ..eft.weights import make_weight, unit_weight, weight_bridge_check
from ..errors import DunklAnalyzerError, SequenceConstructionError, TypeTooLargeError
from ..measure.norms import lp_norm
from ..measure.profile import AnalyticProfile, Decay, DecayKind, SampledProfile, gaussian
from ..measure.quadrature import make_angular_rule, make_measure, make_radial_grid
from ..reports import Contract, InequalityReport, Verdict
from ..specfun.bessel import bessel_decay_constant, bessel_j
from ..specfun.kernels import MultiplierKernel, Scheme, coefficient_identity_check, multiplier_zero_order
from ..specfun.omega import omega_comparability
from ..transforms.hankel import cutoff_multiplier_decay, hankel_transform, to_spectral
from ..transforms.riesz import (
    hls_check,
    make_riesz,
    pointwise_bound_check,
    riesz_multiplier_check,
    scaling_covariance_check,
    split_check,
    weak_type_estimate,
)
from ..transforms.translate import (
    contraction_check,
    dual_norm_check,
    gegenbauer_translate,
    mass_check,
    positivity_margin,
    rank_one_consistency_check,
    self_adjoint_check,
    translation_values,
    young_check,
)
from .config import SuiteConfig

logger = logging.getLogger(__name__)

# (p, q) pairs with 1/p + 1/q >= 1
YOUNG_PAIRS = [
    (1.0, 1.0), (1.0, 2.0), (2.0, 1.0), (1.0, 4.0), (4.0, 1.0), (1.0, float("inf")),
    (float("inf"), 1.0), (2.0, 2.0), (4.0 / 3.0, 4.0 / 3.0), (1.5, 1.5), (2.0, 4.0 / 3.0), (4.0 / 3.0, 2.0),
]
# (λ, α) with α < λ + 3/2
RIESZ_PAIRS = [
    (0.0, 0.5), (0.0, 1.0), (0.0, 1.25),
    (0.5, 0.5), (0.5, 1.0), (0.5, 1.5),
    (1.0, 0.5), (1.0, 1.5), (1.0, 2.0),
]
# (λ, p, q) for the extremizer of order NIKOLSKII_ORDER
NIKOLSKII_TRIPLES = [
    (0.0, 1.0, 2.0), (0.0, 2.0, float("inf")), (0.5, 1.0, float("inf")),
    (0.5, 2.0, 4.0), (1.0, 1.0, 2.0), (1.0, 2.0, float("inf")),
]
NIKOLSKII_ORDER = 3
HLS_EXPONENT = 1.5
STECHKIN_PAIRS = [(0.5, 0.25), (0.4, 0.1), (0.25, 0.25)]
WEAK_TYPE_LEVELS = [0.05, 0.1, 0.2, 0.4]
POSITIVITY_FLOOR = 1.0e-12
ZERO_ORDER_TOLERANCE = 0.05
PPB_THETA = 0.4
NYQUIST_THETA = 0.5
SEQUENCE_WINDOW = 50
CHEAP_SEQUENCE_WINDOW = 12
# members the default angular rule translates within the 1e-8 gate
TRANSLATION_MEMBERS = ("gaussian", "gaussian_moment", "bump")


def analytic_battery(lam: float) -> Dict[str, AnalyticProfile]:
    """Seven analytic members with closed spectra where they exist"""
    measure = make_measure(lam)
    return {
        "gaussian": gaussian(measure),
        "gaussian_narrow": gaussian(measure, 2.0),
        "gaussian_moment": AnalyticProfile("gaussian_moment", {"n": 1, "a": 0.5}, measure),
        "exponential": AnalyticProfile("exponential", {"a": 1.0}, measure),
        "rational": AnalyticProfile("rational", {"beta": lam + 2.0}, measure),
        "plateau": AnalyticProfile("plateau", {"radius": 2.0}, measure),
        "bump": AnalyticProfile("bump", {"radius": 4.0, "k": 12}, measure),
    }


def _members(lam: float, names: Sequence[str]) -> List[AnalyticProfile]:
    battery = analytic_battery(lam)
    return [battery[name] for name in names]


def failure_report(check_id: str, params: dict, error: Exception) -> InequalityReport:
    """Failed report standing in for an instance that raised"""
    nan = float("nan")
    return InequalityReport(check_id, params, nan, nan, nan, verdict=Verdict.FAIL,
                            notes=[f"{type(error).__name__}: {error}"])


def _guarded(check_id: str, params: dict, check: Callable, *args, **kwargs) -> InequalityReport:
    try:
        return check(*args, **kwargs)
    except DunklAnalyzerError as e:
        logger.error(f"{check_id} {params}: {e}")
        return failure_report(check_id, params, e)


def _grid(config: SuiteConfig, lam: float, T_max: float = None):
    grid = config.get_grid()
    T_max = config.t_max(lam) if T_max is None else T_max
    panels = max(1, int(np.ceil(grid["panels"] * T_max / config.t_max(lam))))
    return make_radial_grid(make_measure(lam), float(T_max), panels, grid["order"])


def _angular(config: SuiteConfig, lam: float):
    return make_angular_rule(make_measure(lam), config.get_config()["angular_nodes"])


def _nonnegativity_report(check_id: str, params: dict, minimum: float, scale: float,
                          tolerance: float = POSITIVITY_FLOOR) -> InequalityReport:
    """ratio = 1 + negative part of the minimum relative to scale"""
    deficit = max(0.0, -minimum) / max(scale, 1e-300)
    return InequalityReport(check_id, params, minimum, 0.0, 1.0 + deficit, tolerance=tolerance,
                            details={"minimum": minimum, "scale": scale})


# ---------------------------------------------------------------------------
# specfun


def bessel_bound_checks(config: SuiteConfig) -> List[InequalityReport]:
    """|j_λ(t)| <= 1 on a fine grid"""
    t = np.linspace(0.0, 200.0, 20001)
    reports = []
    for lam in config.get_lambdas():
        peak = float(np.max(np.abs(bessel_j(lam, t))))
        reports.append(InequalityReport("specfun.bessel_bound", {"lambda": lam}, peak, 1.0, peak,
                                        tolerance=1e-12))
    return reports


def bessel_decay_checks(config: SuiteConfig) -> List[InequalityReport]:
    reports = []
    for lam in config.get_lambdas():
        for n in (0, 1, 2):
            params = {"lambda": lam, "n": n}
            try:
                constant = bessel_decay_constant(lam, n)
            except DunklAnalyzerError as e:
                reports.append(failure_report("specfun.bessel_decay", params, e))
                continue
            reports.append(InequalityReport("specfun.bessel_decay", params, constant, 1.0, constant,
                                            contract=Contract.BAND))
    return reports


def kernel_positivity_checks(config: SuiteConfig) -> List[InequalityReport]:
    """j**_{λ,m} >= 0 on 10⁴ points"""
    t = np.linspace(0.0, 100.0, 10000)
    reports = []
    for lam in config.get_lambdas():
        for m in range(1, 9):
            values = MultiplierKernel(Scheme.SYMMETRIC, m, lam)(t)
            reports.append(_nonnegativity_report("specfun.kernel_positivity", {"lambda": lam, "m": m},
                                                 float(np.min(values)), float(np.max(np.abs(values)))))
    return reports


def zero_order_checks(config: SuiteConfig) -> List[InequalityReport]:
    reports = []
    for lam in config.get_lambdas():
        for scheme in Scheme:
            for m in range(1, 5):
                kernel = MultiplierKernel(scheme, m, lam)
                params = {"lambda": lam, "scheme": scheme.value, "m": m}
                try:
                    fitted = multiplier_zero_order(kernel)
                except DunklAnalyzerError as e:
                    reports.append(failure_report("specfun.zero_order", params, e))
                    continue
                expected = float(kernel.zero_order)
                reports.append(InequalityReport("specfun.zero_order", params, fitted, expected,
                                                1.0 + abs(fitted - expected), tolerance=ZERO_ORDER_TOLERANCE,
                                                contract=Contract.EXACT))
    return reports


def coefficient_checks(config: SuiteConfig) -> List[InequalityReport]:
    reports = []
    for m in range(1, 21):
        holds = 1.0 if coefficient_identity_check(m) else 0.0
        reports.append(InequalityReport.identity("specfun.coefficients", {"m": m}, [holds], [1.0], tolerance=0.0))
    return reports


def omega_checks(config: SuiteConfig) -> List[InequalityReport]:
    """Comparability of ω_γ with its model powers near 0 and at infinity"""
    reports = []
    for gamma in config.get_sweep("gamma"):
        try:
            constants = omega_comparability(gamma)
        except DunklAnalyzerError as e:
            reports.append(failure_report("specfun.omega", {"gamma": gamma}, e))
            continue
        for region in ("near", "far"):
            lo, hi = constants[f"{region}_min"], constants[f"{region}_max"]
            reports.append(InequalityReport("specfun.omega", {"gamma": gamma, "region": region}, hi, 1.0, hi,
                                            ratio_min=lo, ratio_max=hi, contract=Contract.BAND))
    return reports


# ---------------------------------------------------------------------------
# transform


def fixed_point_checks(config: SuiteConfig) -> List[InequalityReport]:
    """H_λ(e^{−t²/2}) = e^{−r²/2} through quadrature on sampled values"""
    reports = []
    for lam in config.get_lambdas():
        measure = make_measure(lam)
        grid = _grid(config, lam)
        sampled = SampledProfile(grid, gaussian(measure).values_on(grid), Decay(DecayKind.GAUSSIAN, 0.5))
        out_grid = make_radial_grid(measure, 8.0, 32, 16, certify=False)
        params = {"lambda": lam}
        try:
            transformed = hankel_transform(sampled, out_grid)
        except DunklAnalyzerError as e:
            reports.append(failure_report("transform.fixed_point", params, e))
            continue
        reports.append(InequalityReport.identity("transform.fixed_point", params, transformed.values,
                                                 np.exp(-out_grid.nodes ** 2 / 2.0), tolerance=1e-8))
    return reports


def _unitarity(f: AnalyticProfile) -> InequalityReport:
    F = to_spectral(f)
    spectral = float(np.sqrt(F.grid.integrate(F.values ** 2)))
    return InequalityReport.identity("transform.unitarity", {"lambda": f.lam, "profile": f.family},
                                     [spectral], [lp_norm(f, 2.0)], tolerance=1e-6)


def _involution(f: AnalyticProfile) -> InequalityReport:
    x = np.linspace(0.0, 4.0, 17)
    F = to_spectral(f)
    return InequalityReport.identity("transform.involution", {"lambda": f.lam, "profile": f.family},
                                     F(x), f(x), tolerance=1e-6, details={"x": x.tolist()})


def unitarity_checks(config: SuiteConfig) -> List[InequalityReport]:
    return [_guarded("transform.unitarity", {"lambda": f.lam, "profile": f.family}, _unitarity, f)
            for lam in config.get_lambdas() for f in analytic_battery(lam).values()]


def involution_checks(config: SuiteConfig) -> List[InequalityReport]:
    return [_guarded("transform.involution", {"lambda": f.lam, "profile": f.family}, _involution, f)
            for lam in config.get_lambdas() for f in analytic_battery(lam).values()]


def cutoff_decay_checks(config: SuiteConfig) -> List[InequalityReport]:
    """Kernel of the smooth cutoff decays faster than the measure grows"""
    reports = []
    for lam in config.get_lambdas():
        result = cutoff_multiplier_decay(lam)
        exponent, required = result["exponent"], result["required"]
        ratio = required / exponent if np.isfinite(exponent) and exponent > 0 else 0.0
        verdict = Verdict.PASS if result["integrable"] else Verdict.FAIL
        reports.append(InequalityReport("transform.cutoff_decay", {"lambda": lam}, required, exponent, ratio,
                                        verdict=verdict, details=result))
    return reports


# ---------------------------------------------------------------------------
# translate and convolve


def contraction_checks(config: SuiteConfig) -> List[InequalityReport]:
    reports = []
    t_sweep = config.get_sweep("t")
    for lam in config.get_lambdas():
        angular = _angular(config, lam)
        for f in _members(lam, TRANSLATION_MEMBERS):
            for p in config.get_sweep("p"):
                params = {"lambda": lam, "p": p, "profile": f.family}
                reports.append(_guarded("translate.contraction", params, contraction_check, f, t_sweep, p, angular))
    return reports


def mass_checks(config: SuiteConfig) -> List[InequalityReport]:
    reports = []
    for lam in config.get_lambdas():
        angular = _angular(config, lam)
        for f in _members(lam, ("gaussian", "bump")):
            for t in config.get_sweep("t"):
                reports.append(_guarded("translate.mass", {"lambda": lam, "t": t}, mass_check, f, t, angular))
    return reports


def positivity_checks(config: SuiteConfig) -> List[InequalityReport]:
    """R^t f >= 0 for nonnegative f"""
    reports = []
    for lam in config.get_lambdas():
        angular = _angular(config, lam)
        for f in _members(lam, TRANSLATION_MEMBERS):
            scale = float(np.max(np.abs(f.values_on(f.integration_grid()))))
            for t in config.get_sweep("t"):
                params = {"lambda": lam, "t": t, "profile": f.family}
                try:
                    margin = positivity_margin(f, t, angular)
                except DunklAnalyzerError as e:
                    reports.append(failure_report("translate.positivity", params, e))
                    continue
                reports.append(_nonnegativity_report("translate.positivity", params, margin, scale))
    return reports


def gaussian_closed_form_checks(config: SuiteConfig) -> List[InequalityReport]:
    """Angular quadrature of R^t against e^{−a(x²+t²)} j_λ(2iaxt)"""
    x, t = np.meshgrid(np.linspace(0.0, 5.0, 11), np.linspace(0.0, 5.0, 11))
    reports = []
    for lam in config.get_lambdas():
        g = gaussian(make_measure(lam))
        params = {"lambda": lam}
        try:
            quadrature = translation_values(g, x, t, _angular(config, lam))
        except DunklAnalyzerError as e:
            reports.append(failure_report("translate.gaussian_closed_form", params, e))
            continue
        closed = translation_values(g, x, t, closed_form=True)
        reports.append(InequalityReport.identity("translate.gaussian_closed_form", params, quadrature.ravel(),
                                                 closed.ravel(), tolerance=1e-8))
    return reports


def _spectral_identity(g: AnalyticProfile, t: float, config: SuiteConfig) -> InequalityReport:
    lam = g.lam
    grid = _grid(config, lam, g.integration_grid().hi + t)
    translated = gegenbauer_translate(g, t, _angular(config, lam), grid)
    out_grid = make_radial_grid(g.measure, 6.0, 24, 16, certify=False)
    transformed = hankel_transform(translated, out_grid)
    expected = bessel_j(lam, t * out_grid.nodes) * g.spectrum(out_grid.nodes)
    return InequalityReport.identity("translate.spectral", {"lambda": lam, "t": t}, transformed.values, expected,
                                     tolerance=1e-6)


def spectral_identity_checks(config: SuiteConfig) -> List[InequalityReport]:
    """H(R^t f)(ρ) = j_λ(tρ) H(f)(ρ)"""
    reports = []
    for lam in config.get_lambdas():
        g = gaussian(make_measure(lam))
        for t in config.get_sweep("t"):
            reports.append(_guarded("translate.spectral", {"lambda": lam, "t": t}, _spectral_identity, g, t, config))
    return reports


def _support_growth(f: AnalyticProfile, t: float, config: SuiteConfig) -> InequalityReport:
    radius = f.decay.support
    grid = _grid(config, f.lam, radius + t + 2.0)
    translated = gegenbauer_translate(f, t, _angular(config, f.lam), grid)
    outside = grid.nodes > radius + t + grid.panel_width
    leak = float(np.max(np.abs(translated.values[outside]))) if np.any(outside) else 0.0
    peak = float(np.max(np.abs(f.values_on(grid))))
    return InequalityReport.identity("translate.support", {"lambda": f.lam, "t": t, "radius": radius},
                                     [leak], [0.0], tolerance=1e-12, floor=peak)


def support_checks(config: SuiteConfig) -> List[InequalityReport]:
    """supp R^t f stays within supp f + t up to one panel"""
    reports = []
    for lam in config.get_lambdas():
        f = analytic_battery(lam)["bump"]
        for t in config.get_sweep("t"):
            reports.append(_guarded("translate.support", {"lambda": lam, "t": t}, _support_growth, f, t, config))
    return reports


def dual_norm_checks(config: SuiteConfig) -> List[InequalityReport]:
    reports = []
    x_sample = config.get_sweep("x")
    for lam in config.get_lambdas():
        angular = _angular(config, lam)
        f = gaussian(make_measure(lam))
        for p in config.get_sweep("p"):
            reports.append(_guarded("translate.dual_norm", {"lambda": lam, "p": p}, dual_norm_check, f, p,
                                    x_sample, angular))
    return reports


def self_adjoint_checks(config: SuiteConfig) -> List[InequalityReport]:
    reports = []
    for lam in config.get_lambdas():
        f, g = _members(lam, ("gaussian", "bump"))
        angular = _angular(config, lam)
        for t in config.get_sweep("t"):
            reports.append(_guarded("translate.self_adjoint", {"lambda": lam, "t": t}, self_adjoint_check, f, g, t,
                                    angular))
    return reports


def rank_one_checks(config: SuiteConfig) -> List[InequalityReport]:
    """Even part of the rank-one Dunkl translation against R^t"""
    reports = []
    x_sample = config.get_sweep("x")
    for lam in config.get_lambdas():
        f = gaussian(make_measure(lam))
        angular = _angular(config, lam)
        for t in (0.5, 1.0, 2.0):
            reports.append(_guarded("translate.rank_one", {"lambda": lam, "t": t}, rank_one_consistency_check, f, t,
                                    x_sample, angular))
    return reports


def young_checks(config: SuiteConfig) -> List[InequalityReport]:
    reports = []
    for lam in config.get_lambdas():
        battery = analytic_battery(lam)
        pairs = [("gaussian", "gaussian"), ("gaussian", "rational"), ("bump", "gaussian"),
                 ("gaussian_moment", "rational")]
        for left, right in pairs:
            for p, q in YOUNG_PAIRS:
                params = {"lambda": lam, "p": p, "q": q, "f": left, "g": right}
                reports.append(_guarded("convolve.young", params, young_check, battery[left], battery[right], p, q))
    return reports


# ---------------------------------------------------------------------------
# riesz


def _riesz_instances(config: SuiteConfig):
    for lam, alpha in RIESZ_PAIRS:
        yield gaussian(make_measure(lam)), make_riesz(alpha, lam)


def riesz_multiplier_checks(config: SuiteConfig) -> List[InequalityReport]:
    rho = config.get_sweep("rho")
    return [_guarded("riesz.multiplier", params.to_dict(), riesz_multiplier_check, f, params, rho)
            for f, params in _riesz_instances(config)]


def riesz_scaling_checks(config: SuiteConfig) -> List[InequalityReport]:
    x_sample = config.get_sweep("x")
    return [_guarded("riesz.scaling", params.to_dict(), scaling_covariance_check, f, params, 2.0, x_sample)
            for f, params in _riesz_instances(config)]


def riesz_split_checks(config: SuiteConfig) -> List[InequalityReport]:
    return [_guarded("riesz.split", params.to_dict(), split_check, f, params, 1.0)
            for f, params in _riesz_instances(config)]


def hls_checks(config: SuiteConfig) -> List[InequalityReport]:
    return [_guarded("riesz.hls", params.to_dict(), hls_check, f, params, HLS_EXPONENT)
            for f, params in _riesz_instances(config)]


def pointwise_checks(config: SuiteConfig) -> List[InequalityReport]:
    x_sample = config.get_sweep("x")
    return [_guarded("riesz.pointwise", params.to_dict(), pointwise_bound_check, f, params, HLS_EXPONENT, x_sample)
            for f, params in _riesz_instances(config)]


def maximal_weak_type_checks(config: SuiteConfig) -> List[InequalityReport]:
    reports = []
    for lam in config.get_lambdas():
        f = gaussian(make_measure(lam))
        reports.append(_guarded("riesz.weak_type.maximal", {"lambda": lam}, weak_type_estimate, f, "maximal",
                                WEAK_TYPE_LEVELS))
    return reports


# ---------------------------------------------------------------------------
# modulus and kfunctional


def _modulus_members(lam: float) -> List[AnalyticProfile]:
    return _members(lam, ("gaussian", "exponential"))


def _schemes(orders: Sequence[int] = (1, 2)) -> List[DifferenceScheme]:
    return [DifferenceScheme(scheme, m) for scheme in Scheme for m in orders]


def path_equivalence_checks(config: SuiteConfig) -> List[InequalityReport]:
    reports = []
    for lam in config.get_lambdas():
        f = gaussian(make_measure(lam))
        for scheme in _schemes():
            if scheme.scheme is Scheme.ITERATED:
                continue
            params = {"lambda": lam, "scheme": scheme.scheme.value, "m": scheme.m, "t": 0.5}
            reports.append(_guarded("modulus.path_equivalence", params, path_equivalence_check, f, scheme, 0.5))
    return reports


def difference_bound_checks(config: SuiteConfig) -> List[InequalityReport]:
    reports = []
    t_sweep = config.get_sweep("delta")
    for lam in config.get_lambdas():
        for f in _modulus_members(lam):
            for scheme in _schemes():
                for p in (2.0, float("inf")):
                    params = {"lambda": lam, "profile": f.family, "scheme": scheme.label, "p": p}
                    reports.append(_guarded("modulus.bound", params, difference_bound_check, f, scheme, t_sweep, p))
    return reports


def modulus_order_checks(config: SuiteConfig) -> List[InequalityReport]:
    reports = []
    deltas = config.get_sweep("delta")
    for lam in config.get_lambdas():
        for f in _modulus_members(lam):
            for scheme in Scheme:
                params = {"lambda": lam, "profile": f.family, "scheme": scheme.value}
                reports.append(_guarded("modulus.order", params, modulus_order_check, f, scheme, 1, 1, deltas, 2.0))
    return reports


def modulus_monotone_checks(config: SuiteConfig) -> List[InequalityReport]:
    reports = []
    deltas = config.get_sweep("delta")
    for lam in config.get_lambdas():
        for f in _modulus_members(lam):
            for scheme in _schemes():
                params = {"lambda": lam, "profile": f.family, "scheme": scheme.label}
                reports.append(_guarded("modulus.monotone", params, modulus_monotone_check, f, scheme, deltas, 2.0))
    return reports


def bandlimited_modulus_checks(config: SuiteConfig) -> List[InequalityReport]:
    reports = []
    deltas = config.get_sweep("delta")
    for lam in config.get_lambdas():
        g = vallee_poussin(gaussian(make_measure(lam)), 2.0)
        for scheme in Scheme:
            for p in (2.0, float("inf")):
                params = {"lambda": lam, "scheme": scheme.value, "p": p}
                reports.append(_guarded("modulus.bandlimited", params, bandlimited_modulus_check, g, deltas,
                                        scheme, 1, p))
    return reports


def equivalence_checks(config: SuiteConfig) -> List[InequalityReport]:
    reports = []
    deltas = config.get_sweep("delta")
    for lam in config.get_lambdas():
        for f in analytic_battery(lam).values():
            for r in (1, 2):
                for p in (2.0, float("inf")):
                    params = {"lambda": lam, "profile": f.family, "r": r, "p": p}
                    reports.append(_guarded("kfunctional.equivalence", params, equivalence_check, f, deltas, r, p))
    return reports


def saturation_checks(config: SuiteConfig) -> List[InequalityReport]:
    reports = []
    n_sweep = [int(n) for n in config.get_sweep("n")]
    for lam in config.get_lambdas():
        for f in _modulus_members(lam):
            reports.append(_guarded("kfunctional.saturation", {"lambda": lam, "profile": f.family},
                                    saturation_report, f, n_sweep, 1, 2.0))
    return reports


def lipschitz_checks(config: SuiteConfig) -> List[InequalityReport]:
    reports = []
    t_sweep = config.get_sweep("delta")
    for lam in config.get_lambdas():
        measure = make_measure(lam)
        f, g = gaussian(measure), gaussian(measure, 0.6)
        for p in (2.0, float("inf")):
            reports.append(_guarded("kfunctional.lipschitz", {"lambda": lam, "p": p}, k_functional_lipschitz_check,
                                    f, g, t_sweep, 1, p))
    return reports


def difference_k_checks(config: SuiteConfig) -> List[InequalityReport]:
    reports = []
    deltas = config.get_sweep("delta")
    for lam in config.get_lambdas():
        for f in _modulus_members(lam):
            for p in (2.0, float("inf")):
                params = {"lambda": lam, "profile": f.family, "p": p}
                reports.append(_guarded("kfunctional.difference", params, difference_k_equivalence_check, f, deltas,
                                        1, p))
    return reports


def k_scaling_checks(config: SuiteConfig) -> List[InequalityReport]:
    reports = []
    for lam in config.get_lambdas():
        for f in _modulus_members(lam):
            reports.append(_guarded("kfunctional.scaling", {"lambda": lam, "profile": f.family}, k_scaling_check,
                                    f, 0.25, (0.5, 2.0, 4.0), 1))
    return reports


def bruteforce_checks(config: SuiteConfig) -> List[InequalityReport]:
    reports = []
    t_sweep = config.get_sweep("delta")
    for lam in config.get_lambdas():
        for f in _modulus_members(lam):
            reports.append(_guarded("kfunctional.bruteforce", {"lambda": lam, "profile": f.family},
                                    realization_bruteforce_check, f, t_sweep, 1))
    return reports


def vallee_poussin_checks(config: SuiteConfig) -> List[InequalityReport]:
    reports = []
    for lam in config.get_lambdas():
        measure = make_measure(lam)
        g = vallee_poussin(gaussian(measure), 2.0)
        reports.append(_guarded("approx.vallee_poussin.reproduction", {"lambda": lam},
                                vallee_poussin_reproduction_check, g, 4.0))
        for f in _modulus_members(lam):
            reports.append(_guarded("approx.vallee_poussin.error", {"lambda": lam, "profile": f.family},
                                    vallee_poussin_error_check, f, config.get_sweep("sigma")))
    return reports


# ---------------------------------------------------------------------------
# jackson and inverse


def jackson_checks(config: SuiteConfig) -> List[InequalityReport]:
    reports = []
    sigmas = config.get_sweep("sigma")
    for lam in config.get_lambdas():
        for f in analytic_battery(lam).values():
            for r in (0, 1):
                for p in (2.0, float("inf")):
                    params = {"lambda": lam, "profile": f.family, "r": r, "p": p}
                    reports.append(_guarded("jackson.direct", params, jackson_check, f, sigmas, r, 1,
                                            Scheme.SYMMETRIC, p))
    return reports


def inverse_checks(config: SuiteConfig) -> List[InequalityReport]:
    reports = []
    n_sweep = [int(n) for n in config.get_sweep("n")]
    for lam in config.get_lambdas():
        for f in analytic_battery(lam).values():
            reports.append(_guarded("inverse.direct", {"lambda": lam, "profile": f.family}, inverse_check, f,
                                    n_sweep, 1, 2.0))
    return reports


def marchaud_checks(config: SuiteConfig) -> List[InequalityReport]:
    reports = []
    deltas = config.get_sweep("delta")
    for lam in config.get_lambdas():
        for f in analytic_battery(lam).values():
            reports.append(_guarded("inverse.marchaud", {"lambda": lam, "profile": f.family}, marchaud_check, f,
                                    deltas, 1, 2.0))
    return reports


def derivative_inverse_checks(config: SuiteConfig) -> List[InequalityReport]:
    reports = []
    n_sweep = [int(n) for n in config.get_sweep("n")]
    for lam in config.get_lambdas():
        for f in _members(lam, ("gaussian", "gaussian_narrow", "gaussian_moment")):
            reports.append(_guarded("inverse.derivative", {"lambda": lam, "profile": f.family},
                                    derivative_inverse_check, f, 1, 1, n_sweep, 2.0))
    return reports


# ---------------------------------------------------------------------------
# polynomial inequalities


def nikolskii_checks(config: SuiteConfig) -> List[InequalityReport]:
    sigmas = config.get_sweep("nikolskii_sigma")
    return [_guarded("polynomial.nikolskii", {"lambda": lam, "p": p, "q": q}, nikolskii_check, lam,
                     NIKOLSKII_ORDER, sigmas, p, q)
            for lam, p, q in NIKOLSKII_TRIPLES]


def bernstein_checks(config: SuiteConfig) -> List[InequalityReport]:
    reports = []
    for lam in config.get_lambdas():
        for member, p in (("eigen", float("inf")), ("gaussian", 2.0), ("zero", 2.0)):
            for r in (1, 2):
                params = {"lambda": lam, "member": member, "r": r}
                reports.append(_guarded("polynomial.bernstein", params, bernstein_check, lam, 2.0, r, p, member))
    return reports


def bernstein_nikolskii_checks(config: SuiteConfig) -> List[InequalityReport]:
    sigmas = config.get_sweep("nikolskii_sigma")
    return [_guarded("polynomial.bernstein_nikolskii", {"lambda": lam}, bernstein_nikolskii_check, lam, sigmas,
                     1, 8.0)
            for lam in config.get_lambdas()]


def stechkin_boas_checks(config: SuiteConfig) -> List[InequalityReport]:
    reports = []
    for lam in config.get_lambdas():
        for m in (1, 2):
            reports.append(_guarded("polynomial.stechkin_boas", {"lambda": lam, "m": m}, stechkin_boas_check, lam,
                                    1.0, m, float("inf"), STECHKIN_PAIRS))
    return reports


# ---------------------------------------------------------------------------
# sampling


def _sequence_report(d: int, m: int, N: int, rng: np.random.Generator) -> InequalityReport:
    b_vectors = [rng.integers(-3, 4, size=d).astype(float) for _ in range(m)]
    for b in b_vectors:
        if not np.any(b):
            b[-1] = 1.0
    params = {"d": d, "m": m, "N": N, "b": [b.tolist() for b in b_vectors]}
    try:
        seq = build_sequence(b_vectors, d, N)
        verify_sequence(seq)
    except SequenceConstructionError as e:
        logger.error(f"avoidance sequence {params}: {e}")
        return InequalityReport.identity("sampling.sequence", params, [0.0], [1.0], tolerance=0.0,
                                         notes=[str(e)])
    return InequalityReport.identity("sampling.sequence", params, [1.0], [1.0], tolerance=0.0,
                                     details={"size": seq.size, "bound": seq.bound})


def sequence_checks(config: SuiteConfig) -> List[InequalityReport]:
    """Exhaustive postconditions of the avoidance sequence on random direction sets"""
    rng = np.random.default_rng(config.get_seed())
    reports = []
    for d in (1, 2, 3):
        N = SEQUENCE_WINDOW if d < 3 or config.is_expensive() else CHEAP_SEQUENCE_WINDOW
        for m in range(0, 4):
            params = {"d": d, "m": m, "N": N}
            reports.append(_guarded("sampling.sequence", params, _sequence_report, d, m, N, rng))
    return reports


def _sampling_weights(d: int) -> List:
    if d == 1:
        return [unit_weight(1), make_weight(1, k0=1.0)]
    return [unit_weight(d), make_weight(d, alphas=[[1.0] + [1.0] * (d - 1)], exponents=[1.0])]


def _dimensions(config: SuiteConfig) -> List[int]:
    return [1, 2, 3] if config.is_expensive() else [1, 2]


def weight_bridge_checks(config: SuiteConfig) -> List[InequalityReport]:
    reports = []
    for d in _dimensions(config):
        for weight in _sampling_weights(d):
            for p in (1.0, 2.0):
                params = {"weight": weight.to_dict(), "p": p}
                reports.append(_guarded("sampling.weight_bridge", params, weight_bridge_check, weight, p, 0.5,
                                        seed=config.get_seed()))
    return reports


def _lattice_for(weight, d: int, window: int):
    return make_lattice([1.0] * d, weight.alphas, weight.k0, N=window)


def _window(d: int) -> int:
    return {1: 200, 2: 40, 3: 12}[d]


def ppb_checks(config: SuiteConfig) -> List[InequalityReport]:
    reports = []
    for d in _dimensions(config):
        f = sinc_power([PPB_THETA] * d)
        for weight in _sampling_weights(d):
            seq = _lattice_for(weight, d, _window(d))
            for p in (1.0, 2.0):
                params = {"d": d, "weight": weight.to_dict(), "p": p}
                reports.append(_guarded("sampling.ppb", params, pp_boas_check, f, seq, p, weight))
    return reports


def ppb_stability_checks(config: SuiteConfig) -> List[InequalityReport]:
    reports = []
    for d in _dimensions(config):
        f = sinc_power([PPB_THETA] * d)
        for weight in _sampling_weights(d):
            seq = _lattice_for(weight, d, _window(d))
            params = {"d": d, "weight": weight.to_dict(), "p": 2.0}
            reports.append(_guarded("sampling.ppb_stability", params, pp_boas_stability_check, f, seq, 2.0, weight,
                                    replicas=config.get_perturbations(), seed=config.get_seed()))
    return reports


def nyquist_checks(config: SuiteConfig) -> List[InequalityReport]:
    """Type equal to the lattice parameter must be refused"""
    f = sinc_power([NYQUIST_THETA])
    seq = make_lattice([1.0], N=_window(1))
    params = {"function": f.to_dict(), "a": seq.a.tolist()}
    try:
        pp_boas_check(f, seq, 2.0)
    except TypeTooLargeError as e:
        return [InequalityReport("sampling.nyquist", params, 1.0, 1.0, 1.0, verdict=Verdict.PASS,
                                 contract=Contract.EXACT, notes=[f"type-too-large: {e}"])]
    return [InequalityReport("sampling.nyquist", params, 0.0, 1.0, 0.0, verdict=Verdict.FAIL,
                             contract=Contract.EXACT, notes=["Nyquist-rate sampling was not refused"])]


CATALOGUE: Dict[str, Callable[[SuiteConfig], List[InequalityReport]]] = {
    "specfun.bessel_bound": bessel_bound_checks,
    "specfun.bessel_decay": bessel_decay_checks,
    "specfun.kernel_positivity": kernel_positivity_checks,
    "specfun.zero_order": zero_order_checks,
    "specfun.coefficients": coefficient_checks,
    "specfun.omega": omega_checks,
    "transform.fixed_point": fixed_point_checks,
    "transform.unitarity": unitarity_checks,
    "transform.involution": involution_checks,
    "transform.cutoff_decay": cutoff_decay_checks,
    "translate.contraction": contraction_checks,
    "translate.mass": mass_checks,
    "translate.positivity": positivity_checks,
    "translate.gaussian_closed_form": gaussian_closed_form_checks,
    "translate.spectral": spectral_identity_checks,
    "translate.support": support_checks,
    "translate.dual_norm": dual_norm_checks,
    "translate.self_adjoint": self_adjoint_checks,
    "translate.rank_one": rank_one_checks,
    "convolve.young": young_checks,
    "riesz.multiplier": riesz_multiplier_checks,
    "riesz.scaling": riesz_scaling_checks,
    "riesz.split": riesz_split_checks,
    "riesz.hls": hls_checks,
    "riesz.pointwise": pointwise_checks,
    "riesz.weak_type.maximal": maximal_weak_type_checks,
    "modulus.path_equivalence": path_equivalence_checks,
    "modulus.bound": difference_bound_checks,
    "modulus.order": modulus_order_checks,
    "modulus.monotone": modulus_monotone_checks,
    "modulus.bandlimited": bandlimited_modulus_checks,
    "kfunctional.equivalence": equivalence_checks,
    "kfunctional.saturation": saturation_checks,
    "kfunctional.lipschitz": lipschitz_checks,
    "kfunctional.difference": difference_k_checks,
    "kfunctional.scaling": k_scaling_checks,
    "kfunctional.bruteforce": bruteforce_checks,
    "approx.vallee_poussin": vallee_poussin_checks,
    "jackson.direct": jackson_checks,
    "inverse.direct": inverse_checks,
    "inverse.marchaud": marchaud_checks,
    "inverse.derivative": derivative_inverse_checks,
    "polynomial.nikolskii": nikolskii_checks,
    "polynomial.bernstein": bernstein_checks,
    "polynomial.bernstein_nikolskii": bernstein_nikolskii_checks,
    "polynomial.stechkin_boas": stechkin_boas_checks,
    "sampling.sequence": sequence_checks,
    "sampling.weight_bridge": weight_bridge_checks,
    "sampling.ppb": ppb_checks,
    "sampling.ppb_stability": ppb_stability_checks,
    "sampling.nyquist": nyquist_checks,
}


def select_checks(selection: Sequence[str]) -> List[str]:
    """
    Catalogue ids matching a selection of ids or prefixes

    "all" selects the whole catalogue; "translate" and "translate." both
    select every translate check.

    Raises:
        KeyError: An entry matches nothing
    """
    if "all" in selection:
        return sorted(CATALOGUE)
    chosen = set()
    for entry in selection:
        prefix = entry.rstrip(".")
        matches = [check_id for check_id in CATALOGUE if check_id == prefix or check_id.startswith(prefix + ".")]
        if not matches:
            raise KeyError(f"No check matches '{entry}'. Available: {', '.join(sorted(CATALOGUE))}")
        chosen.update(matches)
    return sorted(chosen)


def run_check(check_id: str, config: SuiteConfig) -> List[InequalityReport]:
    """Run one catalogue entry; toolkit errors outside an instance fail the whole entry"""
    logger.info(f"Running {check_id}")
    try:
        reports = CATALOGUE[check_id](config)
    except DunklAnalyzerError as e:
        logger.error(f"{check_id} failed: {e}")
        return [failure_report(check_id, {}, e)]
    logger.info(f"Finished {check_id}: {len(reports)} report(s)")
    return reports
