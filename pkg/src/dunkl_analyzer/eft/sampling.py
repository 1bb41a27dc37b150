import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import quad
from scipy.special import roots_legendre

from ..errors import InsufficientDecayError, TypeTooLargeError
from ..reports import Contract, InequalityReport
from .lattice import LatticeSequence, perturb_lattice
from .weights import PowerWeight, unit_weight

logger = logging.getLogger(__name__)

QUADRATURE_ORDER = 16
# integrand points kept in memory at once
CHUNK_POINTS = 2 ** 20
TAIL_RELATIVE = 1.0e-6


@dataclass(frozen=True)
class EftFunction:
    """
    Tensor product A Π_i (sin(θ_i x_i)/(θ_i x_i))^power on ℝ^d

    Each factor is entire of exponential type power·θ_i, so the type vector
    is known by construction. |factor(u)| <= min(1, (θ_i |u|)^{−power})
    is the decay certificate.
    """

    theta: Tuple[float, ...]
    power: int = 2
    amplitude: float = 1.0

    def __post_init__(self):
        theta = tuple(float(t) for t in np.atleast_1d(self.theta))
        if any(t <= 0 for t in theta):
            raise ValueError(f"Frequencies must be positive, got {theta}")
        if self.power < 1:
            raise ValueError(f"power must be >= 1, got {self.power}")
        object.__setattr__(self, "theta", theta)

    @property
    def d(self) -> int:
        return len(self.theta)

    @property
    def type_vector(self) -> np.ndarray:
        return self.power * np.asarray(self.theta)

    @property
    def is_zero(self) -> bool:
        return self.amplitude == 0.0

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.full(x.shape[:-1], self.amplitude)
        for i, theta in enumerate(self.theta):
            out = out * np.sinc(theta * x[..., i] / np.pi) ** self.power
        return out

    def to_dict(self) -> dict:
        return {"family": "sinc_power", "theta": list(self.theta), "power": self.power, "amplitude": self.amplitude}


def sinc_power(theta, power: int = 2, amplitude: float = 1.0) -> EftFunction:
    return EftFunction(tuple(np.atleast_1d(theta)), power, amplitude)


@dataclass(frozen=True)
class SampleSum:
    value: float
    tail: float
    points: int
    notes: Tuple[str, ...] = ()

    @property
    def relative_tail(self) -> float:
        return self.tail / self.value if self.value > 0 else 0.0

    @property
    def tail_certified(self) -> bool:
        return self.relative_tail <= TAIL_RELATIVE


def _envelope(u, theta: float, s: float, K: float):
    u = np.abs(u)
    return (1.0 + u) ** K * np.minimum(1.0, (theta * np.maximum(u, 1e-300)) ** (-s))


@lru_cache(maxsize=256)
def _envelope_integral(theta: float, s: float, K: float, lo: float = 0.0) -> float:
    """∫_lo^∞ (1+u)^K min(1, (θu)^{−s}) du"""
    knee = 1.0 / theta
    head = 0.0
    if lo < knee:
        head = ((1.0 + knee) ** (K + 1.0) - (1.0 + lo) ** (K + 1.0)) / (K + 1.0)
    start = max(lo, knee)
    tail, _ = quad(lambda u: (1.0 + u) ** K * (theta * u) ** (-s), start, np.inf, limit=200)
    return head + tail


def _envelope_max(theta: float, K: float) -> float:
    # the envelope increases up to the knee 1/θ and decreases beyond it
    return (1.0 + 1.0 / theta) ** K


def _certified_growth(f: EftFunction, p: float, weight: PowerWeight) -> Tuple[float, float]:
    s = f.power * p
    K = weight.homogeneity
    if s - K <= 1.0:
        raise InsufficientDecayError(
            f"|f|^p v decays like |x|^{K - s:g} along an axis; the sample tail cannot be bounded"
        )
    return s, K


def _sum_tail(f: EftFunction, seq: LatticeSequence, p: float, weight: PowerWeight) -> float:
    """
    Bound on the sample sum over points outside the window

    v(x) <= C Π_l (1+|x_l|)^K, and along each coordinate the samples of a
    function decreasing beyond X with gap >= δ sum to at most
    g(X) + δ^{-1} ∫_X^∞ g.
    """
    s, K = _certified_growth(f, p, weight)
    delta = seq.separation
    radius = seq.outer_radius()
    full, outside = [], []
    for theta, X in zip(f.theta, radius):
        full.append(2.0 * (_envelope_integral(theta, s, K) / delta + 2.0 * _envelope_max(theta, K)))
        if X <= 1.0 / theta:
            outside.append(full[-1])
        else:
            outside.append(2.0 * (_envelope(X, theta, s, K) + _envelope_integral(theta, s, K, float(X)) / delta))
    total = 0.0
    for i in range(f.d):
        total += outside[i] * float(np.prod([full[l] for l in range(f.d) if l != i]))
    return abs(f.amplitude) ** p * weight.growth_constant() * total


def pp_sum(f: EftFunction, seq: LatticeSequence, p: float, weight: Optional[PowerWeight] = None) -> SampleSum:
    """
    Σ_n v(λ^(n)) |f(λ^(n))|^p over the window with a bound on the rest

    Args:
        f: Entire function with decay certificate
        seq: Near-lattice window
        p: Exponent, > 0
        weight: Power weight, unit by default

    Returns:
        SampleSum

    Raises:
        InsufficientDecayError: The certificate cannot bound the tail
    """
    if p <= 0:
        raise ValueError(f"p must be positive, got {p}")
    if f.d != seq.d:
        raise ValueError(f"Function lives on ℝ^{f.d}, lattice on ℝ^{seq.d}")
    weight = weight or unit_weight(f.d)
    if f.is_zero:
        return SampleSum(0.0, 0.0, seq.size)
    values = weight(seq.points) * np.abs(f(seq.points)) ** p
    total = float(np.sum(values))
    tail = _sum_tail(f, seq, p, weight)
    notes = ()
    if total > 0 and tail > TAIL_RELATIVE * total:
        message = f"sample tail {tail:.3g} exceeds {TAIL_RELATIVE:g} of the window sum {total:.6g}; widen N"
        logger.warning(message)
        notes = (message,)
    return SampleSum(total, tail, seq.size, notes)


def _axis_rule(theta: float, power: int, X: float) -> Tuple[np.ndarray, np.ndarray]:
    """Composite Gauss–Legendre on [−X, X] with panels of half a period of sin(power θ x)"""
    width = np.pi / (power * theta)
    panels = max(2, int(np.ceil(2.0 * X / width)))
    edges = np.linspace(-X, X, panels + 1)
    x, w = roots_legendre(QUADRATURE_ORDER)
    half = np.diff(edges)[:, None] / 2.0
    mid = (edges[:-1] + edges[1:])[:, None] / 2.0
    return (mid + half * x).ravel(), (half * w).ravel()


def pp_integral(f: EftFunction, p: float, weight: Optional[PowerWeight] = None, box: Optional[Sequence[float]] = None,
                bridge: bool = False) -> Tuple[float, float, Optional[float]]:
    """
    ∫ |f|^p v dx over the box [−X, X]^d by tensorized Gauss–Legendre

    Args:
        f: Entire function
        p: Exponent, > 0
        weight: Power weight, unit by default
        box: Half-widths X_i; default 400/θ_i
        bridge: Also integrate |f w|^p with w the entire bridge weight

    Returns:
        (integral, tail bound outside the box, bridged integral or None)
    """
    weight = weight or unit_weight(f.d)
    if f.is_zero:
        return 0.0, 0.0, 0.0 if bridge else None
    s, K = _certified_growth(f, p, weight)
    box = np.asarray(box if box is not None else [400.0 / t for t in f.theta], dtype=float)
    rules = [_axis_rule(theta, f.power, X) for theta, X in zip(f.theta, box)]

    first_x, first_w = rules[0]
    rest = [r for r in rules[1:]]
    rest_points = np.stack(np.meshgrid(*[r[0] for r in rest], indexing="ij"), axis=-1).reshape(-1, f.d - 1) \
        if rest else np.zeros((1, 0))
    rest_weights = np.prod(np.stack(np.meshgrid(*[r[1] for r in rest], indexing="ij")), axis=0).ravel() \
        if rest else np.ones(1)
    rows = max(1, CHUNK_POINTS // rest_points.shape[0])

    integral, bridged = 0.0, 0.0
    for start in range(0, first_x.size, rows):
        xs, ws = first_x[start:start + rows], first_w[start:start + rows]
        points = np.concatenate([np.repeat(xs, rest_points.shape[0])[:, None],
                                 np.tile(rest_points, (xs.size, 1))], axis=1)
        weights = np.repeat(ws, rest_points.shape[0]) * np.tile(rest_weights, xs.size)
        magnitude = np.abs(f(points)) ** p
        integral += float(np.sum(weights * magnitude * weight(points)))
        if bridge:
            bridged += float(np.sum(weights * magnitude * weight.bridge(points, p) ** p))

    full = [2.0 * _envelope_integral(theta, s, K) for theta in f.theta]
    outside = [2.0 * _envelope_integral(theta, s, K, float(X)) for theta, X in zip(f.theta, box)]
    tail = sum(outside[i] * float(np.prod([full[l] for l in range(f.d) if l != i])) for i in range(f.d))
    tail *= abs(f.amplitude) ** p * weight.growth_constant()
    logger.debug(f"∫|f|^p v over box {box.tolist()}: {integral:.8g} (tail <= {tail:.2e})")
    return integral, tail, bridged if bridge else None


def _check_type(f: EftFunction, seq: LatticeSequence):
    if np.any(f.type_vector >= seq.a):
        raise TypeTooLargeError(
            f"Type {f.type_vector.tolist()} is not strictly below the lattice parameter {seq.a.tolist()}; "
            f"at the Nyquist rate the lower sampling bound fails"
        )


def _sampling_params(f: EftFunction, seq: LatticeSequence, p: float, weight: PowerWeight) -> dict:
    return {"function": f.to_dict(), "a": seq.a.tolist(), "N": seq.N, "p": p, "weight": weight.to_dict(),
            "delta": seq.delta, "L": seq.L}


def pp_boas_check(f: EftFunction, seq: LatticeSequence, p: float,
                  weight: Optional[PowerWeight] = None) -> InequalityReport:
    """
    Two-sided comparison of the weighted sample sum with the weighted integral

    ratio = sum/integral; integral/sum is its reciprocal and is kept in the
    details together with the bridged integral ∫|f w|^p for weighted runs.

    Raises:
        TypeTooLargeError: The type of f is not strictly below a
    """
    weight = weight or unit_weight(f.d)
    _check_type(f, seq)
    params = _sampling_params(f, seq, p, weight)
    samples = pp_sum(f, seq, p, weight)
    integral, tail, bridged = pp_integral(f, p, weight, box=seq.outer_radius(), bridge=not weight.is_unit)
    if f.is_zero:
        return InequalityReport.from_sweep("sampling.ppb", params, [0.0], [0.0], contract=Contract.BAND)
    details = {"sum_over_integral": samples.value / integral, "integral_over_sum": integral / samples.value,
               "sum_tail": samples.tail, "integral_tail": tail}
    if bridged is not None:
        details["bridge_ratio"] = bridged / integral
    ratio = samples.value / integral
    return InequalityReport("sampling.ppb", params, samples.value, integral, ratio, contract=Contract.BAND,
                            tail_error=samples.relative_tail + tail / integral, notes=list(samples.notes),
                            details=details)


def pp_boas_stability_check(f: EftFunction, seq: LatticeSequence, p: float, weight: Optional[PowerWeight] = None,
                            replicas: int = 20, amplitude: Optional[float] = None,
                            seed: int = 0) -> InequalityReport:
    """
    sum/integral across random admissible perturbations of the lattice

    The integral does not depend on the lattice, so it is computed once.
    Default amplitude is δ/4.
    """
    weight = weight or unit_weight(f.d)
    _check_type(f, seq)
    rng = np.random.default_rng(seed)
    amplitude = seq.delta / 4.0 if amplitude is None else amplitude
    integral, tail, _ = pp_integral(f, p, weight, box=seq.outer_radius())
    sums, notes = [], []
    for _ in range(replicas):
        perturbed = perturb_lattice(seq, amplitude, rng)
        samples = pp_sum(f, perturbed, p, weight)
        sums.append(samples.value)
        notes.extend(note for note in samples.notes if note not in notes)
    params = dict(_sampling_params(f, seq, p, weight), replicas=replicas, amplitude=amplitude, seed=seed)
    report = InequalityReport.from_sweep("sampling.ppb_stability", params, sums, [integral] * replicas,
                                         sweep=list(range(replicas)), contract=Contract.BAND,
                                         tail_error=tail / integral if integral else 0.0, notes=notes)
    if report.ratio_min and report.ratio_min > 0:
        report.details["spread"] = report.ratio_max / report.ratio_min
    return report
