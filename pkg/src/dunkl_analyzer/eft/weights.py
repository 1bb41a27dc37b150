import logging
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from ..errors import InvalidWeightDirectionError
from ..reports import Contract, InequalityReport
from ..specfun.omega import weight_omega

logger = logging.getLogger(__name__)

BRIDGE_POINTS = 4001


@dataclass(frozen=True)
class PowerWeight:
    """
    v(x) = |x|^{k0} Π_j |⟨α^j, x⟩|^{k_j} on ℝ^d

    terms holds the (α^j, k_j) pairs; the factors ξ_0 = |x| and
    ξ_j = |⟨α^j, x⟩| are available separately through `factors`.
    """

    d: int
    k0: float = 0.0
    terms: Tuple[Tuple[Tuple[float, ...], float], ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"Dimension must be >= 1, got {self.d}")
        if self.k0 < 0:
            raise ValueError(f"k0 must be >= 0, got {self.k0}")
        terms = []
        for alpha, k in self.terms:
            alpha = tuple(float(a) for a in alpha)
            if len(alpha) != self.d:
                raise InvalidWeightDirectionError(f"Direction {alpha} does not live in ℝ^{self.d}")
            if not any(alpha):
                raise InvalidWeightDirectionError("Weight directions must be nonzero")
            if k <= 0:
                raise ValueError(f"Weight exponents k_j must be positive, got {k}")
            terms.append((alpha, float(k)))
        object.__setattr__(self, "terms", tuple(terms))

    @property
    def m(self) -> int:
        return len(self.terms)

    @property
    def alphas(self) -> List[Tuple[float, ...]]:
        return [alpha for alpha, _ in self.terms]

    @property
    def exponents(self) -> List[float]:
        """k_0, k_1, ..., k_m"""
        return [self.k0] + [k for _, k in self.terms]

    @property
    def is_unit(self) -> bool:
        return self.k0 == 0.0 and not self.terms

    @property
    def homogeneity(self) -> float:
        return float(sum(self.exponents))

    def factors(self, x) -> np.ndarray:
        """ξ_0(x), ..., ξ_m(x) stacked along the first axis; x has shape (..., d)"""
        x = np.asarray(x, dtype=float)
        xi = [np.linalg.norm(x, axis=-1)]
        xi += [np.abs(x @ np.asarray(alpha)) for alpha in self.alphas]
        return np.stack(xi)

    def __call__(self, x) -> np.ndarray:
        xi = self.factors(x)
        out = np.ones(xi.shape[1:])
        for factor, k in zip(xi, self.exponents):
            if k:
                out = out * factor ** k
        return out

    def growth_constant(self) -> float:
        """C with v(x) <= C |x|^{homogeneity}"""
        return float(np.prod([np.linalg.norm(alpha) ** k for alpha, k in self.terms])) if self.terms else 1.0

    def bridge_gammas(self, p: float) -> List[float]:
        """γ_j = k_j/(2p) − 1/2 so that ω_{γ_j}(ξ_j)^p is comparable with ξ_j^{k_j} at infinity"""
        return [k / (2.0 * p) - 0.5 for k in self.exponents]

    def bridge_factors(self, x, p: float) -> np.ndarray:
        """w_j(x) = ω_{γ_j}(ξ_j(x)) stacked like `factors`; factors with k_j = 0 are 1"""
        xi = self.factors(x)
        return np.stack([weight_omega(gamma, factor) if k else np.ones_like(factor)
                         for gamma, k, factor in zip(self.bridge_gammas(p), self.exponents, xi)])

    def bridge(self, x, p: float) -> np.ndarray:
        """w(x) = Π_j w_j(x), an entire function of exponential type"""
        return np.prod(self.bridge_factors(x, p), axis=0)

    def to_dict(self) -> dict:
        return {"d": self.d, "k0": self.k0, "terms": [[list(alpha), k] for alpha, k in self.terms]}


def make_weight(d: int, k0: float = 0.0, alphas: Sequence[Sequence[float]] = (),
                exponents: Sequence[float] = ()) -> PowerWeight:
    if len(alphas) != len(exponents):
        raise ValueError(f"{len(alphas)} directions but {len(exponents)} exponents")
    return PowerWeight(d, float(k0), tuple((tuple(a), float(k)) for a, k in zip(alphas, exponents)))


def unit_weight(d: int) -> PowerWeight:
    return PowerWeight(d)


def _bridge_samples(weight: PowerWeight, box: float, points: int, rng: np.random.Generator) -> np.ndarray:
    if weight.d == 1:
        return np.linspace(-box, box, points)[:, None]
    return rng.uniform(-box, box, size=(points, weight.d))


def weight_bridge_check(weight: PowerWeight, p: float, delta: float, box: float = 50.0,
                        points: int = BRIDGE_POINTS, seed: int = 0) -> InequalityReport:
    """
    Two one-sided comparisons of each factor w_j^p with v_j = ξ_j^{k_j}

    w_j^p <= C v_j must hold on the whole sample, w_j^p >= c v_j only where
    ξ_j >= δ. The report carries ratio_max over all points and ratio_min
    over the region ξ_j >= δ; both must stay in a frozen band.

    Args:
        weight: Power weight
        p: Exponent of the sampling inequality
        delta: Distance to the zero set of each factor
        box: Half-width of the sample box
        points: Sample size
        seed: Random seed for d >= 2

    Returns:
        InequalityReport with a band contract
    """
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    rng = np.random.default_rng(seed)
    x = _bridge_samples(weight, box, points, rng)
    xi = weight.factors(x)
    w = weight.bridge_factors(x, p)

    upper, lower, per_factor = [], [], {}
    for j, (k, factor, bridge) in enumerate(zip(weight.exponents, xi, w)):
        if k == 0.0:
            continue
        usable = factor > 0.0
        ratio = bridge[usable] ** p / factor[usable] ** k
        away = factor[usable] >= delta
        upper.append(float(ratio.max()))
        if np.any(away):
            lower.append(float(ratio[away].min()))
        per_factor[f"xi{j}"] = {"upper": float(ratio.max()),
                                "lower_away": float(ratio[away].min()) if np.any(away) else None}

    params = {"weight": weight.to_dict(), "p": p, "delta": delta, "box": box}
    if not upper:
        return InequalityReport("sampling.weight_bridge", params, 1.0, 1.0, 1.0, contract=Contract.BAND,
                                details={"factors": per_factor}, notes=["unit weight"])
    ratio_max = max(upper)
    ratio_min = min(lower) if lower else ratio_max
    logger.debug(f"weight bridge: w^p/v in [{ratio_min:.4g}, {ratio_max:.4g}] away from the zero set")
    return InequalityReport("sampling.weight_bridge", params, ratio_max, 1.0, ratio_max, ratio_min=ratio_min,
                            ratio_max=ratio_max, contract=Contract.BAND, details={"factors": per_factor})
