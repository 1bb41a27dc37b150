import logging
from dataclasses import dataclass
from typing import Union

import numpy as np
from numpy.polynomial import Polynomial
from scipy import special

from ..errors import UnsupportedArgumentError

logger = logging.getLogger(__name__)

# |t| at or below this uses the power series; beyond it the scaled library form
SERIES_SWITCH = 2.0
SERIES_TERMS = 40
MAX_ARGUMENT = 1.0e5
MAX_DERIVATIVE_ORDER = 4
# exp() overflows just above this
_LOG_OVERFLOW = 700.0


@dataclass(frozen=True)
class BesselIndex:
    """Index λ of the normalized Bessel function j_λ and of the measure dν_λ"""

    value: float

    def __post_init__(self):
        if not np.isfinite(self.value) or self.value < -0.5:
            raise ValueError(f"Bessel index must be >= -1/2, got {self.value}")

    @property
    def is_classical(self) -> bool:
        return self.value == -0.5

    def __float__(self) -> float:
        return float(self.value)


IndexLike = Union[BesselIndex, float, int]


def as_index(lam: IndexLike) -> BesselIndex:
    if isinstance(lam, BesselIndex):
        return lam
    return BesselIndex(float(lam))


def _log_prefactor(lam: float, t: np.ndarray) -> np.ndarray:
    # log(2^λ Γ(λ+1) t^{-λ})
    return lam * np.log(2.0) + special.gammaln(lam + 1.0) - lam * np.log(t)


def _series(lam: float, t: np.ndarray, sign: float, start: int = 0) -> np.ndarray:
    """Σ_{k≥start} (sign)^k Γ(λ+1)(t/2)^{2k}/(k! Γ(k+λ+1))"""
    q = sign * (t / 2.0) ** 2
    term = np.ones_like(t)
    total = np.zeros_like(t) if start > 0 else np.ones_like(t)
    for k in range(1, SERIES_TERMS):
        term = term * q / (k * (k + lam))
        if k >= start:
            total = total + term
    return total


def _check_range(t: np.ndarray):
    if np.any(~np.isfinite(t)) or np.any(np.abs(t) > MAX_ARGUMENT):
        raise UnsupportedArgumentError(
            f"Bessel argument outside the supported range |t| <= {MAX_ARGUMENT:g}"
        )


def bessel_j(lam: IndexLike, t):
    """
    Normalized Bessel function j_λ(t) = 2^λ Γ(λ+1) t^{-λ} J_λ(t)

    Args:
        lam: Bessel index λ >= -1/2
        t: Scalar or array argument (the function is even in t)

    Returns:
        Values of j_λ with the same shape as t
    """
    lam = float(as_index(lam))
    t_arr = np.atleast_1d(np.abs(np.asarray(t, dtype=float)))
    _check_range(t_arr)
    out = np.empty_like(t_arr)

    small = t_arr <= SERIES_SWITCH
    if np.any(small):
        out[small] = _series(lam, t_arr[small], -1.0)
    large = ~small
    if np.any(large):
        tl = t_arr[large]
        out[large] = np.exp(_log_prefactor(lam, tl)) * special.jv(lam, tl)

    if np.ndim(t) == 0:
        return float(out[0])
    return out.reshape(np.shape(t))


def one_minus_bessel_j(lam: IndexLike, t):
    """1 − j_λ(t) without cancellation near t = 0"""
    lam = float(as_index(lam))
    t_arr = np.atleast_1d(np.abs(np.asarray(t, dtype=float)))
    _check_range(t_arr)
    out = np.empty_like(t_arr)

    small = t_arr <= SERIES_SWITCH
    if np.any(small):
        out[small] = -_series(lam, t_arr[small], -1.0, start=1)
    large = ~small
    if np.any(large):
        out[large] = 1.0 - bessel_j(lam, t_arr[large])

    if np.ndim(t) == 0:
        return float(out[0])
    return out.reshape(np.shape(t))


def bessel_j_imaginary(lam: IndexLike, t, scaled: bool = False):
    """
    Value j_λ(i t), real and >= 1

    Args:
        lam: Bessel index
        t: Real argument
        scaled: Return e^{-|t|} j_λ(i t) instead, which never overflows

    Returns:
        Values with the shape of t
    """
    lam = float(as_index(lam))
    t_arr = np.atleast_1d(np.abs(np.asarray(t, dtype=float)))
    if np.any(~np.isfinite(t_arr)):
        raise UnsupportedArgumentError("Non-finite argument for j_λ(i t)")
    out = np.empty_like(t_arr)

    small = t_arr <= SERIES_SWITCH
    if np.any(small):
        values = _series(lam, t_arr[small], 1.0)
        out[small] = values * np.exp(-t_arr[small]) if scaled else values
    large = ~small
    if np.any(large):
        tl = t_arr[large]
        log_value = _log_prefactor(lam, tl) + np.log(special.ive(lam, tl))
        if not scaled:
            log_value = log_value + tl
            if np.any(log_value > _LOG_OVERFLOW):
                raise UnsupportedArgumentError(
                    f"j_λ(i t) overflows for t = {tl.max():g}; use scaled=True"
                )
        out[large] = np.exp(log_value)

    if np.ndim(t) == 0:
        return float(out[0])
    return out.reshape(np.shape(t))


def _differentiate(lam: float, terms: dict) -> dict:
    """d/dt of Σ_i P_i(t) j_{λ+i}(t), in the same representation"""
    t_poly = Polynomial([0.0, 1.0])
    derived = {}
    for i, poly in terms.items():
        derived[i] = derived.get(i, Polynomial([0.0])) + poly.deriv()
        # d/dt j_μ = −t/(2(μ+1)) j_{μ+1}, μ = λ + i
        derived[i + 1] = derived.get(i + 1, Polynomial([0.0])) - poly * t_poly / (2.0 * (lam + i + 1.0))
    return derived


def _derivative_terms(lam: float, n: int) -> dict:
    """Coefficient polynomials P_i with d^n/dt^n j_λ = Σ_i P_i(t) j_{λ+i}(t)"""
    terms = {0: Polynomial([1.0])}
    for _ in range(n):
        terms = _differentiate(lam, terms)
    return terms


def _over_t(poly: Polynomial) -> Polynomial:
    # odd polynomials only: the constant coefficient is zero
    if poly.coef.size <= 1:
        return Polynomial([0.0])
    return Polynomial(poly.coef[1:])


def _laplacian_terms(lam: float, r: int) -> dict:
    """Coefficient polynomials of (−d²/dt² − (2λ+1)/t d/dt)^r j_λ"""
    terms = {0: Polynomial([1.0])}
    zero = Polynomial([0.0])
    for _ in range(r):
        first = _differentiate(lam, terms)
        second = _differentiate(lam, first)
        terms = {i: -(second.get(i, zero) + (2.0 * lam + 1.0) * _over_t(first.get(i, zero)))
                 for i in set(first) | set(second)}
    return terms


def _evaluate_terms(lam: float, terms: dict, t):
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    total = np.zeros_like(t_arr)
    for i, poly in terms.items():
        if np.all(poly.coef == 0.0):
            continue
        # j_{λ+i} is even, P_i carries the parity of the result
        total = total + poly(t_arr) * bessel_j(lam + i, t_arr)
    if np.ndim(t) == 0:
        return float(total[0])
    return total.reshape(np.shape(t))


def bessel_j_derivative(lam: IndexLike, t, n: int = 1):
    """
    n-th derivative of j_λ by repeated use of j'_μ(t) = −t/(2(μ+1)) j_{μ+1}(t)

    Args:
        lam: Bessel index
        t: Argument
        n: Derivative order, 0 <= n <= 4

    Returns:
        Derivative values with the shape of t
    """
    if n < 0 or n > MAX_DERIVATIVE_ORDER:
        raise ValueError(f"Derivative order must lie in [0, {MAX_DERIVATIVE_ORDER}], got {n}")
    lam = float(as_index(lam))
    if n == 0:
        return bessel_j(lam, t)
    return _evaluate_terms(lam, _derivative_terms(lam, n), t)


def bessel_j_laplacian(lam: IndexLike, t, r: int = 1):
    """
    r-th power of the radial operator −(d²/dt² + (2λ+1)/t d/dt) applied to j_λ

    The operator acts on the coefficient polynomials of the derivative
    recursion, so the 1/t term never divides by zero.

    Args:
        lam: Bessel index
        t: Argument
        r: Power, >= 0

    Returns:
        Values with the shape of t
    """
    if r < 0:
        raise ValueError(f"Laplacian power must be >= 0, got {r}")
    lam = float(as_index(lam))
    if r == 0:
        return bessel_j(lam, t)
    return _evaluate_terms(lam, _laplacian_terms(lam, r), t)


def bessel_decay_constant(lam: IndexLike, n: int = 0, t_max: float = 200.0, points: int = 20001) -> float:
    """Measured C in |j_λ^{(n)}(t)| <= C (t+1)^{-(λ+1/2)} on [0, t_max]"""
    lam = float(as_index(lam))
    t = np.linspace(0.0, t_max, points)
    values = np.abs(bessel_j_derivative(lam, t, n)) * (t + 1.0) ** (lam + 0.5)
    constant = float(values.max())
    logger.debug(f"decay constant for λ={lam}, n={n}: {constant:.6g}")
    return constant
