import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from math import comb
from typing import Dict, Tuple

import numpy as np
from scipy import special

from ..errors import PrecisionLossError
from ..fitting import log_log_slope
from .bessel import BesselIndex, IndexLike, as_index, bessel_j, one_minus_bessel_j

logger = logging.getLogger(__name__)

MAX_EXACT_ORDER = 20
# m·t at or below this evaluates the forward/symmetric kernels by their t-series
KERNEL_SERIES_SWITCH = 2.0
KERNEL_SERIES_TERMS = 60
ZERO_ORDER_WINDOW = (1.0e-4, 1.0e-2)
ZERO_ORDER_POINTS = 40


class Scheme(str, Enum):
    ITERATED = "iterated"
    FORWARD = "forward"
    SYMMETRIC = "symmetric"


@dataclass(frozen=True)
class MultiplierKernel:
    """Spectral symbol of an m-th order difference built from the translation T^t"""

    scheme: Scheme
    m: int
    lam: BesselIndex

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        object.__setattr__(self, "lam", as_index(self.lam))
        if self.m < 1:
            raise ValueError(f"Kernel order must be a positive integer, got {self.m}")
        if self.scheme is not Scheme.ITERATED and self.m > MAX_EXACT_ORDER:
            raise ValueError(f"Exact coefficients are available up to m = {MAX_EXACT_ORDER}")

    @property
    def zero_order(self) -> int:
        """Order of the zero at the origin"""
        if self.scheme is Scheme.FORWARD:
            return 2 * ((self.m + 1) // 2)
        return 2 * self.m

    def __call__(self, t):
        return multiplier_eval(self, t)


@lru_cache(maxsize=None)
def forward_coefficients(m: int) -> Tuple[int, ...]:
    """μ_s = (−1)^s C(m, s), s = 0..m"""
    return tuple((-1) ** s * comb(m, s) for s in range(m + 1))


@lru_cache(maxsize=None)
def symmetric_coefficients(m: int) -> Dict[int, int]:
    """ν_s = (−1)^s C(2m, m−s), s = −m..m; divide by C(2m, m) to normalize"""
    return {s: (-1) ** abs(s) * comb(2 * m, m - abs(s)) for s in range(-m, m + 1)}


@lru_cache(maxsize=None)
def _forward_moments(m: int) -> Tuple[int, ...]:
    # Σ_s (−1)^s C(m,s) s^{2k}
    coefficients = forward_coefficients(m)
    return tuple(
        sum(c * s ** (2 * k) for s, c in enumerate(coefficients))
        for k in range(KERNEL_SERIES_TERMS)
    )


@lru_cache(maxsize=None)
def _symmetric_moments(m: int) -> Tuple[int, ...]:
    # Σ_{s=1}^m (−1)^s C(2m, m−s) s^{2k}
    return tuple(
        sum((-1) ** s * comb(2 * m, m - s) * s ** (2 * k) for s in range(1, m + 1))
        for k in range(KERNEL_SERIES_TERMS)
    )


def _taylor_coefficients(lam: float) -> np.ndarray:
    """c_k with j_λ(t) = Σ c_k t^{2k}"""
    k = np.arange(KERNEL_SERIES_TERMS)
    log_magnitude = special.gammaln(lam + 1.0) - k * np.log(4.0) - special.gammaln(k + 1.0) - special.gammaln(k + lam + 1.0)
    return np.where(k % 2 == 0, 1.0, -1.0) * np.exp(log_magnitude)


def _moment_series(lam: float, moments: Tuple[int, ...], scale: float, t: np.ndarray) -> np.ndarray:
    coefficients = _taylor_coefficients(lam) * np.array([float(M) for M in moments]) * scale
    total = np.zeros_like(t)
    t2 = t * t
    power = np.ones_like(t)
    for k, c in enumerate(coefficients):
        if k > 0:
            power = power * t2
        if c != 0.0:
            total = total + c * power
    return total


def multiplier_eval(kernel: MultiplierKernel, t):
    """
    Evaluate the difference multiplier of a scheme

    Args:
        kernel: Scheme, order and index
        t: Nonnegative argument (scalar or array)

    Returns:
        iterated (1 − j_λ(t))^m, forward Σ μ_s j_λ(st), or symmetric
        1 + 2/C(2m,m) Σ_{s=1}^m ν_s j_λ(st)
    """
    lam = float(kernel.lam)
    m = kernel.m
    t_arr = np.atleast_1d(np.abs(np.asarray(t, dtype=float)))

    if kernel.scheme is Scheme.ITERATED:
        out = one_minus_bessel_j(lam, t_arr) ** m
    else:
        out = np.empty_like(t_arr)
        small = m * t_arr <= KERNEL_SERIES_SWITCH
        if kernel.scheme is Scheme.FORWARD:
            if np.any(small):
                out[small] = _moment_series(lam, _forward_moments(m), 1.0, t_arr[small])
            if np.any(~small):
                tl = t_arr[~small]
                out[~small] = sum(
                    c * bessel_j(lam, s * tl) for s, c in enumerate(forward_coefficients(m))
                )
        else:
            central = comb(2 * m, m)
            if np.any(small):
                # the leading 1 cancels the k = 0 moment, and the t^{2k}, k < m, moments vanish
                moments = (0,) + _symmetric_moments(m)[1:]
                out[small] = _moment_series(lam, moments, 2.0 / central, t_arr[small])
            if np.any(~small):
                tl = t_arr[~small]
                out[~small] = 1.0 + (2.0 / central) * sum(
                    (-1) ** s * comb(2 * m, m - s) * bessel_j(lam, s * tl) for s in range(1, m + 1)
                )

    if np.ndim(t) == 0:
        return float(out[0])
    return out.reshape(np.shape(t))


def multiplier_zero_order(kernel: MultiplierKernel) -> float:
    """
    Least-squares slope of log kernel(t) against log t on [1e-4, 1e-2]

    Args:
        kernel: Kernel to fit

    Returns:
        Fitted order of the zero at the origin
    """
    t = np.logspace(np.log10(ZERO_ORDER_WINDOW[0]), np.log10(ZERO_ORDER_WINDOW[1]), ZERO_ORDER_POINTS)
    values = multiplier_eval(kernel, t)
    if np.any(~np.isfinite(values)) or np.any(values <= 0.0):
        raise PrecisionLossError(
            f"{kernel.scheme.value} kernel of order {kernel.m} underflows on the fitting window"
        )
    slope = log_log_slope(t, values)
    logger.debug(f"{kernel.scheme.value} m={kernel.m} λ={float(kernel.lam)}: fitted zero order {slope:.4f}")
    return slope


def coefficient_identity_check(m: int) -> bool:
    """
    Exact integer check of the symmetric-scheme coefficient identities

    Σ_{s=1}^m (−1)^s C(2m, m−s) = −C(2m, m)/2 and
    Σ_{s=1}^m (−1)^s C(2m, m−s) s^{2k} = 0 for k = 1..m−1

    Args:
        m: Order, 1 <= m <= 20

    Returns:
        True when every identity holds
    """
    if m < 1 or m > MAX_EXACT_ORDER:
        raise ValueError(f"Order must lie in [1, {MAX_EXACT_ORDER}], got {m}")
    moments = _symmetric_moments(m)
    if 2 * moments[0] != -comb(2 * m, m):
        return False
    return all(moments[k] == 0 for k in range(1, m))

