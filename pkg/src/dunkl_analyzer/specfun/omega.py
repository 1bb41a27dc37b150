import logging
from typing import Dict

import numpy as np
from scipy import special

from ..errors import UnsupportedArgumentError
from .bessel import MAX_ARGUMENT

logger = logging.getLogger(__name__)

COMPLEX_SERIES_RADIUS = 4.0
COMPLEX_SERIES_TERMS = 60


def omega_parameters(gamma: float):
    """k = ⌊γ + 1/2⌋ and the Bessel index k − γ used by ω_γ"""
    if gamma < -0.5:
        raise ValueError(f"gamma must be >= -1/2, got {gamma}")
    k = int(np.floor(gamma + 0.5))
    return k, k - gamma


def bessel_j_complex(mu: float, z) -> np.ndarray:
    """Normalized Bessel function j_μ at complex arguments near the real axis"""
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    small = np.abs(z) <= COMPLEX_SERIES_RADIUS
    if np.any(small):
        q = -(z[small] / 2.0) ** 2
        term = np.ones_like(q)
        total = np.ones_like(q)
        for k in range(1, COMPLEX_SERIES_TERMS):
            term = term * q / (k * (k + mu))
            total = total + term
        out[small] = total
    if np.any(~small):
        zl = z[~small]
        prefactor = 2.0 ** mu * special.gamma(mu + 1.0) * zl ** (-mu)
        out[~small] = prefactor * special.jv(mu, zl)
    return out


def weight_omega(gamma: float, x):
    """
    Even entire weight comparable with x^{2k+2} near 0 and x^{2γ+1} at infinity

    ω_γ(x) = x^{2k+2} j_{k−γ}(x+i) j_{k−γ}(x−i) = x^{2k+2} |j_{k−γ}(x+i)|²

    Args:
        gamma: γ >= -1/2
        x: Nonnegative argument (scalar or array)

    Returns:
        Weight values with the shape of x
    """
    k, mu = omega_parameters(gamma)
    x_arr = np.atleast_1d(np.abs(np.asarray(x, dtype=float)))
    if np.any(~np.isfinite(x_arr)) or np.any(x_arr > MAX_ARGUMENT):
        raise UnsupportedArgumentError(f"ω_γ argument outside the supported range |x| <= {MAX_ARGUMENT:g}")
    modulus = np.abs(bessel_j_complex(mu, x_arr + 1j)) ** 2
    if np.any(~np.isfinite(modulus)):
        raise UnsupportedArgumentError("Complex Bessel evaluation overflowed")
    out = x_arr ** (2 * k + 2) * modulus
    if np.ndim(x) == 0:
        return float(out[0])
    return out.reshape(np.shape(x))


def omega_comparability(gamma: float, points: int = 2000) -> Dict[str, float]:
    """
    Measured two-sided constants of ω_γ against its model powers

    Args:
        gamma: γ >= -1/2
        points: Samples per region

    Returns:
        Dictionary with the min/max of ω/x^{2k+2} on (1e-3, 1] and of
        ω/x^{2γ+1} on [1, 100]
    """
    k, _ = omega_parameters(gamma)
    near = np.logspace(-3.0, 0.0, points)
    far = np.logspace(0.0, 2.0, points)
    near_ratio = weight_omega(gamma, near) / near ** (2 * k + 2)
    far_ratio = weight_omega(gamma, far) / far ** (2.0 * gamma + 1.0)
    constants = {
        "near_min": float(near_ratio.min()),
        "near_max": float(near_ratio.max()),
        "far_min": float(far_ratio.min()),
        "far_max": float(far_ratio.max()),
    }
    logger.debug(f"ω comparability for γ={gamma}: {constants}")
    return constants
