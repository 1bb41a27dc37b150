from dataclasses import dataclass

import numpy as np


def _h(s: np.ndarray) -> np.ndarray:
    out = np.zeros_like(s)
    positive = s > 0
    out[positive] = np.exp(-1.0 / s[positive])
    return out


def eta0(t):
    """
    Smooth radial cutoff: 1 on [0, 1], 0 on [2, ∞), h(2−t)/(h(2−t)+h(t−1)) between

    Args:
        t: Argument (scalar or array); the function is even

    Returns:
        Values in [0, 1]
    """
    t_arr = np.atleast_1d(np.abs(np.asarray(t, dtype=float)))
    out = np.where(t_arr <= 1.0, 1.0, 0.0)
    middle = (t_arr > 1.0) & (t_arr < 2.0)
    if np.any(middle):
        left = _h(2.0 - t_arr[middle])
        right = _h(t_arr[middle] - 1.0)
        out[middle] = left / (left + right)
    if np.ndim(t) == 0:
        return float(out[0])
    return out.reshape(np.shape(t))


@dataclass(frozen=True)
class CutoffProfile:
    """Band cutoff η(ρ/σ): smooth (η₀, support [0, 2σ]) or sharp (1 on [0, σ])"""

    sharp: bool = False

    @property
    def support_factor(self) -> float:
        return 1.0 if self.sharp else 2.0

    def __call__(self, rho, sigma: float):
        rho = np.asarray(rho, dtype=float)
        if self.sharp:
            return np.where(np.abs(rho) <= sigma, 1.0, 0.0)
        return eta0(rho / sigma)


SMOOTH = CutoffProfile(sharp=False)
SHARP = CutoffProfile(sharp=True)
