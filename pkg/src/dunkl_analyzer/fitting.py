import numpy as np
import statsmodels.api as sm


def log_log_fit(x, y):
    """
    Ordinary least squares of log y on log x

    Args:
        x: Positive abscissae
        y: Positive values

    Returns:
        Tuple of (slope, intercept, r_squared)
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 2:
        raise ValueError("Need at least two points for a power-law fit")
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("Power-law fit requires positive data")
    model = sm.OLS(np.log(y), sm.add_constant(np.log(x))).fit()
    return float(model.params[1]), float(model.params[0]), float(model.rsquared)


def log_log_slope(x, y) -> float:
    return log_log_fit(x, y)[0]
