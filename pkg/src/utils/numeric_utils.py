"""Log-space helpers for probabilities too close to 0 or 1 for direct evaluation."""

import math

import numpy as np

LOG_2 = math.log(2.0)

# Below this value of a = -n log(1 - p), log(1 - exp(-a)) is replaced by its series log(a) - a/2.
_SERIES_CUTOFF = 1e-8


def log1mexp(a: np.ndarray | float) -> np.ndarray | float:
    """
    Compute log(1 - exp(-a)) for a >= 0.

    Uses the expm1 branch below log(2) and the log1p branch above it, see
    https://cran.r-project.org/web/packages/Rmpfr/vignettes/log1mexp-note.pdf
    """
    a = np.asarray(a, dtype=float)
    with np.errstate(divide="ignore"):
        out = np.where(
            a < LOG_2,
            np.log(-np.expm1(-np.maximum(a, 0.0))),
            np.log1p(-np.exp(-np.maximum(a, LOG_2))),
        )
    return out if out.ndim else float(out)


def log_diff_exp(a: np.ndarray | float, b: np.ndarray | float) -> np.ndarray | float:
    """Compute log(exp(a) - exp(b)) for a >= b; -inf when a == b."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    with np.errstate(invalid="ignore"):
        gap = np.where(np.isneginf(b), np.inf, a - b)
    out = np.where(np.isneginf(a), -np.inf, a + log1mexp(gap))
    return out if out.ndim else float(out)


def log_neg_log1p_neg_exp(log_p: np.ndarray | float) -> np.ndarray | float:
    """
    Compute log(-log(1 - p)) from log(p).

    For small p this is log(p) + log1p(p/2 + p^2/3 + ...), which stays exact far
    below the smallest representable p.
    """
    log_p = np.asarray(log_p, dtype=float)
    p = np.exp(np.minimum(log_p, 0.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        series = log_p + np.log1p(p * (0.5 + p / 3.0 + p * p / 4.0))
        direct = np.log(-np.log1p(-p))
    out = np.where(log_p < -20.0, series, direct)
    return out if out.ndim else float(out)


def log_one_minus_power(log_p: np.ndarray | float, n: float) -> np.ndarray | float:
    """
    Compute log(1 - (1 - p)^n) given log(p).

    This is the log-probability that at least one of n independent events of
    probability p occurs, i.e. -expm1(n * log1p(-p)) carried out in log space.
    """
    log_a = math.log(n) + np.asarray(log_neg_log1p_neg_exp(log_p), dtype=float)
    with np.errstate(over="ignore"):
        a = np.exp(log_a)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(a < _SERIES_CUTOFF, log_a - 0.5 * a, log1mexp(a))
    return out if out.ndim else float(out)


def power_cdf_log(log_sf: np.ndarray | float, n: float) -> np.ndarray | float:
    """Compute n * log(1 - F̄) = log(F^n) from log(F̄)."""
    log_sf = np.asarray(log_sf, dtype=float)
    with np.errstate(divide="ignore"):
        out = n * np.log1p(-np.exp(np.minimum(log_sf, 0.0)))
    return out if out.ndim else float(out)


def exp_or_inf(log_value: float) -> float:
    """exp(log_value), saturating at +inf past the float range."""
    try:
        return math.exp(log_value)
    except OverflowError:
        return math.inf
