"""
Survival, density, quantile and slowly varying part of the implemented families.

Everything is evaluated on log(x) and log(F̄) so that tails far below the
float range (F̄ ~ 1e-300 and smaller) keep full relative precision.
Survival is never computed as 1 - cdf.
"""

import math

import numpy as np
from scipy.special import expit

from src.tail_models.models import TailFamily, TailModel
from src.utils.errors import DomainError, InvalidInputError
from src.utils.numeric_utils import exp_or_inf

BISECTION_MAX_ITER = 200
BISECTION_REL_TOL = 1e-15

ArrayLike = float | np.ndarray


def _as_output(values: np.ndarray) -> ArrayLike:
    return values if values.ndim else float(values)


def _check_finite(name: str, x: np.ndarray) -> None:
    if not np.all(np.isfinite(x)):
        raise InvalidInputError(f"{name} must be finite")


def _safe_log(x: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(x > 0.0, np.log(np.where(x > 0.0, x, 1.0)), -np.inf)


### Family primitives on log(x)


def log_survival_at(model: TailModel, log_x: ArrayLike) -> ArrayLike:
    """log F̄(x) given log(x); log_x = -inf stands for x <= 0."""
    log_x = np.asarray(log_x, dtype=float)
    alpha = model.alpha
    if model.family == TailFamily.PARETO:
        log_xm = math.log(model.param("xm"))
        out = np.where(log_x < log_xm, 0.0, -alpha * (log_x - log_xm))
    elif model.family == TailFamily.BURR:
        c, k = model.param("c"), model.param("k")
        # log(1 + x^c) = logaddexp(0, c log x), which does not overflow for huge x
        out = -k * np.logaddexp(0.0, c * log_x)
    elif model.family == TailFamily.LOG_PARETO:
        gamma = model.param("gamma")
        s = log_x - math.log(model.param("x0"))
        s_pos = np.where(np.isfinite(s), np.maximum(s, 0.0), 0.0)
        out = np.where(s < 0.0, 0.0, -alpha * s_pos + gamma * np.log1p(s_pos))
        out = np.where(np.isposinf(s), -np.inf, out)
    else:
        raise ValueError(f"Invalid tail family {model.family}")
    return _as_output(out)


def von_mises_at(model: TailModel, log_x: ArrayLike) -> ArrayLike:
    """x f(x) / F̄(x) given log(x); zero outside the support."""
    log_x = np.asarray(log_x, dtype=float)
    alpha = model.alpha
    if model.family == TailFamily.PARETO:
        out = np.where(log_x < math.log(model.param("xm")), 0.0, alpha)
    elif model.family == TailFamily.BURR:
        out = alpha * expit(model.param("c") * log_x)
    elif model.family == TailFamily.LOG_PARETO:
        s = log_x - math.log(model.param("x0"))
        s_pos = np.maximum(s, 0.0)
        out = np.where(s < 0.0, 0.0, alpha - model.param("gamma") / (1.0 + s_pos))
    else:
        raise ValueError(f"Invalid tail family {model.family}")
    return _as_output(np.asarray(out, dtype=float))


def log_density_at(model: TailModel, log_x: ArrayLike) -> ArrayLike:
    """log f(x) given log(x), assembled as log F̄ + log(x f / F̄) - log x."""
    log_x = np.asarray(log_x, dtype=float)
    ratio = np.asarray(von_mises_at(model, log_x))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(
            ratio > 0.0,
            np.asarray(log_survival_at(model, log_x)) + np.log(np.where(ratio > 0.0, ratio, 1.0)) - log_x,
            -np.inf,
        )
    return _as_output(out)


def _logpareto_solve(alpha: float, gamma: float, log_p: np.ndarray) -> np.ndarray:
    """
    Solve -alpha * s + gamma * log1p(s) = log_p for s >= 0 by bracketed bisection.

    The bracket is seeded by the Pareto solution -log_p / alpha and the linear
    bound -log_p / (alpha - gamma); the root lies between them for either sign
    of gamma. The upper end of the final bracket is returned, so the survival
    level at the result does not exceed exp(log_p).
    """
    s_pareto = -log_p / alpha
    s_linear = -log_p / (alpha - gamma)
    lo = np.minimum(s_pareto, s_linear)
    hi = np.maximum(s_pareto, s_linear)
    for _ in range(BISECTION_MAX_ITER):
        mid = 0.5 * (lo + hi)
        above = -alpha * mid + gamma * np.log1p(mid) - log_p > 0.0
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
        if np.all(hi - lo <= BISECTION_REL_TOL * np.maximum(hi, 1.0)):
            break
    return hi


def log_inverse_survival(model: TailModel, log_p: ArrayLike) -> ArrayLike:
    """log x such that log F̄(x) = log_p, for log_p <= 0."""
    log_p = np.asarray(log_p, dtype=float)
    if np.any(np.isnan(log_p)) or np.any(log_p > 0.0):
        raise DomainError("log survival level must lie in [-inf, 0]")
    if model.family == TailFamily.PARETO:
        out = math.log(model.param("xm")) - log_p / model.alpha
    elif model.family == TailFamily.BURR:
        c, k = model.param("c"), model.param("k")
        with np.errstate(divide="ignore", over="ignore"):
            # F̄ = (1 + x^c)^-k  =>  x^c = expm1(-log_p / k)
            expm1_term = np.expm1(-log_p / k)
            out = np.where(
                -log_p / k > 30.0,
                (-log_p / k + np.log1p(-np.exp(log_p / k))) / c,
                np.log(expm1_term) / c,
            )
    elif model.family == TailFamily.LOG_PARETO:
        s = _logpareto_solve(model.alpha, model.param("gamma"), np.where(np.isfinite(log_p), log_p, 0.0))
        out = np.where(np.isfinite(log_p), math.log(model.param("x0")) + s, np.inf)
    else:
        raise ValueError(f"Invalid tail family {model.family}")
    return _as_output(np.asarray(out, dtype=float))


### Public operations


def log_survival(model: TailModel, x: ArrayLike) -> ArrayLike:
    x = np.asarray(x, dtype=float)
    _check_finite("x", x)
    return log_survival_at(model, _safe_log(x))


def survival(model: TailModel, x: ArrayLike) -> ArrayLike:
    """F̄(x) = P(X > x); equals 1 below the support."""
    return _as_output(np.exp(np.asarray(log_survival(model, x))))


def log_pdf(model: TailModel, x: ArrayLike) -> ArrayLike:
    x = np.asarray(x, dtype=float)
    _check_finite("x", x)
    return log_density_at(model, _safe_log(x))


def density(model: TailModel, x: ArrayLike) -> ArrayLike:
    """f(x) = -dF̄/dx; zero outside the support."""
    return _as_output(np.exp(np.asarray(log_pdf(model, x))))


def inverse_survival(model: TailModel, log_p: ArrayLike) -> ArrayLike:
    return _as_output(np.exp(np.asarray(log_inverse_survival(model, log_p))))


def quantile(model: TailModel, u: ArrayLike) -> ArrayLike:
    """Left-inverse F^<-(u) for 0 < u < 1, via the survival level 1 - u = exp(log1p(-u))."""
    u = np.asarray(u, dtype=float)
    if np.any(np.isnan(u)) or np.any(u <= 0.0) or np.any(u >= 1.0):
        raise DomainError("quantile level u must lie in (0, 1)")
    return inverse_survival(model, np.log1p(-u))


def slowly_varying_part(model: TailModel, x: float) -> float:
    """L(x) = x^alpha F̄(x)."""
    x = float(x)
    if not math.isfinite(x):
        raise InvalidInputError(f"x must be finite, got {x}")
    if x < model.support_low:
        raise DomainError(f"x={x} lies below the support of {model.describe()}")
    if x == 0.0:
        return 0.0
    log_x = math.log(x)
    return exp_or_inf(model.alpha * log_x + log_survival_at(model, log_x))


def sample_one(model: TailModel, u: float) -> float:
    """Inverse-transform draw of X for a caller-supplied uniform u."""
    return float(quantile(model, float(u)))


def sample(model: TailModel, u: np.ndarray) -> np.ndarray:
    """Vectorized inverse-transform draws for an array of uniforms."""
    return np.asarray(quantile(model, np.asarray(u, dtype=float)))
