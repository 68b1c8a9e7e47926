"""
Exact distribution of the rescaled maximum Z_n = (X_(n) / a_n)^(alpha / log n).

With t_n(x) = a_n x^(log n / alpha), G_n(x) = P(Z_n <= x) = F^n(t_n(x)). All
n-th powers go through n * log1p(-F̄) and all differences of probabilities near
one go through complements, so the functional (1 / log n) log P(Z_n in A) can be
evaluated for probabilities hundreds of orders of magnitude below 1e-300.
"""

import math
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from src.ldp_engine.models import BorelSubset, DensityTerms, RatePoint
from src.tail_models.families import log_density_at, log_inverse_survival, log_survival_at
from src.tail_models.models import TailModel
from src.utils.errors import DomainError, InvalidInputError
from src.utils.numeric_utils import exp_or_inf, log_diff_exp, log_one_minus_power

# Below this survival level the direct -expm1(n log1p(-p)) form is replaced by its log-space twin.
_DIRECT_FORM_MIN_SURVIVAL = 1e-300
_SCALING_NUDGE_STEPS = 8


def check_sample_size(n: int, minimum: int = 2) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer, float)):
        raise DomainError(f"Sample size must be an integer, got {n!r}")
    if isinstance(n, float) and not n.is_integer():
        raise DomainError(f"Sample size must be an integer, got {n}")
    n = int(n)
    if n < minimum:
        raise DomainError(f"Sample size must be at least {minimum}, got {n}")
    return n


def _check_z(x: float) -> float:
    x = float(x)
    if math.isnan(x) or x == -math.inf:
        raise InvalidInputError(f"x must be a real number, got {x}")
    if x < 1.0:
        raise DomainError(f"x must be at least 1, got {x}")
    return x


@lru_cache(maxsize=4096)
def log_scaling_constant(model: TailModel, n: int) -> float:
    """log a_n with a_n = F^<-(1 - 1/n), solved directly at survival level 1/n."""
    n = check_sample_size(n)
    log_level = -math.log(n)
    log_a = float(log_inverse_survival(model, log_level))
    # F̄(a_n) <= 1/n must hold exactly; step past rounding if the solver lands just short.
    for _ in range(_SCALING_NUDGE_STEPS):
        if log_survival_at(model, log_a) <= log_level:
            break
        log_a = math.nextafter(log_a, math.inf)
    return log_a


def scaling_constant(model: TailModel, n: int) -> float:
    return exp_or_inf(log_scaling_constant(model, check_sample_size(n)))


def log_threshold(model: TailModel, n: int, log_x: float) -> float:
    """log t_n(x) = log a_n + (log n / alpha) log x."""
    n = check_sample_size(n)
    return log_scaling_constant(model, n) + math.log(n) * log_x / model.alpha


def threshold(model: TailModel, n: int, x: float) -> float:
    x = float(x)
    if math.isnan(x):
        raise InvalidInputError("x must not be NaN")
    if x < 0.0:
        raise DomainError(f"threshold needs x >= 0, got {x}")
    if x == 0.0:
        return 0.0
    return exp_or_inf(log_threshold(model, n, math.log(x)))


def z_value(model: TailModel, n: int, max_value: float) -> float:
    """Z_n = (max_value / a_n)^(alpha / log n), the inverse of threshold."""
    n = check_sample_size(n)
    max_value = float(max_value)
    if not math.isfinite(max_value):
        raise InvalidInputError(f"max_value must be finite, got {max_value}")
    if max_value <= 0.0:
        raise DomainError(f"Z_n is undefined for a non-positive maximum, got {max_value}")
    return exp_or_inf(model.alpha / math.log(n) * (math.log(max_value) - log_scaling_constant(model, n)))


def log_z_values(model: TailModel, n: int, log_max: np.ndarray) -> np.ndarray:
    """Vectorized log Z_n from log X_(n)."""
    n = check_sample_size(n)
    return model.alpha / math.log(n) * (np.asarray(log_max, dtype=float) - log_scaling_constant(model, n))


def exceed_prob_from_log_survival(log_sf: float, n: int) -> float:
    """1 - F^n given log F̄, as -expm1(n log1p(-F̄))."""
    p = math.exp(log_sf)
    if p > _DIRECT_FORM_MIN_SURVIVAL:
        return -math.expm1(n * math.log1p(-p)) if p < 1.0 else 1.0
    return math.exp(log_one_minus_power(log_sf, n))


def log_exceed_prob_at(model: TailModel, n: int, log_x: float) -> float:
    """log P(Z_n > x) given log x."""
    return float(log_one_minus_power(log_survival_at(model, log_threshold(model, n, log_x)), n))


def log_exceed_prob(model: TailModel, n: int, x: float) -> float:
    n = check_sample_size(n)
    return log_exceed_prob_at(model, n, math.log(_check_z(x)))


def exact_exceed_prob(model: TailModel, n: int, x: float) -> float:
    """P(Z_n > x) = 1 - F^n(t_n(x)) for x >= 1."""
    n = check_sample_size(n)
    x = _check_z(x)
    log_sf = float(log_survival_at(model, log_threshold(model, n, math.log(x))))
    return exceed_prob_from_log_survival(log_sf, n)


def exact_set_prob(model: TailModel, n: int, A: BorelSubset) -> float:
    """P(Z_n in A) as a sum of P(Z_n > low) - P(Z_n > high) over the intervals of A."""
    n = check_sample_size(n)
    if not isinstance(A, BorelSubset):
        raise DomainError(f"Expected a BorelSubset, got {type(A).__name__}")
    total = 0.0
    for interval in A.intervals:
        if interval.is_null:
            continue
        upper = 0.0 if math.isinf(interval.high) else exact_exceed_prob(model, n, interval.high)
        total += exact_exceed_prob(model, n, interval.low) - upper
    return total


def log_set_prob(model: TailModel, n: int, A: BorelSubset) -> float:
    """log P(Z_n in A); -inf for a Lebesgue-null A."""
    n = check_sample_size(n)
    if not isinstance(A, BorelSubset):
        raise DomainError(f"Expected a BorelSubset, got {type(A).__name__}")
    pieces = []
    for interval in A.intervals:
        if interval.is_null:
            continue
        log_low = log_exceed_prob_at(model, n, math.log(interval.low))
        log_high = -math.inf if math.isinf(interval.high) else log_exceed_prob_at(model, n, math.log(interval.high))
        pieces.append(log_diff_exp(log_low, log_high))
    if not pieces:
        return -math.inf
    return float(logsumexp(pieces))


def log_density(model: TailModel, n: int, x: float) -> float:
    """
    log g_n(x) for the density of Z_n:

        log n + log a_n + log(alpha / log n) + (log n / alpha - 1) log x
              + (n - 1) log F(t_n(x)) + log f(t_n(x))

    Returns -inf when f vanishes at t_n(x).
    """
    n = check_sample_size(n)
    log_x = math.log(_check_z(x))
    log_n = math.log(n)
    log_t = log_threshold(model, n, log_x)
    log_f = float(log_density_at(model, log_t))
    if log_f == -math.inf:
        return -math.inf
    log_cdf = math.log1p(-math.exp(float(log_survival_at(model, log_t))))
    return (
        log_n
        + log_scaling_constant(model, n)
        + math.log(model.alpha / log_n)
        + (log_n / model.alpha - 1.0) * log_x
        + (n - 1) * log_cdf
        + log_f
    )


def log_density_terms(model: TailModel, n: int, x: float) -> DensityTerms:
    n = check_sample_size(n, minimum=3)
    log_x = math.log(_check_z(x))
    log_n = math.log(n)
    alpha = model.alpha
    log_t = log_threshold(model, n, log_x)
    log_cdf = math.log1p(-math.exp(float(log_survival_at(model, log_t))))
    return DensityTerms(
        n=n,
        x=x,
        scale=(log_n + log_scaling_constant(model, n) + math.log(alpha / log_n)) / log_n,
        power=(1.0 / alpha - 1.0 / log_n) * log_x,
        cdf=(n - 1) / log_n * log_cdf,
        tail=float(log_density_at(model, log_t)) / log_n,
        scale_limit=1.0 + 1.0 / alpha,
        power_limit=log_x / alpha,
        cdf_limit=0.0,
        tail_limit=-(1.0 + 1.0 / alpha) * (1.0 + log_x),
    )


def rate_function(x: float) -> float:
    """I(x) = log x on [1, inf)."""
    return math.log(_check_z(x))


def essential_infimum(A: BorelSubset) -> float:
    """ess.inf of log x over A; +inf for a Lebesgue-null A."""
    if not isinstance(A, BorelSubset):
        raise DomainError(f"Expected a BorelSubset, got {type(A).__name__}")
    lows = [interval.low for interval in A.intervals if not interval.is_null]
    if not lows:
        return math.inf
    return math.log(min(lows))


def normalized_log_prob(model: TailModel, n: int, A: BorelSubset) -> RatePoint:
    n = check_sample_size(n, minimum=3)
    target = -essential_infimum(A)
    log_p = log_set_prob(model, n, A)
    r_n = log_p / math.log(n)
    if r_n == -math.inf and target == -math.inf:
        # Null set: both sides of the limit read -inf.
        gap = 0.0
    else:
        gap = r_n - target
    return RatePoint(n=n, prob=math.exp(log_p), r_n=r_n, target=target, gap=gap)


def convergence_table(model: TailModel, n_grid: Sequence[int], A: BorelSubset) -> list[RatePoint]:
    return [normalized_log_prob(model, n, A) for n in n_grid]
