"""
Monte Carlo estimation of P(Z_n in A).

A replicate of X_(n) costs one uniform: since P(X_(n) <= x) = F^n(x), the draw
F^<-(u^(1/n)) has the law of the maximum. u^(1/n) is carried in log space as the
survival level 1 - u^(1/n) = -expm1(log(u) / n), which keeps full resolution
for any n below 2^53.
"""

import math
from typing import Sequence

import numpy as np
from scipy.stats import ks_2samp, norm

from src.ldp_engine.engine import check_sample_size, log_z_values
from src.ldp_engine.models import BorelSubset
from src.mc_sim.chunk_scheduler import ChunkScheduler, ChunkTask
from src.mc_sim.models import Estimate, SimConfig
from src.tail_models.families import log_inverse_survival, quantile
from src.tail_models.models import TailModel
from src.utils.errors import DomainError
from src.utils.logger_utils import log

MAX_SAMPLE_SIZE = 2**53
CONFIDENCE_LEVEL = 0.95
# Below this many hits the normal interval is replaced by the Wilson score interval.
WILSON_MIN_HITS = 10
KS_CRITICAL_1PCT = 1.628


def _check_max_size(n: int) -> int:
    n = check_sample_size(n, minimum=1)
    if n >= MAX_SAMPLE_SIZE:
        raise DomainError(f"n={n} is too large for one-uniform sampling of the maximum")
    return n


def _open_uniforms(rng: np.random.Generator, size: int | tuple[int, ...]) -> np.ndarray:
    """Uniforms (2k + 1) / 2^53 for k < 2^52: all exact doubles in (0, 1), the largest being 1 - 2^-53."""
    k = rng.integers(0, 1 << 52, size=size, dtype=np.uint64)
    return (2 * k + 1).astype(float) * 2.0**-53


def _chunk_rng(seed: int, chunk_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, chunk_index]))


def log_max_from_uniforms(model: TailModel, n: int, u: np.ndarray) -> np.ndarray:
    """log X_(n) for uniforms u, via the survival level -expm1(log(u) / n)."""
    u = np.asarray(u, dtype=float)
    if np.any(np.isnan(u)) or np.any(u <= 0.0) or np.any(u >= 1.0):
        raise DomainError("uniforms must lie in (0, 1)")
    log_level = np.log(-np.expm1(np.log(u) / n))
    return np.asarray(log_inverse_survival(model, log_level))


def sample_max(model: TailModel, n: int, u: float) -> float:
    """One draw of X_(n) from a single uniform u."""
    n = _check_max_size(n)
    return float(np.exp(log_max_from_uniforms(model, n, np.asarray(float(u)))))


def brute_force_max(model: TailModel, n: int, uniforms: Sequence[float]) -> float:
    """max_i F^<-(u_i) over exactly n uniforms."""
    n = check_sample_size(n, minimum=1)
    uniforms = np.asarray(uniforms, dtype=float)
    if uniforms.ndim != 1 or uniforms.size != n:
        raise DomainError(f"brute_force_max needs exactly {n} uniforms, got {uniforms.size}")
    return float(np.max(quantile(model, uniforms)))


def brute_force_max_batch(model: TailModel, n: int, replicates: int, seed: int) -> np.ndarray:
    """replicates draws of X_(n), each the maximum of n inverse-transform draws."""
    n = check_sample_size(n, minimum=1)
    rng = _chunk_rng(seed, 0)
    uniforms = _open_uniforms(rng, (replicates, n))
    return np.max(np.asarray(quantile(model, uniforms)), axis=1)


def _membership(log_z: np.ndarray, A: BorelSubset) -> np.ndarray:
    inside = np.zeros(log_z.shape, dtype=bool)
    for interval in A.intervals:
        if interval.is_null:
            continue
        lo = math.log(interval.low)
        hi = math.log(interval.high) if math.isfinite(interval.high) else math.inf
        above = log_z >= lo if interval.low_closed else log_z > lo
        below = log_z <= hi if interval.high_closed else log_z < hi
        inside |= above & below
    return inside


def _count_chunk(model: TailModel, n: int, A: BorelSubset, seed: int, chunk_index: int, size: int) -> int:
    rng = _chunk_rng(seed, chunk_index)
    log_max = log_max_from_uniforms(model, n, _open_uniforms(rng, size))
    return int(np.count_nonzero(_membership(log_z_values(model, n, log_max), A)))


def _draw_chunk(model: TailModel, n: int, seed: int, chunk_index: int, size: int) -> np.ndarray:
    rng = _chunk_rng(seed, chunk_index)
    return np.exp(log_max_from_uniforms(model, n, _open_uniforms(rng, size)))


def _chunk_tasks(name: str, func, cfg: SimConfig, *args) -> list[ChunkTask]:
    tasks = []
    for chunk_index in range(cfg.n_chunks):
        start, end = cfg.chunk_bounds(chunk_index)
        tasks.append(
            ChunkTask(
                idx=chunk_index,
                name=name,
                func=func,
                args=(*args, cfg.seed, chunk_index, end - start),
            )
        )
    return tasks


def confidence_interval(hits: int, samples: int) -> tuple[float, float, float, float]:
    """
    (p_hat, stderr, ci_low, ci_high) at the 95% level.

    Normal approximation, Wilson score interval when fewer than 10 hits, and the
    degenerate interval [p_hat, p_hat] for a single sample.
    """
    if samples < 1 or not 0 <= hits <= samples:
        raise DomainError(f"Invalid counts: {hits} hits out of {samples}")
    p_hat = hits / samples
    stderr = math.sqrt(p_hat * (1.0 - p_hat) / samples)
    if samples == 1:
        return p_hat, stderr, p_hat, p_hat
    z = float(norm.ppf(0.5 + CONFIDENCE_LEVEL / 2.0))
    if hits < WILSON_MIN_HITS:
        denom = 1.0 + z**2 / samples
        center = (p_hat + z**2 / (2.0 * samples)) / denom
        margin = z * math.sqrt(p_hat * (1.0 - p_hat) / samples + z**2 / (4.0 * samples**2)) / denom
        low, high = max(0.0, center - margin), min(1.0, center + margin)
    else:
        low, high = max(0.0, p_hat - z * stderr), min(1.0, p_hat + z * stderr)
    return p_hat, stderr, min(low, p_hat), max(high, p_hat)


def estimate_set_prob(model: TailModel, n: int, A: BorelSubset, cfg: SimConfig) -> Estimate:
    """Fraction of replicates with Z_n in A, with a 95% confidence interval."""
    n = _check_max_size(n)
    check_sample_size(n)
    if A.is_null:
        hits = 0
    else:
        tasks = _chunk_tasks("count_chunk", _count_chunk, cfg, model, n, A)
        hits = sum(ChunkScheduler(max_workers=cfg.workers).run(tasks))
    p_hat, stderr, ci_low, ci_high = confidence_interval(hits, cfg.samples)
    log(f"MC {model.describe()} n={n} A={A.render()}: {hits}/{cfg.samples} hits")
    return Estimate(p_hat=p_hat, samples=cfg.samples, stderr=stderr, ci_low=ci_low, ci_high=ci_high, hits=hits)


def sample_max_batch(model: TailModel, n: int, cfg: SimConfig) -> np.ndarray:
    """cfg.samples deterministic draws of X_(n), in chunk order."""
    n = _check_max_size(n)
    tasks = _chunk_tasks("draw_chunk", _draw_chunk, cfg, model, n)
    return np.concatenate(ChunkScheduler(max_workers=cfg.workers).run(tasks))


def sampler_ks_statistic(a: np.ndarray, b: np.ndarray) -> tuple[float, float]:
    """Two-sample KS statistic and its critical value at the 1% level."""
    m, k = len(a), len(b)
    result = ks_2samp(a, b)
    return float(result.statistic), KS_CRITICAL_1PCT * math.sqrt((m + k) / (m * k))
