import math

import numpy as np
import pytest
from scipy.stats import kstest

from src.ldp_engine.engine import exact_set_prob, log_z_values
from src.ldp_engine.models import BorelSubset
from src.mc_sim.chunk_scheduler import ChunkScheduler, ChunkTask
from src.mc_sim.models import SimConfig
from src.mc_sim.simulation import (
    _open_uniforms,
    brute_force_max,
    brute_force_max_batch,
    confidence_interval,
    estimate_set_prob,
    log_max_from_uniforms,
    sample_max,
    sample_max_batch,
    sampler_ks_statistic,
)
from src.tail_models.families import quantile
from src.tail_models.models import TailModel
from src.utils.errors import DomainError

PARETO = TailModel.pareto(alpha=1.0)
BURR = TailModel.burr(c=1.0, k=2.0)


class TestSimConfig:
    def test_chunking(self):
        cfg = SimConfig(samples=10, seed=1, chunk_size=4)
        assert cfg.n_chunks == 3
        assert [cfg.chunk_bounds(i) for i in range(3)] == [(0, 4), (4, 8), (8, 10)]

    def test_chunk_size_is_clamped_to_samples(self):
        assert SimConfig(samples=5, seed=0).chunk_size == 5

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"samples": 0, "seed": 1},
            {"samples": 10, "seed": -1},
            {"samples": 10, "seed": 2**64},
            {"samples": 10, "seed": 1, "chunk_size": 0},
            {"samples": 10, "seed": 1, "workers": 0},
        ],
    )
    def test_validation(self, kwargs):
        with pytest.raises(DomainError):
            SimConfig(**kwargs)


class TestChunkScheduler:
    def test_observations_come_back_in_index_order(self):
        tasks = [ChunkTask(idx=i, name="square", func=lambda v: v * v, args=(i,)) for i in reversed(range(6))]
        assert ChunkScheduler(max_workers=3).run(tasks) == [0, 1, 4, 9, 16, 25]

    def test_errors_are_re_raised(self):
        def boom():
            raise DomainError("bad chunk")

        tasks = [
            ChunkTask(idx=0, name="ok", func=lambda: 1, args=()),
            ChunkTask(idx=1, name="boom", func=boom, args=()),
        ]
        with pytest.raises(DomainError, match="bad chunk"):
            ChunkScheduler(max_workers=2).run(tasks)


class TestConfidenceInterval:
    def test_single_sample_is_degenerate(self):
        p_hat, stderr, low, high = confidence_interval(1, 1)
        assert (p_hat, stderr, low, high) == (1.0, 0.0, 1.0, 1.0)

    def test_normal_interval(self):
        p_hat, stderr, low, high = confidence_interval(500, 10_000)
        assert p_hat == 0.05
        assert stderr == pytest.approx(math.sqrt(0.05 * 0.95 / 10_000), rel=1e-14)
        assert low == pytest.approx(0.05 - 1.959963984540054 * stderr, rel=1e-12)
        assert high == pytest.approx(0.05 + 1.959963984540054 * stderr, rel=1e-12)

    def test_wilson_interval_without_hits(self):
        p_hat, stderr, low, high = confidence_interval(0, 1000)
        z2 = 1.959963984540054**2
        assert (p_hat, stderr, low) == (0.0, 0.0, 0.0)
        assert high == pytest.approx(z2 / 1000 / (1.0 + z2 / 1000), rel=1e-12)

    def test_interval_contains_estimate(self):
        for hits in (0, 1, 5, 9, 10, 99, 100):
            p_hat, _, low, high = confidence_interval(hits, 100)
            assert 0.0 <= low <= p_hat <= high <= 1.0

    def test_rejects_impossible_counts(self):
        with pytest.raises(DomainError):
            confidence_interval(5, 4)
        with pytest.raises(DomainError):
            confidence_interval(0, 0)


class _EdgeGenerator:
    """Stands in for np.random.Generator, always returning the same end of the integer range."""

    def __init__(self, top: bool) -> None:
        self.top = top

    def integers(self, low, high, size, dtype):
        return np.full(size, high - 1 if self.top else low, dtype=dtype)


class TestOpenUniforms:
    def test_extremes_stay_inside_the_unit_interval(self):
        top = _open_uniforms(_EdgeGenerator(top=True), 3)
        bottom = _open_uniforms(_EdgeGenerator(top=False), 3)
        assert np.all(top == 1.0 - 2.0**-53)
        assert np.all(bottom == 2.0**-53)

    def test_extremes_map_to_finite_maxima(self):
        u = np.concatenate([_open_uniforms(_EdgeGenerator(top=True), 1), _open_uniforms(_EdgeGenerator(top=False), 1)])
        assert np.all(np.isfinite(log_max_from_uniforms(BURR, 1000, u)))

    def test_draws_are_odd_multiples_of_the_resolution(self):
        u = _open_uniforms(np.random.default_rng(0), 1000)
        scaled = u * 2.0**53
        assert np.all(scaled == np.round(scaled))
        assert np.all(scaled % 2 == 1)


class TestSampleMax:
    def test_single_draw_is_the_quantile(self):
        assert sample_max(PARETO, 1, 0.5) == pytest.approx(2.0, rel=1e-14)

    def test_inverts_the_distribution_of_the_maximum(self):
        n, x = 10, 5.0
        u = 0.8**n
        assert sample_max(PARETO, n, u) == pytest.approx(x, rel=1e-12)

    def test_rejects_bad_inputs(self):
        with pytest.raises(DomainError):
            sample_max(PARETO, 10, 1.0)
        with pytest.raises(DomainError):
            sample_max(PARETO, 0, 0.5)
        with pytest.raises(DomainError):
            sample_max(PARETO, 2**53, 0.5)

    def test_brute_force_max(self):
        uniforms = [0.1, 0.7, 0.4]
        assert brute_force_max(BURR, 3, uniforms) == pytest.approx(quantile(BURR, 0.7), rel=1e-15)
        with pytest.raises(DomainError):
            brute_force_max(BURR, 4, uniforms)

    def test_batch_is_reproducible_and_independent_of_workers(self):
        serial = sample_max_batch(BURR, 50, SimConfig(samples=1000, seed=7, chunk_size=128, workers=1))
        threaded = sample_max_batch(BURR, 50, SimConfig(samples=1000, seed=7, chunk_size=128, workers=4))
        assert serial.shape == (1000,)
        np.testing.assert_array_equal(serial, threaded)

    def test_different_seeds_give_different_draws(self):
        a = sample_max_batch(PARETO, 5, SimConfig(samples=100, seed=1))
        b = sample_max_batch(PARETO, 5, SimConfig(samples=100, seed=2))
        assert not np.array_equal(a, b)

    def test_brute_force_batch_is_reproducible(self):
        a = brute_force_max_batch(PARETO, 10, 200, seed=3)
        b = brute_force_max_batch(PARETO, 10, 200, seed=3)
        np.testing.assert_array_equal(a, b)
        assert np.all(a >= 1.0)


class TestEstimate:
    def test_null_set_has_no_hits(self):
        estimate = estimate_set_prob(PARETO, 100, BorelSubset.point(2.0), SimConfig(samples=100, seed=1))
        assert estimate.hits == 0
        assert estimate.p_hat == 0.0

    def test_hits_above_one(self):
        estimate = estimate_set_prob(PARETO, 100, BorelSubset.above(1.0, closed=True), SimConfig(samples=500, seed=1))
        # P(Z_n >= 1) = 1 - (1 - 1/n)^n, about 0.634
        assert 250 <= estimate.hits <= 380

    def test_independent_of_chunking_threads(self):
        A = BorelSubset.above(1.5)
        one = estimate_set_prob(BURR, 1000, A, SimConfig(samples=20_000, seed=11, chunk_size=3000, workers=1))
        four = estimate_set_prob(BURR, 1000, A, SimConfig(samples=20_000, seed=11, chunk_size=3000, workers=4))
        assert one == four

    @pytest.mark.slow
    def test_agrees_with_the_exact_engine(self):
        A = BorelSubset.above(math.e)
        exact = exact_set_prob(PARETO, 100, A)
        estimate = estimate_set_prob(PARETO, 100, A, SimConfig(samples=200_000, seed=2024))
        assert abs(estimate.p_hat - exact) <= 4.0 * estimate.stderr


class TestSamplerAgainstBruteForce:
    def test_critical_value(self):
        _, critical = sampler_ks_statistic(np.zeros(100_000), np.ones(100_000))
        assert critical == pytest.approx(0.00728, abs=1e-5)

    @pytest.mark.slow
    def test_two_sample_ks(self):
        n = 50
        fast = sample_max_batch(PARETO, n, SimConfig(samples=100_000, seed=5))
        slow = brute_force_max_batch(PARETO, n, 100_000, seed=6)
        statistic, critical = sampler_ks_statistic(fast, slow)
        assert statistic < critical

    @pytest.mark.slow
    def test_one_sample_ks_against_the_exact_law(self):
        n = 1000
        draws = sample_max_batch(BURR, n, SimConfig(samples=50_000, seed=9))
        # P(X_(n) <= x) = (1 - (1 + x)^-2)^n
        result = kstest(draws, lambda x: np.exp(n * np.log1p(-((1.0 + x) ** -2.0))))
        assert result.pvalue > 0.001

    def test_exact_law_matches_brute_force_maxima(self):
        n, replicates = 20, 100_000
        log_z = log_z_values(PARETO, n, np.log(brute_force_max_batch(PARETO, n, replicates, seed=17)))
        xs = np.exp(np.linspace(0.0, 3.0, 61))
        distance = max(abs(np.mean(log_z > math.log(x)) - exact_set_prob(PARETO, n, BorelSubset.above(x))) for x in xs)
        assert distance < 1.628 / math.sqrt(replicates)
