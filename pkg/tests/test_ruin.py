import math

import pytest

from src.ldp_engine.engine import scaling_constant
from src.mc_sim.models import SimConfig
from src.ruin.models import RuinScenario
from src.ruin.ruin import (
    classical_ruin_prob,
    decay_slope,
    premium,
    ruin_prob_direct,
    ruin_prob_exact,
    ruin_prob_mc,
    ruin_set,
    ruin_table,
)
from src.tail_models.models import TailModel
from src.utils.errors import DegenerateDataError, DomainError

PARETO_1 = TailModel.pareto(alpha=1.0)
PARETO_2 = TailModel.pareto(alpha=2.0)
DECADES = (10**3, 10**4, 10**5, 10**6, 10**7)


@pytest.fixture
def scenario() -> RuinScenario:
    return RuinScenario(model=PARETO_2, beta=0.5, n_grid=DECADES)


class TestScenario:
    def test_grid_must_increase(self):
        with pytest.raises(DomainError):
            RuinScenario(model=PARETO_2, beta=0.5, n_grid=(100, 100))
        with pytest.raises(DomainError):
            RuinScenario(model=PARETO_2, beta=0.5, n_grid=(1000, 100))

    def test_grid_needs_n_of_at_least_three(self):
        with pytest.raises(DomainError):
            RuinScenario(model=PARETO_2, beta=0.5, n_grid=(2, 10))

    @pytest.mark.parametrize("beta", [-0.1, math.inf, math.nan])
    def test_beta(self, beta):
        with pytest.raises(DomainError):
            RuinScenario(model=PARETO_2, beta=beta, n_grid=(10,))

    def test_z_threshold(self, scenario):
        assert scenario.log_z_threshold == 1.0


class TestPremium:
    def test_pareto(self):
        # a_n = sqrt(n) for Pareto(2)
        assert premium(PARETO_2, 10**4, 0.5) == pytest.approx(1.0, rel=1e-13)
        assert premium(PARETO_2, 10**4, 0.0) == pytest.approx(scaling_constant(PARETO_2, 10**4) / 10**4, rel=1e-13)

    def test_rejects_negative_beta(self):
        with pytest.raises(DomainError):
            premium(PARETO_2, 100, -1.0)

    def test_saturates_beyond_the_float_range(self):
        # log pi_n = beta log n for Pareto(1), past log(DBL_MAX) at beta = 500
        assert premium(PARETO_1, 100, 500.0) == math.inf
        assert math.isfinite(premium(PARETO_1, 100, 150.0))


class TestRuinProbability:
    def test_closed_form(self, scenario):
        # F̄(a_n n^beta) = n^(-1 - alpha beta)
        for n in DECADES:
            expected = -math.expm1(n * math.log1p(-(float(n) ** -2.0)))
            assert ruin_prob_exact(scenario, n) == pytest.approx(expected, rel=1e-12)

    def test_equivalence_with_the_direct_form(self, scenario):
        for n in DECADES:
            exact = ruin_prob_exact(scenario, n)
            direct = ruin_prob_direct(scenario, n)
            assert abs(exact - direct) <= 1e-14 * direct

    @pytest.mark.parametrize("model", [TailModel.burr(c=1.0, k=2.0), TailModel.logpareto(alpha=1.0, gamma=-0.5)])
    def test_equivalence_for_other_families(self, model):
        scenario = RuinScenario(model=model, beta=0.5, n_grid=DECADES)
        for n in DECADES:
            assert ruin_prob_exact(scenario, n) == pytest.approx(ruin_prob_direct(scenario, n), rel=1e-12)

    def test_classical_premium_does_not_vanish(self):
        assert classical_ruin_prob(TailModel.pareto(alpha=1.0), 10**6) == pytest.approx(1.0 - math.exp(-1.0), abs=1e-3)

    def test_larger_loading_means_less_ruin(self):
        low = RuinScenario(model=PARETO_2, beta=0.25, n_grid=(1000,))
        high = RuinScenario(model=PARETO_2, beta=0.75, n_grid=(1000,))
        assert ruin_prob_exact(high, 1000) < ruin_prob_exact(low, 1000)


class TestDecay:
    def test_slope_matches_minus_alpha_beta(self, scenario):
        fit = decay_slope(scenario)
        assert fit.target == -1.0
        assert -1.02 <= fit.slope <= -0.98
        assert fit.residual_max < 1e-3

    def test_burr_slope(self):
        fit = decay_slope(RuinScenario(model=TailModel.burr(c=1.0, k=2.0), beta=0.5, n_grid=DECADES))
        assert fit.slope == pytest.approx(-1.0, abs=0.02)

    def test_classical_regime_has_no_decay(self):
        with pytest.raises(DomainError):
            decay_slope(RuinScenario(model=PARETO_2, beta=0.0, n_grid=DECADES))

    def test_deep_ruin_stays_finite_in_log_space(self):
        scenario = RuinScenario(model=TailModel.pareto(alpha=10.0), beta=100.0, n_grid=(10**10, 10**12))
        fit = decay_slope(scenario)
        assert fit.slope == pytest.approx(-1000.0, rel=1e-6)

    def test_needs_two_points(self):
        with pytest.raises(DegenerateDataError):
            decay_slope(RuinScenario(model=PARETO_2, beta=0.5, n_grid=(1000,)))


class TestTable:
    def test_without_monte_carlo(self, scenario):
        rows = ruin_table(scenario)
        assert [row.n for row in rows] == list(DECADES)
        assert all(row.rp_mc is None and row.ci_low is None and row.ci_high is None for row in rows)
        assert [row.rp_exact for row in rows] == sorted((row.rp_exact for row in rows), reverse=True)

    def test_with_monte_carlo(self):
        scenario = RuinScenario(model=TailModel.pareto(alpha=1.0), beta=0.25, n_grid=(100, 1000))
        rows = ruin_table(scenario, SimConfig(samples=20_000, seed=3))
        for row in rows:
            assert row.ci_low <= row.rp_mc <= row.ci_high
            assert abs(row.rp_mc - row.rp_exact) < 0.02

    def test_monte_carlo_estimate(self):
        scenario = RuinScenario(model=TailModel.pareto(alpha=1.0), beta=0.25, n_grid=(100,))
        estimate = ruin_prob_mc(scenario, 100, SimConfig(samples=1000, seed=1))
        assert estimate.samples == 1000
        assert 0.0 <= estimate.p_hat <= 1.0


class TestHugeLoading:
    def test_ruin_set_past_the_float_range_is_empty(self):
        assert ruin_set(RuinScenario(model=PARETO_1, beta=800.0, n_grid=(100,))).is_null
        assert ruin_set(RuinScenario(model=PARETO_1, beta=500.0, n_grid=(100,))).intervals[0].low == math.exp(500.0)

    @pytest.mark.parametrize("beta", [500.0, 800.0])
    def test_monte_carlo_sees_no_ruin(self, beta):
        scenario = RuinScenario(model=PARETO_1, beta=beta, n_grid=(100,))
        estimate = ruin_prob_mc(scenario, 100, SimConfig(samples=1000, seed=1))
        assert estimate.hits == 0
        assert estimate.p_hat == 0.0
        assert ruin_prob_exact(scenario, 100) == 0.0

    @pytest.mark.parametrize("beta", [500.0, 800.0])
    def test_table_rows(self, beta):
        scenario = RuinScenario(model=PARETO_1, beta=beta, n_grid=(100, 1000))
        rows = ruin_table(scenario, SimConfig(samples=500, seed=2))
        assert all(row.premium == math.inf for row in rows)
        assert all(row.rp_exact == 0.0 and row.rp_mc == 0.0 for row in rows)

    def test_decay_fit_still_reads_the_log_probabilities(self):
        fit = decay_slope(RuinScenario(model=PARETO_1, beta=800.0, n_grid=(100, 1000)))
        assert fit.slope == pytest.approx(-800.0, rel=1e-6)
