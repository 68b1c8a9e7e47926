"""End-to-end checks of the large deviation behaviour against closed-form oracles."""

import math

import pytest

from src.cli_io.cli import EXIT_OK, main
from src.diagnostics.checks import (
    default_t_grid,
    default_x_grid,
    default_y_grid,
    density_rate_error,
    frechet_limit_error,
    potter_check,
    scaling_exponent_table,
    von_mises_ratio,
)
from src.ldp_engine.engine import (
    convergence_table,
    exact_exceed_prob,
    exact_set_prob,
    log_threshold,
    normalized_log_prob,
)
from src.ldp_engine.models import BorelSubset
from src.mc_sim.models import SimConfig
from src.mc_sim.simulation import brute_force_max_batch, estimate_set_prob, sample_max_batch, sampler_ks_statistic
from src.ruin.models import RuinScenario
from src.ruin.ruin import classical_ruin_prob, decay_slope, ruin_prob_direct, ruin_prob_exact
from src.tail_models.families import log_survival_at
from src.tail_models.models import TailModel

PARETO = TailModel.pareto(alpha=1.0)
BURR = TailModel.burr(c=1.0, k=2.0)
LOG_PARETO_UP = TailModel.logpareto(alpha=1.0, gamma=0.5)
LOG_PARETO_DOWN = TailModel.logpareto(alpha=1.0, gamma=-0.5)
FAMILIES = [PARETO, BURR, LOG_PARETO_UP]
ABOVE_E = BorelSubset.above(math.e)


def pareto_exceed(n: int, x: float) -> float:
    # 1 - (1 - n^(-1 - log x))^n
    return -math.expm1(n * math.log1p(-(float(n) ** (-1.0 - math.log(x)))))


def test_pareto_rate_converges():
    small = normalized_log_prob(PARETO, 10**2, ABOVE_E)
    large = normalized_log_prob(PARETO, 10**6, ABOVE_E)
    assert abs(small.r_n + 1.0) <= 1.1e-3
    assert abs(large.r_n + 1.0) <= 1e-5
    for n in (10**2, 10**4, 10**6):
        assert exact_set_prob(PARETO, n, ABOVE_E) == pytest.approx(pareto_exceed(n, math.e), rel=1e-12)


def test_burr_rate_converges():
    A = BorelSubset.above(math.exp(0.5))
    rows = convergence_table(BURR, [10**k for k in range(3, 9)], A)
    at_million = next(row for row in rows if row.n == 10**6)
    assert abs(at_million.r_n + 0.5) <= 1e-2
    gaps = [abs(row.gap) for row in rows]
    assert all(later <= earlier for earlier, later in zip(gaps, gaps[1:]))


@pytest.mark.parametrize("model", [LOG_PARETO_UP, LOG_PARETO_DOWN])
def test_rate_ignores_the_slowly_varying_part(model):
    assert abs(normalized_log_prob(model, 10**8, ABOVE_E).r_n + 1.0) <= 0.05


def test_ruin_decays_polynomially():
    scenario = RuinScenario(model=TailModel.pareto(alpha=2.0), beta=0.5, n_grid=tuple(10**k for k in range(3, 8)))
    fit = decay_slope(scenario)
    assert -1.02 <= fit.slope <= -0.98
    for n in scenario.n_grid:
        exact, direct = ruin_prob_exact(scenario, n), ruin_prob_direct(scenario, n)
        assert abs(exact - direct) <= 1e-14 * direct


def test_classical_premium_keeps_ruin_away_from_zero():
    assert abs(classical_ruin_prob(PARETO, 10**6) - (1.0 - math.exp(-1.0))) <= 1e-3


@pytest.mark.parametrize("model", FAMILIES)
@pytest.mark.parametrize("n", [10**2, 10**3, 10**4, 10**6])
@pytest.mark.parametrize("x", [1.0, 1.5, math.e, math.e**2])
def test_exceedance_is_below_the_union_bound(model, n, x):
    log_sf = float(log_survival_at(model, log_threshold(model, n, math.log(x))))
    assert exact_exceed_prob(model, n, x) <= n * math.exp(log_sf)


@pytest.mark.parametrize("model", FAMILIES)
def test_scaling_exponent_converges(model):
    report = scaling_exponent_table(model, [10**k for k in range(2, 9)])
    assert report.passed
    if model is PARETO:
        assert report.values == pytest.approx([1.0] * 7, rel=1e-14)


def test_regular_variation_bounds():
    for eps in (0.01, 0.1, 1.0):
        assert potter_check(PARETO, eps, default_t_grid(), default_x_grid(PARETO)).passed
    burr = potter_check(BURR, 0.1, default_t_grid(), default_x_grid(BURR))
    t0 = burr.summary["empirical_t0"]
    assert t0 is not None
    assert not [v for v in burr.violations if v.point[0] >= t0]
    assert abs(von_mises_ratio(BURR, 1e6) - 2.0) <= 3e-6
    assert von_mises_ratio(TailModel.pareto(alpha=2.5), 17.0) == 2.5


@pytest.mark.parametrize("model", FAMILIES)
def test_density_rate_error_shrinks(model):
    sups = [density_rate_error(model, n, math.e, 50).summary["supremum"] for n in (10**4, 10**6, 10**8)]
    assert sups[0] > sups[1] > sups[2]


def test_pareto_density_rate_error_closed_form():
    n = 10**6
    log_n = math.log(n)
    value = density_rate_error(PARETO, n, math.e, 50).values[-1]
    assert value == pytest.approx((1.0 + math.log(log_n)) / log_n, abs=1e-3)
    assert value == pytest.approx(0.2624, abs=1e-3)


def test_frechet_limit():
    report = frechet_limit_error(PARETO, 10**4, default_y_grid())
    assert len(report.grid) == 200
    assert report.summary["supremum"] <= 1e-4


@pytest.mark.slow
def test_sampler_matches_brute_force():
    fast = sample_max_batch(PARETO, 50, SimConfig(samples=100_000, seed=101))
    slow = brute_force_max_batch(PARETO, 50, 100_000, seed=202)
    statistic, critical = sampler_ks_statistic(fast, slow)
    assert critical == pytest.approx(0.00728, abs=1e-5)
    assert statistic < critical


@pytest.mark.slow
def test_monte_carlo_agrees_with_the_exact_engine():
    A = BorelSubset.above(1.5)
    exact = exact_set_prob(PARETO, 10**3, A)
    agreements = 0
    for seed in range(20):
        estimate = estimate_set_prob(PARETO, 10**3, A, SimConfig(samples=100_000, seed=seed))
        agreements += abs(estimate.p_hat - exact) <= 4.0 * estimate.stderr
    assert agreements >= 19


def test_cli_is_byte_reproducible(capsys):
    argv = ["rate", "--model", "burr:c=1,k=2", "--set", "(1.5,inf)", "--n-grid", "1000", "--mc", "--quiet"]
    argv += ["--samples", "4000", "--seed", "99", "--chunk-size", "500", "--format", "json"]
    outputs = []
    for workers in ("1", "3"):
        for _ in range(2):
            assert main(argv + ["--workers", workers]) == EXIT_OK
            outputs.append(capsys.readouterr().out)
    assert len(set(outputs)) == 1
    assert "\"mc\"" in outputs[0]
