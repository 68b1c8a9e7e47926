import math

import numpy as np

from src.ldp_engine.engine import (
    check_sample_size,
    exceed_prob_from_log_survival,
    log_exceed_prob_at,
    log_scaling_constant,
    log_threshold,
)
from src.ldp_engine.models import BorelSubset
from src.mc_sim.models import Estimate, SimConfig
from src.mc_sim.simulation import estimate_set_prob
from src.ruin.models import DecayFit, RuinRow, RuinScenario
from src.tail_models.families import log_survival_at
from src.tail_models.models import TailModel
from src.utils.errors import DegenerateDataError, DomainError
from src.utils.logger_utils import log
from src.utils.numeric_utils import exp_or_inf


def premium(model: TailModel, n: int, beta: float) -> float:
    """pi_n = a_n n^(beta - 1)."""
    n = check_sample_size(n)
    if not math.isfinite(beta) or beta < 0.0:
        raise DomainError(f"beta must be a non-negative finite number, got {beta}")
    return exp_or_inf(log_scaling_constant(model, n) + (beta - 1.0) * math.log(n))


def ruin_prob_exact(scenario: RuinScenario, n: int) -> float:
    """RP_n = P(Z_n > e^(alpha beta)), through the exact engine."""
    n = check_sample_size(n)
    log_sf = float(log_survival_at(scenario.model, log_threshold(scenario.model, n, scenario.log_z_threshold)))
    return exceed_prob_from_log_survival(log_sf, n)


def log_ruin_prob_exact(scenario: RuinScenario, n: int) -> float:
    return log_exceed_prob_at(scenario.model, check_sample_size(n), scenario.log_z_threshold)


def ruin_prob_direct(scenario: RuinScenario, n: int) -> float:
    """RP_n = 1 - F(a_n n^beta)^n, evaluated without the Z_n change of variables."""
    n = check_sample_size(n)
    log_capital = log_scaling_constant(scenario.model, n) + scenario.beta * math.log(n)
    return exceed_prob_from_log_survival(float(log_survival_at(scenario.model, log_capital)), n)


def classical_ruin_prob(model: TailModel, n: int) -> float:
    """RP_n under the classical premium a_n / n; tends to 1 - exp(-1)."""
    return ruin_prob_exact(RuinScenario(model=model, beta=0.0, n_grid=()), n)


def ruin_set(scenario: RuinScenario) -> BorelSubset:
    """(e^(alpha beta), inf); empty once e^(alpha beta) leaves the float range."""
    low = exp_or_inf(scenario.log_z_threshold)
    return BorelSubset.above(low) if math.isfinite(low) else BorelSubset()


def ruin_prob_mc(scenario: RuinScenario, n: int, cfg: SimConfig) -> Estimate:
    return estimate_set_prob(scenario.model, n, ruin_set(scenario), cfg)


def decay_slope(scenario: RuinScenario) -> DecayFit:
    """Least-squares slope of log RP_n against log n over the scenario grid."""
    if scenario.beta <= 0.0:
        raise DomainError("The polynomial decay regime needs beta > 0")
    if len(scenario.n_grid) < 2:
        raise DegenerateDataError("A decay fit needs at least two portfolio sizes")
    log_n = np.log(np.asarray(scenario.n_grid, dtype=float))
    log_rp = np.asarray([log_ruin_prob_exact(scenario, n) for n in scenario.n_grid])
    if not np.all(np.isfinite(log_rp)):
        raise DegenerateDataError(f"Zero ruin probability on the grid {scenario.n_grid}")
    slope, intercept = np.polyfit(log_n, log_rp, deg=1)
    residual_max = float(np.max(np.abs(slope * log_n + intercept - log_rp)))
    fit = DecayFit(
        slope=float(slope),
        intercept=float(intercept),
        target=-scenario.model.alpha * scenario.beta,
        residual_max=residual_max,
    )
    log(f"Decay fit {scenario.model.describe()} beta={scenario.beta}: slope {fit.slope:.6f} vs {fit.target:.6f}")
    return fit


def ruin_table(scenario: RuinScenario, cfg: SimConfig | None = None) -> list[RuinRow]:
    rows = []
    for n in scenario.n_grid:
        estimate = ruin_prob_mc(scenario, n, cfg) if cfg is not None else None
        rows.append(
            RuinRow(
                n=n,
                premium=premium(scenario.model, n, scenario.beta),
                rp_exact=ruin_prob_exact(scenario, n),
                rp_mc=estimate.p_hat if estimate else None,
                ci_low=estimate.ci_low if estimate else None,
                ci_high=estimate.ci_high if estimate else None,
            )
        )
    return rows
