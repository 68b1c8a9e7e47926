from dataclasses import asdict

import numpy as np

from src.cli_io.emitter import diagnostic_rows
from src.cli_io.models import (
    Command,
    DistQuantity,
    DistRow,
    ExperimentConfig,
    GridSpec,
    SampleRow,
    Table,
    TableKind,
    Verb,
)
from src.cli_io.parsers import parse_grid_spec, parse_model_spec, parse_n_grid, parse_real, parse_set_spec
from src.diagnostics.checks import (
    default_x_grid,
    density_rate_error,
    density_terms_report,
    frechet_limit_error,
    log_grid,
    log_tail_index,
    potter_check,
    scaling_exponent_table,
    von_mises_report,
)
from src.diagnostics.models import CheckName, DiagnosticReport
from src.ldp_engine.engine import convergence_table, log_z_values
from src.mc_sim.models import SimConfig
from src.mc_sim.simulation import estimate_set_prob, sample_max_batch
from src.ruin.models import RuinScenario
from src.ruin.ruin import decay_slope, ruin_table
from src.tail_models.families import density, quantile, slowly_varying_part, survival
from src.tail_models.models import TailModel
from src.utils.logger_utils import log

DEFAULT_SCALING_N_GRID = "10^2..10^8"
DEFAULT_FRECHET_N = 10**4
DEFAULT_DENSITY_N = 10**6


def sim_config(command: Command, config: ExperimentConfig) -> SimConfig:
    return SimConfig(
        samples=command.samples if command.samples is not None else config.samples,
        seed=command.seed if command.seed is not None else config.seed,
        chunk_size=command.chunk_size if command.chunk_size is not None else config.chunk_size,
        workers=command.workers if command.workers is not None else config.workers,
    )


def _grid(flag: str | None, configured: GridSpec | None) -> list[float] | None:
    spec = parse_grid_spec(flag) if flag is not None else configured
    if spec is None:
        return None
    return log_grid(spec.low, spec.high, spec.points)


def _run_rate(model: TailModel, command: Command, config: ExperimentConfig) -> Table:
    A = parse_set_spec(command.set_spec)
    n_grid = parse_n_grid(command.n_grid)
    rows = convergence_table(model, n_grid, A)
    summary = {"model": model.describe(), "set": A.render()}
    if command.mc:
        cfg = sim_config(command, config)
        estimates = []
        for row in rows:
            estimate = estimate_set_prob(model, row.n, A, cfg)
            estimates.append({"n": row.n, **asdict(estimate)})
        summary["mc"] = estimates
    return Table(kind=TableKind.RATE, rows=rows, summary=summary)


def _run_ruin(model: TailModel, command: Command, config: ExperimentConfig) -> Table:
    scenario = RuinScenario(model=model, beta=command.beta, n_grid=tuple(parse_n_grid(command.n_grid)))
    rows = ruin_table(scenario, sim_config(command, config) if command.mc else None)
    summary = {"model": model.describe(), "beta": scenario.beta}
    if scenario.beta > 0.0 and len(scenario.n_grid) >= 2:
        summary.update(asdict(decay_slope(scenario)))
    return Table(kind=TableKind.RUIN, rows=rows, summary=summary)


def _diagnose(model: TailModel, command: Command, config: ExperimentConfig) -> DiagnosticReport:
    x_grid = _grid(command.x_grid, config.x_grid) or default_x_grid(model)
    M = command.m if command.m is not None else config.density_m
    points = command.points if command.points is not None else config.density_points

    if command.check == CheckName.POTTER:
        eps = command.eps if command.eps is not None else config.potter_eps
        return potter_check(model, eps, _grid(command.t_grid, config.t_grid), x_grid)
    if command.check == CheckName.VON_MISES:
        return von_mises_report(model, x_grid)
    if command.check == CheckName.SCALING:
        return scaling_exponent_table(model, parse_n_grid(command.n_grid or DEFAULT_SCALING_N_GRID))
    if command.check == CheckName.FRECHET:
        n = command.n if command.n is not None else DEFAULT_FRECHET_N
        return frechet_limit_error(model, n, _grid(command.y_grid, config.y_grid))
    if command.check == CheckName.DENSITY:
        n = command.n if command.n is not None else DEFAULT_DENSITY_N
        return density_rate_error(model, n, M, points)
    if command.check == CheckName.DENSITY_TERMS:
        n = command.n if command.n is not None else DEFAULT_DENSITY_N
        return density_terms_report(model, n, M, points)
    return log_tail_index(model, x_grid)


def _run_diagnose(model: TailModel, command: Command, config: ExperimentConfig) -> Table:
    report = _diagnose(model, command, config)
    log(f"{report.check_name.value} on {model.describe()}: {len(report.violations)} violation(s)")
    summary = {"passed": report.passed, "violations": len(report.violations), **report.summary}
    return Table(kind=TableKind.DIAGNOSTICS, rows=diagnostic_rows(report), summary=summary)


def _run_sample(model: TailModel, command: Command, config: ExperimentConfig) -> Table:
    draws = sample_max_batch(model, command.n, sim_config(command, config))
    z = np.exp(log_z_values(model, command.n, np.log(draws)))
    rows = [SampleRow(index=i, max_value=float(x), z=float(v)) for i, (x, v) in enumerate(zip(draws, z))]
    return Table(kind=TableKind.SAMPLE, rows=rows, summary={"model": model.describe(), "n": command.n})


def _run_dist(model: TailModel, command: Command, config: ExperimentConfig) -> Table:
    at = parse_real(command.at)
    evaluators = {
        DistQuantity.SURVIVAL: survival,
        DistQuantity.DENSITY: density,
        DistQuantity.QUANTILE: quantile,
        DistQuantity.SLOWLY_VARYING: slowly_varying_part,
    }
    value = float(evaluators[command.eval](model, at))
    return Table(
        kind=TableKind.DIST,
        rows=[DistRow(quantity=command.eval.value, at=at, value=value)],
        summary={"model": model.describe()},
    )


_VERB_RUNNERS = {
    Verb.RATE: _run_rate,
    Verb.RUIN: _run_ruin,
    Verb.DIAGNOSE: _run_diagnose,
    Verb.SAMPLE: _run_sample,
    Verb.DIST: _run_dist,
}


def run_command(command: Command, config: ExperimentConfig) -> Table:
    model = parse_model_spec(command.model_spec)
    log(f"{command.verb.value} {model.describe()}")
    return _VERB_RUNNERS[command.verb](model, command, config)
