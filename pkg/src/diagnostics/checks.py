"""
Finite-n diagnostics of the regular-variation machinery behind the LDP.

The limit statements quantify over all large t (or n); a tool can only sample,
so every check takes an explicit grid. Defaults are declared below and are
reproducible.
"""

import math
from typing import Sequence

import numpy as np

from src.diagnostics.models import CheckName, DiagnosticReport, Violation
from src.ldp_engine.engine import check_sample_size, log_density, log_density_terms, log_scaling_constant
from src.tail_models.families import log_survival_at, von_mises_at
from src.tail_models.models import TailModel
from src.utils.errors import DomainError, InvalidInputError
from src.utils.numeric_utils import power_cdf_log

# Absolute slack for "non-increasing" checks, so exactly-constant sequences survive rounding.
MONOTONE_SLACK = 1e-12

DEFAULT_T_GRID = (1.0, 1e6, 10)
DEFAULT_X_GRID_HIGH = 1e3
DEFAULT_X_GRID_POINTS = 10
DEFAULT_Y_GRID = (0.1, 10.0, 200)


def log_grid(low: float, high: float, points: int) -> list[float]:
    if low <= 0.0 or high < low or points < 1:
        raise DomainError(f"Invalid log grid [{low}, {high}] with {points} points")
    return [float(v) for v in np.geomspace(low, high, points)]


def default_t_grid() -> list[float]:
    return log_grid(*DEFAULT_T_GRID)


def default_x_grid(model: TailModel) -> list[float]:
    return log_grid(max(model.support_low, 1.0) * 1.1, DEFAULT_X_GRID_HIGH, DEFAULT_X_GRID_POINTS)


def default_y_grid() -> list[float]:
    return log_grid(*DEFAULT_Y_GRID)


def _require_grid(name: str, grid: Sequence[float]) -> list[float]:
    if len(grid) == 0:
        raise DomainError(f"{name} must not be empty")
    values = [float(v) for v in grid]
    if not all(math.isfinite(v) for v in values):
        raise InvalidInputError(f"{name} must contain finite values only")
    return values


def _monotone_violations(grid: Sequence, deviations: Sequence[float]) -> list[Violation]:
    """Points where a deviation grows compared with its predecessor."""
    violations = []
    for i in range(1, len(deviations)):
        if deviations[i] > deviations[i - 1] + MONOTONE_SLACK:
            violations.append(Violation(point=grid[i], value=deviations[i], bound=deviations[i - 1]))
    return violations


def potter_check(
    model: TailModel,
    eps: float,
    t_grid: Sequence[float],
    x_grid: Sequence[float],
) -> DiagnosticReport:
    """
    Test (1 - eps) x^(-alpha - eps) <= F̄(tx) / F̄(t) <= (1 + eps) x^(-alpha + eps) on the grid.

    summary["empirical_t0"] is the smallest grid t above which no violation
    occurs. It is read off the grid and is not a certified bound.
    """
    eps = float(eps)
    if not eps > 0.0:
        raise DomainError(f"eps must be positive, got {eps}")
    ts = sorted(_require_grid("t_grid", t_grid))
    xs = sorted(_require_grid("x_grid", x_grid))
    if ts[0] <= 0.0 or xs[0] <= 0.0:
        raise DomainError("Potter grids must be positive")

    alpha = model.alpha
    grid, values, violations = [], [], []
    clean_from = None
    for t in ts:
        log_t = math.log(t)
        t_clean = True
        for x in xs:
            log_x = math.log(x)
            ratio = math.exp(float(log_survival_at(model, log_t + log_x)) - float(log_survival_at(model, log_t)))
            lower = (1.0 - eps) * x ** (-alpha - eps)
            upper = (1.0 + eps) * x ** (-alpha + eps)
            grid.append((t, x))
            values.append(ratio)
            if ratio < lower or ratio > upper:
                t_clean = False
                violations.append(Violation(point=(t, x), value=ratio, bound=lower if ratio < lower else upper))
        if not t_clean:
            clean_from = None
        elif clean_from is None:
            clean_from = t

    return DiagnosticReport(
        check_name=CheckName.POTTER,
        grid=grid,
        values=values,
        violations=violations,
        summary={"eps": eps, "empirical_t0": clean_from},
    )


def von_mises_ratio(model: TailModel, x: float) -> float:
    """x f(x) / F̄(x), which tends to alpha."""
    x = float(x)
    if not math.isfinite(x):
        raise InvalidInputError(f"x must be finite, got {x}")
    if x <= model.support_low:
        raise DomainError(f"x={x} is not in the interior of the support of {model.describe()}")
    log_x = math.log(x)
    if float(log_survival_at(model, log_x)) == -math.inf:
        raise DomainError(f"F̄({x}) = 0; the ratio is undefined")
    return float(von_mises_at(model, log_x))


def von_mises_report(model: TailModel, x_grid: Sequence[float]) -> DiagnosticReport:
    xs = sorted(_require_grid("x_grid", x_grid))
    values = [abs(von_mises_ratio(model, x) - model.alpha) for x in xs]
    return DiagnosticReport(
        check_name=CheckName.VON_MISES,
        grid=xs,
        values=values,
        violations=_monotone_violations(xs, values),
        summary={"alpha": model.alpha, "last_ratio": model.alpha + values[-1] if values else None},
    )


def scaling_exponent_table(model: TailModel, n_grid: Sequence[int]) -> DiagnosticReport:
    """log a_n / log n along the grid; passes when |value - 1/alpha| never grows."""
    if len(n_grid) == 0:
        raise DomainError("n_grid must not be empty")
    ns = sorted(check_sample_size(n) for n in n_grid)
    values = [log_scaling_constant(model, n) / math.log(n) for n in ns]
    limit = 1.0 / model.alpha
    deviations = [abs(v - limit) for v in values]
    return DiagnosticReport(
        check_name=CheckName.SCALING,
        grid=[float(n) for n in ns],
        values=values,
        violations=_monotone_violations([float(n) for n in ns], deviations),
        summary={"limit": limit, "last_deviation": deviations[-1]},
    )


def frechet_limit_error(model: TailModel, n: int, y_grid: Sequence[float]) -> DiagnosticReport:
    """|F^n(a_n y) - exp(-y^-alpha)| along the grid."""
    n = check_sample_size(n)
    ys = np.asarray(sorted(_require_grid("y_grid", y_grid)))
    if ys[0] <= 0.0:
        raise DomainError("y_grid must be positive")
    log_sf = np.asarray(log_survival_at(model, log_scaling_constant(model, n) + np.log(ys)))
    cdf_n = np.exp(np.asarray(power_cdf_log(log_sf, n)))
    frechet = np.exp(-(ys ** -model.alpha))
    errors = np.abs(cdf_n - frechet)
    worst = int(np.argmax(errors))
    return DiagnosticReport(
        check_name=CheckName.FRECHET,
        grid=[float(y) for y in ys],
        values=[float(e) for e in errors],
        summary={"n": n, "supremum": float(errors[worst]), "argsup": float(ys[worst])},
    )


def _uniform_grid(M: float, points: int) -> list[float]:
    M = float(M)
    if not (math.isfinite(M) and M > 1.0):
        raise DomainError(f"M must be a finite number above 1, got {M}")
    if points < 1:
        raise DomainError(f"points must be positive, got {points}")
    return [float(v) for v in np.linspace(1.0, M, points)]


def density_rate_error(model: TailModel, n: int, M: float, points: int) -> DiagnosticReport:
    """|log g_n(x) / log n + log x| on a uniform grid of [1, M]."""
    n = check_sample_size(n, minimum=3)
    xs = _uniform_grid(M, points)
    log_n = math.log(n)
    values = [abs(log_density(model, n, x) / log_n + math.log(x)) for x in xs]
    worst = int(np.argmax(values))
    return DiagnosticReport(
        check_name=CheckName.DENSITY,
        grid=xs,
        values=values,
        summary={"n": n, "M": float(M), "supremum": values[worst], "argsup": xs[worst]},
    )


def density_terms_report(model: TailModel, n: int, M: float, points: int) -> DiagnosticReport:
    """Largest deviation of each term of (1 / log n) log g_n(x) from its limit over [1, M]."""
    n = check_sample_size(n, minimum=3)
    xs = _uniform_grid(M, points)
    per_term: dict[str, float] = {"scale": 0.0, "power": 0.0, "cdf": 0.0, "tail": 0.0}
    values = []
    for x in xs:
        deviations = log_density_terms(model, n, x).deviations()
        values.append(max(deviations.values()))
        for key, value in deviations.items():
            per_term[key] = max(per_term[key], value)
    return DiagnosticReport(
        check_name=CheckName.DENSITY_TERMS,
        grid=xs,
        values=values,
        summary={"n": n, "M": float(M), **{f"max_{key}": value for key, value in per_term.items()}},
    )


def log_tail_index(model: TailModel, x_grid: Sequence[float]) -> DiagnosticReport:
    """log F̄(x) / log x along the grid, which tends to -alpha."""
    xs = sorted(_require_grid("x_grid", x_grid))
    if xs[0] <= max(model.support_low, 1.0):
        raise DomainError("x_grid must lie above max(1, support_low)")
    values = [float(log_survival_at(model, math.log(x))) / math.log(x) for x in xs]
    deviations = [abs(v + model.alpha) for v in values]
    return DiagnosticReport(
        check_name=CheckName.LOG_TAIL,
        grid=xs,
        values=values,
        violations=_monotone_violations(xs, deviations),
        summary={"limit": -model.alpha, "last_deviation": deviations[-1]},
    )
