from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class CheckName(Enum):
    POTTER = "potter"
    VON_MISES = "vonmises"
    SCALING = "scaling"
    FRECHET = "frechet"
    DENSITY = "density"
    LOG_TAIL = "logtail"
    DENSITY_TERMS = "terms"


# A grid point is a scalar or, for two-parameter checks such as Potter, a tuple.
GridPoint = float | tuple[float, ...]


@dataclass(frozen=True)
class Violation:
    point: GridPoint
    value: float
    bound: float


@dataclass(frozen=True)
class DiagnosticReport:
    check_name: CheckName
    grid: list[GridPoint]
    values: list[float]
    violations: list[Violation] = field(default_factory=list)
    # Check-specific scalars: supremum, empirical_t0, ...
    summary: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations
