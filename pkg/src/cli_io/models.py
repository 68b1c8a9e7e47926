from dataclasses import dataclass, field, fields
from enum import Enum
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, model_validator

from src.diagnostics.models import CheckName, GridPoint
from src.ldp_engine.models import RatePoint
from src.ruin.models import RuinRow


class Verb(Enum):
    RATE = "rate"
    RUIN = "ruin"
    DIAGNOSE = "diagnose"
    SAMPLE = "sample"
    DIST = "dist"


class OutputFormat(Enum):
    CSV = "csv"
    JSON = "json"


class DistQuantity(Enum):
    SURVIVAL = "survival"
    DENSITY = "density"
    QUANTILE = "quantile"
    SLOWLY_VARYING = "L"


class TableKind(Enum):
    RATE = "rate"
    RUIN = "ruin"
    DIAGNOSTICS = "diagnostics"
    SAMPLE = "sample"
    DIST = "dist"


@dataclass(frozen=True)
class DiagnosticRow:
    check: str
    point: GridPoint
    value: float
    violated: bool


@dataclass(frozen=True)
class SampleRow:
    index: int
    max_value: float
    z: float


@dataclass(frozen=True)
class DistRow:
    quantity: str
    at: float
    value: float


TABLE_ROW_TYPES: dict[TableKind, type] = {
    TableKind.RATE: RatePoint,
    TableKind.RUIN: RuinRow,
    TableKind.DIAGNOSTICS: DiagnosticRow,
    TableKind.SAMPLE: SampleRow,
    TableKind.DIST: DistRow,
}


def table_columns(kind: TableKind) -> list[str]:
    return [f.name for f in fields(TABLE_ROW_TYPES[kind])]


@dataclass(frozen=True)
class Table:
    kind: TableKind
    rows: list
    summary: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class GridSpec:
    """`points` log-spaced values in [low, high]."""

    low: float
    high: float
    points: int


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int
    samples: int
    chunk_size: int
    workers: int
    format: OutputFormat
    potter_eps: float
    t_grid: GridSpec
    # None picks a grid above the support of the model.
    x_grid: Optional[GridSpec]
    y_grid: GridSpec
    density_m: float
    density_points: int
    log_enabled: bool
    log_to_file: bool
    log_file_path: Optional[str]


_REQUIRED_FLAGS: dict[Verb, tuple[str, ...]] = {
    Verb.RATE: ("set_spec", "n_grid"),
    Verb.RUIN: ("beta", "n_grid"),
    Verb.DIAGNOSE: ("check",),
    Verb.SAMPLE: ("n",),
    Verb.DIST: ("eval", "at"),
}


class Command(BaseModel):
    """A validated command line invocation. Unset flags fall back to the experiment config."""

    model_config = ConfigDict(extra="forbid", frozen=True, protected_namespaces=())

    verb: Verb
    model_spec: str
    set_spec: Optional[str] = None
    n_grid: Optional[str] = None
    n: Optional[int] = None
    beta: Optional[float] = None
    check: Optional[CheckName] = None
    eps: Optional[float] = None
    t_grid: Optional[str] = None
    x_grid: Optional[str] = None
    y_grid: Optional[str] = None
    m: Optional[float] = None
    points: Optional[int] = None
    eval: Optional[DistQuantity] = None
    at: Optional[str] = None
    mc: bool = False
    samples: Optional[int] = None
    seed: Optional[int] = None
    chunk_size: Optional[int] = None
    workers: Optional[int] = None
    format: Optional[OutputFormat] = None
    out: Optional[str] = None

    @model_validator(mode="after")
    def _check_required_flags(self) -> "Command":
        missing = [name for name in _REQUIRED_FLAGS[self.verb] if getattr(self, name) is None]
        if missing:
            flags = ", ".join("--" + name.replace("_spec", "").replace("_", "-") for name in missing)
            raise ValueError(f"{self.verb.value} requires {flags}")
        return self
