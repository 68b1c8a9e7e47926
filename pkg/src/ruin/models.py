import math
from dataclasses import dataclass
from typing import Optional

from src.tail_models.models import TailModel
from src.utils.errors import DomainError


@dataclass(frozen=True)
class RuinScenario:
    """
    A maximum-claim portfolio: n policies with claims drawn from model and premium
    pi_n = a_n n^(beta - 1) per policy. Ruin means X_(n) > n pi_n = a_n n^beta.

    beta = 0 is the classical extreme-value premium a_n / n, under which ruin
    does not vanish; decay fits require beta > 0.
    """

    model: TailModel
    beta: float
    n_grid: tuple[int, ...]

    def __post_init__(self) -> None:
        if not math.isfinite(self.beta) or self.beta < 0.0:
            raise DomainError(f"beta must be a non-negative finite number, got {self.beta}")
        grid = tuple(int(n) for n in self.n_grid)
        if any(n < 3 for n in grid):
            raise DomainError(f"Portfolio sizes must be at least 3, got {grid}")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise DomainError(f"n_grid must be strictly increasing, got {grid}")
        object.__setattr__(self, "n_grid", grid)

    @property
    def log_z_threshold(self) -> float:
        """log of the Z_n threshold e^(alpha beta) equivalent to ruin."""
        return self.model.alpha * self.beta


@dataclass(frozen=True)
class DecayFit:
    slope: float
    intercept: float
    # -alpha * beta
    target: float
    residual_max: float


@dataclass(frozen=True)
class RuinRow:
    n: int
    premium: float
    rp_exact: float
    rp_mc: Optional[float] = None
    ci_low: Optional[float] = None
    ci_high: Optional[float] = None
