import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from src.utils.errors import DomainError


@dataclass(frozen=True)
class Interval:
    low: float
    high: float
    low_closed: bool = False
    high_closed: bool = False

    def __post_init__(self) -> None:
        if math.isnan(self.low) or math.isnan(self.high):
            raise DomainError("Interval endpoints must not be NaN")
        if self.low < 1.0:
            raise DomainError(f"Interval {self} reaches below 1; only subsets of [1, inf) are allowed")
        if math.isinf(self.low):
            raise DomainError("Interval lower endpoint must be finite")
        if self.low > self.high:
            raise DomainError(f"Interval lower endpoint {self.low} exceeds upper endpoint {self.high}")
        if math.isinf(self.high) and self.high_closed:
            raise DomainError("An interval cannot be closed at +inf")

    @property
    def is_null(self) -> bool:
        """Lebesgue-null (a single point or empty)."""
        return self.low == self.high

    def contains(self, x: float) -> bool:
        above = x >= self.low if self.low_closed else x > self.low
        below = x <= self.high if self.high_closed else x < self.high
        return above and below

    def render(self) -> str:
        left = "[" if self.low_closed else "("
        right = "]" if self.high_closed else ")"
        high = "inf" if math.isinf(self.high) else f"{self.high:.17g}"
        return f"{left}{self.low:.17g},{high}{right}"


def _overlaps_or_touches(a: Interval, b: Interval) -> bool:
    """a.low <= b.low is assumed."""
    if b.low < a.high:
        return True
    return b.low == a.high and (a.high_closed or b.low_closed)


def _merge(a: Interval, b: Interval) -> Interval:
    if b.low == a.low:
        low_closed = a.low_closed or b.low_closed
    else:
        low_closed = a.low_closed
    if b.high > a.high:
        high, high_closed = b.high, b.high_closed
    elif b.high < a.high:
        high, high_closed = a.high, a.high_closed
    else:
        high, high_closed = a.high, a.high_closed or b.high_closed
    return Interval(a.low, high, low_closed, high_closed)


@dataclass(frozen=True)
class BorelSubset:
    """
    A finite union of intervals inside [1, inf).

    Intervals are sorted and merged on construction, so two subsets describing
    the same union compare equal.
    """

    intervals: tuple[Interval, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "intervals", self.normalize(self.intervals))

    @staticmethod
    def normalize(intervals: Iterable[Interval]) -> tuple[Interval, ...]:
        ordered = sorted(intervals, key=lambda item: (item.low, not item.low_closed, item.high))
        merged: list[Interval] = []
        for interval in ordered:
            if interval.is_null and not (interval.low_closed and interval.high_closed):
                # (a, a), [a, a) and (a, a] are empty
                continue
            if merged and _overlaps_or_touches(merged[-1], interval):
                merged[-1] = _merge(merged[-1], interval)
            else:
                merged.append(interval)
        return tuple(merged)

    @classmethod
    def from_intervals(cls, intervals: Sequence[Interval]) -> "BorelSubset":
        return cls(tuple(intervals))

    @classmethod
    def above(cls, low: float, closed: bool = False) -> "BorelSubset":
        """The ray (low, inf) or [low, inf)."""
        return cls((Interval(low, math.inf, closed, False),))

    @classmethod
    def point(cls, x: float) -> "BorelSubset":
        return cls((Interval(x, x, True, True),))

    @property
    def is_null(self) -> bool:
        return all(interval.is_null for interval in self.intervals)

    def contains(self, x: float) -> bool:
        return any(interval.contains(x) for interval in self.intervals)

    def render(self) -> str:
        return "U".join(interval.render() for interval in self.intervals) or "{}"


@dataclass(frozen=True)
class RatePoint:
    """One row of a convergence table for (1 / log n) log P(Z_n in A)."""

    n: int
    prob: float
    # log P / log n, dimensionless
    r_n: float
    # -ess.inf over A of log x
    target: float
    gap: float


@dataclass(frozen=True)
class DensityTerms:
    """
    Decomposition of (1 / log n) log g_n(x) into four terms, each with its n -> inf limit.

    scale: (1 / log n) log(n a_n alpha / log n)       -> 1 + 1/alpha
    power: (1/alpha - 1/log n) log x                    -> log(x) / alpha
    cdf:   ((n - 1) / log n) log F(t_n(x))              -> 0
    tail:  (1 / log n) log f(t_n(x))                    -> -(1 + 1/alpha)(1 + log x)
    """

    n: int
    x: float
    scale: float
    power: float
    cdf: float
    tail: float
    scale_limit: float
    power_limit: float
    cdf_limit: float
    tail_limit: float

    @property
    def total(self) -> float:
        return self.scale + self.power + self.cdf + self.tail

    def deviations(self) -> dict[str, float]:
        return {
            "scale": abs(self.scale - self.scale_limit),
            "power": abs(self.power - self.power_limit),
            "cdf": abs(self.cdf - self.cdf_limit),
            "tail": abs(self.tail - self.tail_limit),
        }
