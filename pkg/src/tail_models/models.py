import math
from dataclasses import dataclass
from enum import Enum

from src.utils.errors import DomainError


class TailFamily(Enum):
    PARETO = "pareto"
    BURR = "burr"
    LOG_PARETO = "logpareto"


# Parameter names accepted per family, in canonical order.
FAMILY_PARAMS: dict[TailFamily, tuple[str, ...]] = {
    TailFamily.PARETO: ("alpha", "xm"),
    TailFamily.BURR: ("c", "k"),
    TailFamily.LOG_PARETO: ("alpha", "gamma", "x0"),
}


@dataclass(frozen=True)
class TailModel:
    """
    A heavy-tailed law with survival function x^-alpha * L(x).

    Pareto:    F̄(x) = (x / xm)^-alpha,                          x >= xm
    Burr:      F̄(x) = (1 + x^c)^-k,  alpha = c * k,               x > 0
    LogPareto: F̄(x) = (x / x0)^-alpha * (1 + log(x / x0))^gamma,  x >= x0, |gamma| < alpha
    """

    family: TailFamily
    alpha: float
    # Family-specific parameters as (name, value) pairs, see FAMILY_PARAMS.
    params: tuple[tuple[str, float], ...]
    support_low: float

    def __post_init__(self) -> None:
        values = dict(self.params)
        expected = FAMILY_PARAMS[self.family]
        if set(values) != set(expected):
            raise DomainError(f"{self.family.value} expects parameters {expected}, got {tuple(values)}")
        for name, value in values.items():
            if not math.isfinite(value):
                raise DomainError(f"{self.family.value} parameter {name} must be finite, got {value}")
            if name != "gamma" and value <= 0.0:
                raise DomainError(f"{self.family.value} parameter {name} must be positive, got {value}")
        if not math.isfinite(self.alpha) or self.alpha <= 0.0:
            raise DomainError(f"Tail index alpha must be positive, got {self.alpha}")

        if self.family == TailFamily.BURR:
            if not math.isclose(self.alpha, values["c"] * values["k"], rel_tol=1e-12):
                raise DomainError(f"Burr tail index must equal c * k, got alpha={self.alpha}")
        elif values["alpha"] != self.alpha:
            raise DomainError("alpha field and alpha parameter disagree")

        if self.family == TailFamily.LOG_PARETO and abs(values["gamma"]) >= self.alpha:
            raise DomainError(f"LogPareto requires |gamma| < alpha, got gamma={values['gamma']}, alpha={self.alpha}")

    @classmethod
    def pareto(cls, alpha: float, xm: float = 1.0) -> "TailModel":
        return cls(TailFamily.PARETO, float(alpha), (("alpha", float(alpha)), ("xm", float(xm))), float(xm))

    @classmethod
    def burr(cls, c: float, k: float) -> "TailModel":
        return cls(TailFamily.BURR, float(c) * float(k), (("c", float(c)), ("k", float(k))), 0.0)

    @classmethod
    def logpareto(cls, alpha: float, gamma: float, x0: float = 1.0) -> "TailModel":
        params = (("alpha", float(alpha)), ("gamma", float(gamma)), ("x0", float(x0)))
        return cls(TailFamily.LOG_PARETO, float(alpha), params, float(x0))

    def param(self, name: str) -> float:
        for key, value in self.params:
            if key == name:
                return value
        raise KeyError(f"{self.family.value} has no parameter {name}")

    def describe(self) -> str:
        args = ",".join(f"{key}={value:g}" for key, value in self.params)
        return f"{self.family.value}:{args}"
