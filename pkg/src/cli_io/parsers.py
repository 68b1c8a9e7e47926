"""
Grammars of the command line surface.

    model spec:  family:key=value[,key=value]*        pareto:alpha=1.5,xm=1
    set spec:    interval[Uinterval]*                 (2,3]U[5,inf)
    n grid:      item[,item]*                         100,1e4,10^6,10^2..10^8
    real:        decimal literal, e, e^k, inf         2.5, e, e^-0.5, inf
"""

import math
import re
from decimal import Decimal, InvalidOperation

from src.cli_io.models import GridSpec
from src.ldp_engine.models import BorelSubset, Interval
from src.tail_models.models import FAMILY_PARAMS, TailFamily, TailModel
from src.utils.errors import DomainError, ParseError
from src.utils.numeric_utils import exp_or_inf

_DECIMAL = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?")
_POWER = re.compile(r"(\d+)\^(\d+)")
_DECADE_RANGE = re.compile(r"10\^(\d+)\.\.10\^(\d+)")
_UNION = re.compile(r"[Uu∪]")

_MODEL_BUILDERS = {
    TailFamily.PARETO: lambda p: TailModel.pareto(p["alpha"], p["xm"]),
    TailFamily.BURR: lambda p: TailModel.burr(p["c"], p["k"]),
    TailFamily.LOG_PARETO: lambda p: TailModel.logpareto(p["alpha"], p["gamma"], p["x0"]),
}


def _strip_with_offset(text: str, offset: int) -> tuple[str, int]:
    stripped = text.lstrip()
    return stripped.rstrip(), offset + len(text) - len(stripped)


def parse_real(text: str, source: str | None = None, position: int = 0) -> float:
    """A decimal literal, `e`, `e^k` or `inf`. NaN is never accepted."""
    source = text if source is None else source
    token, position = _strip_with_offset(text, position)
    lowered = token.lower()
    if lowered in ("inf", "+inf"):
        return math.inf
    if lowered == "-inf":
        return -math.inf
    if lowered == "e":
        return math.e
    if lowered.startswith("e^"):
        return exp_or_inf(parse_real(token[2:], source, position + 2))
    if not _DECIMAL.fullmatch(token):
        raise ParseError(source, position, f"expected a number, got {token!r}")
    return float(token)


def parse_model_spec(s: str) -> TailModel:
    family_text, sep, params_text = s.partition(":")
    if not sep:
        raise ParseError(s, len(s), "expected ':' after the family name")
    try:
        family = TailFamily(family_text.strip().lower())
    except ValueError:
        raise ParseError(s, 0, f"unknown family {family_text.strip()!r}") from None

    expected = FAMILY_PARAMS[family]
    values: dict[str, float] = {}
    position = len(family_text) + 1
    for item in params_text.split(","):
        key_text, eq, value_text = item.partition("=")
        key = key_text.strip().lower()
        if not eq:
            raise ParseError(s, position, f"expected key=value, got {item.strip()!r}")
        if key not in expected:
            raise ParseError(s, position, f"unknown key {key!r} for {family.value}, expected {expected}")
        if key in values:
            raise ParseError(s, position, f"duplicate key {key!r}")
        values[key] = parse_real(value_text, s, position + len(key_text) + 1)
        position += len(item) + 1

    missing = [key for key in expected if key not in values]
    if missing:
        raise ParseError(s, len(s), f"missing key(s) {', '.join(missing)} for {family.value}")
    try:
        return _MODEL_BUILDERS[family](values)
    except DomainError as e:
        raise ParseError(s, len(family_text) + 1, str(e)) from e


def _parse_interval(piece: str, source: str, position: int) -> Interval:
    token, position = _strip_with_offset(piece, position)
    if len(token) < 2 or token[0] not in "([" or token[-1] not in ")]":
        raise ParseError(source, position, f"expected an interval such as (a,b], got {token!r}")
    bounds = token[1:-1].split(",")
    if len(bounds) != 2:
        raise ParseError(source, position, f"an interval needs exactly two endpoints, got {token!r}")
    low = parse_real(bounds[0], source, position + 1)
    high = parse_real(bounds[1], source, position + 2 + len(bounds[0]))
    try:
        return Interval(low, high, low_closed=token[0] == "[", high_closed=token[-1] == "]")
    except DomainError as e:
        raise ParseError(source, position, str(e)) from e


def parse_set_spec(s: str) -> BorelSubset:
    """A union of intervals inside [1, inf); `{}` is the empty set."""
    if s.strip() == "{}":
        return BorelSubset()
    if not s.strip():
        raise ParseError(s, 0, "empty set spec")
    intervals = []
    position = 0
    for piece in _UNION.split(s):
        intervals.append(_parse_interval(piece, s, position))
        position += len(piece) + 1
    return BorelSubset.from_intervals(intervals)


def _parse_integer(token: str, source: str, position: int) -> int:
    if match := _POWER.fullmatch(token):
        return int(match.group(1)) ** int(match.group(2))
    try:
        value = Decimal(token)
    except InvalidOperation:
        raise ParseError(source, position, f"expected an integer, got {token!r}") from None
    if not value.is_finite() or value != value.to_integral_value():
        raise ParseError(source, position, f"sample sizes must be integers, got {token!r}")
    return int(value)


def parse_n_grid(s: str) -> list[int]:
    """Comma list of integers, scientific literals, `b^k` powers and decade ranges `10^a..10^b`."""
    grid: list[int] = []
    position = 0
    for item in s.split(","):
        token, start = _strip_with_offset(item, position)
        if not token:
            raise ParseError(s, start, "empty entry in n grid")
        if match := _DECADE_RANGE.fullmatch(token):
            first, last = int(match.group(1)), int(match.group(2))
            if first > last:
                raise ParseError(s, start, f"decade range {token!r} runs backwards")
            grid.extend(10**k for k in range(first, last + 1))
        else:
            grid.append(_parse_integer(token, s, start))
        position += len(item) + 1
    return grid


def parse_grid_spec(s: str) -> GridSpec:
    """`low:high:points` for a log-spaced diagnostics grid."""
    parts = s.split(":")
    if len(parts) != 3:
        raise ParseError(s, 0, "expected low:high:points")
    low = parse_real(parts[0], s, 0)
    high = parse_real(parts[1], s, len(parts[0]) + 1)
    points_at = len(parts[0]) + len(parts[1]) + 2
    points = _parse_integer(parts[2].strip(), s, points_at)
    if not (0.0 < low <= high < math.inf) or points < 1:
        raise DomainError(f"Invalid grid {s!r}: need 0 < low <= high < inf and points >= 1")
    return GridSpec(low=low, high=high, points=points)
