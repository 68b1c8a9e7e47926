"""
Deterministic CSV / JSON rendering of result tables.

CSV floats are written with 17 significant digits, infinities as the strings
"inf" / "-inf", missing values as empty cells. JSON documents have the shape
{"table": kind, "rows": [...], "summary": {...}}; JSON numbers use Python's
shortest round-trip repr, so parse_table(emit_table(rows)) reproduces the rows.
"""

import csv
import io
import json
import math
from dataclasses import asdict, fields
from enum import Enum
from typing import Any, Iterable, Optional, Sequence

from src.cli_io.models import TABLE_ROW_TYPES, DiagnosticRow, OutputFormat, Table, TableKind, table_columns
from src.diagnostics.models import DiagnosticReport
from src.ruin.models import DecayFit
from src.utils.errors import DegenerateDataError, ParseError

POINT_SEPARATOR = ";"


def diagnostic_rows(report: DiagnosticReport) -> list[DiagnosticRow]:
    violated = {violation.point for violation in report.violations}
    return [
        DiagnosticRow(check=report.check_name.value, point=point, value=value, violated=point in violated)
        for point, value in zip(report.grid, report.values)
    ]


def _kind_of(row: Any) -> TableKind:
    for kind, row_type in TABLE_ROW_TYPES.items():
        if isinstance(row, row_type):
            return kind
    raise TypeError(f"Cannot emit rows of type {type(row).__name__}")


def _flatten(rows: Iterable[Any], summary: dict[str, Any]) -> list[Any]:
    flat = []
    for row in rows:
        if isinstance(row, DiagnosticReport):
            flat.extend(diagnostic_rows(row))
            summary.setdefault("passed", row.passed)
            summary.update(row.summary)
        elif isinstance(row, DecayFit):
            summary.update(asdict(row))
        else:
            flat.append(row)
    return flat


def _check_number(value: float) -> float:
    if math.isnan(value):
        raise DegenerateDataError("NaN reached the output table")
    return value


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(_check_number(value), ".17g")
    if isinstance(value, tuple):
        return POINT_SEPARATOR.join(_csv_cell(float(v)) for v in value)
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, float):
        return value if math.isfinite(_check_number(value)) else ("inf" if value > 0 else "-inf")
    if isinstance(value, (list, tuple)):
        return [_json_value(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _json_value(v) for k, v in value.items()}
    if isinstance(value, Enum):
        return value.value
    return value


def emit_table(
    rows: Sequence[Any],
    fmt: OutputFormat,
    kind: Optional[TableKind] = None,
    summary: Optional[dict[str, Any]] = None,
) -> str:
    """
    Render rows (RatePoint, RuinRow, DiagnosticReport, DecayFit, or the sample/dist rows) as text.

    A DiagnosticReport expands to one row per grid point; a DecayFit moves into
    the summary, which only JSON carries. An empty table with no kind is a rate table.
    """
    summary = dict(summary or {})
    flat = _flatten(rows, summary)
    if kind is None:
        if flat:
            kind = _kind_of(flat[0])
        elif any(isinstance(row, DiagnosticReport) for row in rows):
            kind = TableKind.DIAGNOSTICS
        else:
            kind = TableKind.RATE
    columns = table_columns(kind)

    if fmt == OutputFormat.CSV:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for row in flat:
            writer.writerow([_csv_cell(getattr(row, column)) for column in columns])
        return buffer.getvalue()

    document = {
        "table": kind.value,
        "rows": [{column: _json_value(getattr(row, column)) for column in columns} for row in flat],
        "summary": _json_value(summary),
    }
    return json.dumps(document, indent=2) + "\n"


def _number(text: Any, field_name: str) -> Optional[float]:
    if text is None or text == "":
        return None
    if text in ("inf", "-inf"):
        return float(text)
    if isinstance(text, str):
        try:
            return float(text)
        except ValueError:
            raise ParseError(text, 0, f"invalid number in column {field_name}") from None
    return float(text)


def _point(value: Any) -> Any:
    if isinstance(value, list):
        return tuple(float(v) for v in value)
    if isinstance(value, str) and POINT_SEPARATOR in value:
        return tuple(float(v) for v in value.split(POINT_SEPARATOR))
    return _number(value, "point")


def _build_row(kind: TableKind, record: dict[str, Any]) -> Any:
    row_type = TABLE_ROW_TYPES[kind]
    values = {}
    for f in fields(row_type):
        if f.name not in record:
            raise ParseError(str(record), 0, f"missing column {f.name}")
        raw = record[f.name]
        if f.name in ("n", "index"):
            values[f.name] = int(raw)
        elif f.name in ("check", "quantity"):
            values[f.name] = str(raw)
        elif f.name == "violated":
            values[f.name] = raw if isinstance(raw, bool) else raw == "true"
        elif f.name == "point":
            values[f.name] = _point(raw)
        else:
            values[f.name] = _number(raw, f.name)
    return row_type(**values)


def parse_table(text: str, fmt: OutputFormat, kind: Optional[TableKind] = None) -> Table:
    """Inverse of emit_table. CSV input carries no table name, so its kind comes from the header."""
    if fmt == OutputFormat.JSON:
        try:
            document = json.loads(text)
            kind = TableKind(document["table"])
        except (json.JSONDecodeError, KeyError, ValueError) as e:
            raise ParseError(text[:80], 0, f"not an emitted JSON table: {e}") from e
        rows = [_build_row(kind, record) for record in document.get("rows", [])]
        return Table(kind=kind, rows=rows, summary=document.get("summary", {}))

    reader = csv.DictReader(io.StringIO(text))
    header = reader.fieldnames or []
    if kind is None:
        kind = next((k for k in TableKind if table_columns(k) == header), None)
        if kind is None:
            raise ParseError(text[:80], 0, f"unknown CSV header {header}")
    return Table(kind=kind, rows=[_build_row(kind, record) for record in reader])