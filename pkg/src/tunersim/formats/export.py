"""Trace and table export in JSON and CSV.

Floats in CSV files are written with 17 significant digits so a parsed file
reproduces the in-memory values exactly.
"""

from __future__ import annotations

import csv
import json
from collections.abc import Iterable, Sequence
from io import StringIO
from pathlib import Path
from typing import Any

from tunersim.core.errors import ParseError
from tunersim.core.models import TraceRecord

TRACE_FIXED_COLUMNS = ["k", "algorithm", "e_y", "param_err", "v"]


def format_float(value: float | None) -> str:
    """17 significant digits; None becomes an empty cell."""
    if value is None:
        return ""
    return f"{value:.17g}"


def format_cell(value: Any) -> str:
    """One CSV cell: empty for None, lowercase booleans, full-precision floats."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def rows_to_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """Render ``header`` and ``rows`` as CSV text.

    Every row must have one cell per header column.

    Raises:
        ValueError: a row of the wrong width
    """
    output = StringIO()
    writer = csv.writer(output, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"row has {len(row)} cells, header has {len(header)}")
        writer.writerow([format_cell(value) for value in row])
    return output.getvalue()


def trace_header(dim: int) -> list[str]:
    """``k,algorithm,e_y,param_err,v,theta_1..theta_D,vartheta_1..vartheta_D``."""
    return (
        TRACE_FIXED_COLUMNS
        + [f"theta_{i}" for i in range(1, dim + 1)]
        + [f"vartheta_{i}" for i in range(1, dim + 1)]
    )


def trace_to_csv(records: list[TraceRecord]) -> str:
    """Render a trace with empty cells for columns the algorithm lacks."""
    dim = records[0].dim if records else 0
    return rows_to_csv(
        trace_header(dim),
        (
            [
                record.k,
                record.algorithm,
                record.e_y,
                record.param_err,
                record.v,
                *record.theta,
                *(record.vartheta if record.vartheta is not None else [None] * dim),
            ]
            for record in records
        ),
    )

def _cell(value: str, row: int, column: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise ParseError(row, f"column {column}: not a number: {value!r}") from None


def parse_trace_csv(text: str) -> list[TraceRecord]:
    """Parse the output of :func:`trace_to_csv`.

    Raises:
        ParseError: bad header, wrong field count or non-numeric cell
    """
    reader = csv.reader(StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError(0, "empty trace") from None

    if header[: len(TRACE_FIXED_COLUMNS)] != TRACE_FIXED_COLUMNS:
        raise ParseError(0, f"header must start with {','.join(TRACE_FIXED_COLUMNS)}")
    dim, remainder = divmod(len(header) - len(TRACE_FIXED_COLUMNS), 2)
    if remainder or header != trace_header(dim):
        raise ParseError(0, "theta and vartheta columns do not match")

    records: list[TraceRecord] = []
    for row_no, row in enumerate(reader, start=1):
        if not row:
            continue
        if len(row) != len(header):
            raise ParseError(row_no, f"expected {len(header)} fields, got {len(row)}")
        try:
            k = int(row[0])
        except ValueError:
            raise ParseError(row_no, f"column k: not an integer: {row[0]!r}") from None

        theta_cells = row[5 : 5 + dim]
        vartheta_cells = row[5 + dim :]
        vartheta = None
        if any(vartheta_cells):
            vartheta = [
                _cell(c, row_no, f"vartheta_{i}") for i, c in enumerate(vartheta_cells, 1)
            ]
        records.append(
            TraceRecord(
                k=k,
                algorithm=row[1],
                e_y=_cell(row[2], row_no, "e_y"),
                param_err=_cell(row[3], row_no, "param_err"),
                v=_cell(row[4], row_no, "v") if row[4] else None,
                theta=[_cell(c, row_no, f"theta_{i}") for i, c in enumerate(theta_cells, 1)],
                vartheta=vartheta,
            )
        )
    return records


def trace_to_json(records: list[TraceRecord], pretty: bool = False) -> str:
    """Trace as a JSON array of records."""
    return json.dumps([record.model_dump() for record in records], indent=2 if pretty else None)


def parse_trace_json(text: str) -> list[TraceRecord]:
    """Parse the output of :func:`trace_to_json`."""
    try:
        items = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, exc.msg) from exc
    if not isinstance(items, list):
        raise ParseError(0, "trace JSON must be an array")
    return [TraceRecord.model_validate(item) for item in items]


def read_trace(path: Path | str) -> list[TraceRecord]:
    """Read a trace file, CSV or JSON by suffix."""
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        return parse_trace_json(text)
    return parse_trace_csv(text)


def write_trace(path: Path | str, records: list[TraceRecord]) -> Path:
    """Write a trace file, CSV or JSON by suffix."""
    path = Path(path)
    text = trace_to_json(records) if path.suffix == ".json" else trace_to_csv(records)
    path.write_text(text)
    return path
