"""Output format generators."""

from tunersim.formats.export import (
    format_cell,
    format_float,
    parse_trace_csv,
    parse_trace_json,
    read_trace,
    rows_to_csv,
    trace_header,
    trace_to_csv,
    trace_to_json,
    write_trace,
)

__all__ = [
    # Export utilities
    "format_float",
    "format_cell",
    "rows_to_csv",
    # Traces
    "trace_header",
    "trace_to_csv",
    "trace_to_json",
    "parse_trace_csv",
    "parse_trace_json",
    "read_trace",
    "write_trace",
]
