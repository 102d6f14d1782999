"""Two-column (k, value) files for plotting traces."""

from __future__ import annotations

import logging
import math
from enum import Enum
from pathlib import Path

from tunersim.core.errors import UnavailableQuantityError
from tunersim.core.models import TraceRecord
from tunersim.formats.export import rows_to_csv
from tunersim.harness.engine import RunArtifact

logger = logging.getLogger(__name__)

LOG_FLOOR = 1e-300


class PlotQuantity(str, Enum):
    """Trace columns that can be plotted."""

    E_Y = "e_y"
    PARAM_ERR = "param_err"
    V = "v"


class PlotScale(str, Enum):
    """Value transforms."""

    LINEAR = "linear"
    LOG10_ABS = "log10-abs"


def plot_series(
    records: list[TraceRecord], quantity: PlotQuantity, scale: PlotScale
) -> list[tuple[int, float]]:
    """(k, value) pairs; log10-abs maps x to log10(max(|x|, 1e-300)).

    Raises:
        UnavailableQuantityError: the trace does not carry ``quantity``
    """
    series = []
    for record in records:
        value = getattr(record, quantity.value)
        if value is None:
            raise UnavailableQuantityError(quantity.value, record.algorithm)
        if scale == PlotScale.LOG10_ABS:
            value = math.log10(max(abs(value), LOG_FLOOR))
        series.append((record.k, value))
    return series


def series_to_csv(series: list[tuple[int, float]]) -> str:
    """``k,value`` CSV."""
    return rows_to_csv(["k", "value"], series)


def write_trace_plot_data(
    records: list[TraceRecord],
    quantity: PlotQuantity,
    scale: PlotScale,
    directory: Path,
    label: str | None = None,
) -> Path:
    """Write ``plot_<label>_<quantity>_<scale>.csv`` for one trace."""
    if not records:
        raise UnavailableQuantityError(quantity.value, label or "empty trace")
    label = label or records[0].algorithm
    text = series_to_csv(plot_series(records, quantity, scale))
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"plot_{label}_{quantity.value}_{scale.value}.csv"
    path.write_text(text)
    return path


def emit_plot_data(
    artifact: RunArtifact,
    quantity: PlotQuantity | str,
    scale: PlotScale | str = PlotScale.LINEAR,
    directory: Path | str | None = None,
) -> list[Path]:
    """Write one plot-data file per algorithm of a run.

    Files go to ``directory``, else the run directory.

    Raises:
        UnavailableQuantityError: an algorithm lacks the quantity (v for NGD)
    """
    quantity = PlotQuantity(quantity)
    scale = PlotScale(scale)
    target = Path(directory) if directory is not None else artifact.directory
    if target is None:
        raise ValueError("artifact has no directory; pass one explicitly")

    if quantity == PlotQuantity.V:
        for hp in artifact.config.algorithms:
            if not hp.algorithm.has_vartheta:
                raise UnavailableQuantityError(quantity.value, hp.name)

    paths = [
        write_trace_plot_data(artifact.traces[label], quantity, scale, target, label)
        for label in artifact.labels
    ]
    logger.info("Wrote %d %s plot file(s) to %s", len(paths), quantity.value, target)
    return paths
