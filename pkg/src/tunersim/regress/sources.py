"""Regressor sources and the deterministic sample stream.

Samples are indexed k = 1..horizon. Closed-form sources synthesize
y_k = phi_k^T theta_star; plant sources carry their own theta_star; file
sources read ``k,phi_1,...,phi_D[,y]`` rows.
"""

from __future__ import annotations

import csv
import logging
import math
from pathlib import Path
from typing import Annotated, Literal, Union

import numpy as np
from pydantic import BaseModel, Field, model_validator

from tunersim.core.errors import InvalidSpecError, ParseError
from tunersim.core.models import RegressorSample
from tunersim.core.vectors import Vector, as_vector
from tunersim.regress.plant import PlantSpec, simulate_plant

logger = logging.getLogger(__name__)


class SinusoidComponent(BaseModel):
    """offset + amplitude * sin(frequency * k + phase)."""

    offset: float = Field(0.0, description="Constant term")
    amplitude: float = Field(0.0, description="Sine amplitude")
    frequency: float = Field(0.0, description="Angular frequency per sample")
    phase: float = Field(0.0, description="Phase in radians")

    def at(self, k: int) -> float:
        """Value at integer time k."""
        if self.amplitude == 0.0:
            return self.offset
        return self.offset + self.amplitude * math.sin(self.frequency * k + self.phase)


class Segment(BaseModel):
    """Regressor held constant from ``start`` until the next segment."""

    start: int = Field(..., ge=1, description="First iteration of the segment")
    phi: list[float] = Field(..., min_length=1, description="Regressor value")


class ConstantSource(BaseModel):
    """The same regressor at every iteration."""

    kind: Literal["constant"] = "constant"
    phi: list[float] = Field(..., min_length=1)

    @property
    def dim(self) -> int:
        return len(self.phi)

    def phi_at(self, k: int) -> list[float]:
        return self.phi


class PiecewiseSource(BaseModel):
    """Piecewise-constant regressor with jumps at the segment starts."""

    kind: Literal["piecewise-constant"] = "piecewise-constant"
    segments: list[Segment] = Field(..., min_length=1)

    @model_validator(mode="after")
    def _check_segments(self) -> PiecewiseSource:
        if self.segments[0].start != 1:
            raise ValueError("first segment must start at k = 1")
        starts = [s.start for s in self.segments]
        if any(b <= a for a, b in zip(starts, starts[1:])):
            raise ValueError("segment starts must be strictly increasing")
        if len({len(s.phi) for s in self.segments}) != 1:
            raise ValueError("all segments must share one dimension")
        return self

    @property
    def dim(self) -> int:
        return len(self.segments[0].phi)

    def phi_at(self, k: int) -> list[float]:
        current = self.segments[0].phi
        for segment in self.segments:
            if segment.start > k:
                break
            current = segment.phi
        return current


class SinusoidSource(BaseModel):
    """Bank of per-component sinusoids, e.g. [1, 2 sin(k), 2 sin(2k)]."""

    kind: Literal["sinusoid-bank"] = "sinusoid-bank"
    components: list[SinusoidComponent] = Field(..., min_length=1)

    @property
    def dim(self) -> int:
        return len(self.components)

    def phi_at(self, k: int) -> list[float]:
        return [c.at(k) for c in self.components]


class InputSignal(BaseModel):
    """Plant input u_k for k >= 0: explicit values, else a sum of sinusoids."""

    values: list[float] | None = Field(None, description="Explicit u_0, u_1, ...")
    components: list[SinusoidComponent] = Field(default_factory=list)

    def sequence(self, length: int) -> list[float]:
        """First ``length`` inputs u_0..u_{length-1}."""
        if self.values is not None:
            return self.values[:length]
        return [sum(c.at(j) for c in self.components) for j in range(length)]


class PlantSource(BaseModel):
    """Regressors produced by simulating a plant."""

    kind: Literal["plant"] = "plant"
    plant: PlantSpec
    input: InputSignal = Field(default_factory=InputSignal)

    @property
    def dim(self) -> int:
        return self.plant.dim


class FileSource(BaseModel):
    """Regressors read from a CSV file with header ``k,phi_1,...,phi_D[,y]``."""

    kind: Literal["file"] = "file"
    path: Path


RegressorSource = Annotated[
    Union[ConstantSource, PiecewiseSource, SinusoidSource, PlantSource, FileSource],
    Field(discriminator="kind"),
]


def read_regressor_csv(path: Path | str) -> tuple[list[int], list[Vector], list[float] | None]:
    """Parse a regressor file into (k values, phi rows, y values or None).

    Raises:
        ParseError: malformed header or row (row numbers count data rows from 1)
    """
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise ParseError(0, "empty file") from None

        if not header or header[0] != "k":
            raise ParseError(0, "header must start with 'k'")
        has_y = header[-1] == "y"
        phi_cols = header[1:-1] if has_y else header[1:]
        expected = [f"phi_{i}" for i in range(1, len(phi_cols) + 1)]
        if not phi_cols or phi_cols != expected:
            raise ParseError(0, f"expected columns {','.join(['k', *expected])}")

        ks: list[int] = []
        rows: list[Vector] = []
        ys: list[float] = []
        for row_no, row in enumerate(reader, start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise ParseError(row_no, f"expected {len(header)} fields, got {len(row)}")
            try:
                ks.append(int(row[0]))
                values = [float(cell) for cell in row[1:]]
            except ValueError as exc:
                raise ParseError(row_no, str(exc)) from exc
            if not all(math.isfinite(v) for v in values):
                raise ParseError(row_no, "non-finite value")
            if has_y:
                ys.append(values[-1])
                values = values[:-1]
            rows.append(np.array(values, dtype=np.float64))

    return ks, rows, ys if has_y else None


def _file_stream(source: FileSource, theta_star: Vector, horizon: int) -> list[RegressorSample]:
    ks, rows, ys = read_regressor_csv(source.path)
    if len(rows) < horizon:
        raise InvalidSpecError(f"{source.path} has {len(rows)} rows, horizon is {horizon}")
    if rows[0].shape[0] != theta_star.shape[0]:
        raise InvalidSpecError(
            f"file regressors have dimension {rows[0].shape[0]}, "
            f"theta_star has {theta_star.shape[0]}"
        )
    samples = []
    for i in range(horizon):
        if ys is None:
            samples.append(RegressorSample.from_theta(ks[i], rows[i], theta_star))
        else:
            samples.append(RegressorSample.build(ks[i], rows[i], ys[i]))
    return samples


def source_dim(source: RegressorSource) -> int | None:
    """Regressor dimension declared by a source, None for files (known on read)."""
    if isinstance(source, FileSource):
        return None
    return source.dim


def regressor_stream(
    source: RegressorSource,
    theta_star: Vector | list[float] | None,
    horizon: int,
) -> list[RegressorSample]:
    """Generate ``horizon`` samples from a source.

    The result depends only on the arguments. ``theta_star`` is ignored for
    plant sources, which use the plant's own coefficients.

    Raises:
        InvalidSpecError: dimension mismatch or horizon < 1
        ParseError: malformed file rows
    """
    if horizon < 1:
        raise InvalidSpecError("horizon must be >= 1")

    if isinstance(source, PlantSource):
        inputs = source.input.sequence(max(0, horizon - source.plant.delay_d))
        return simulate_plant(source.plant, inputs, horizon)

    if theta_star is None:
        raise InvalidSpecError(f"{source.kind} sources need theta_star")
    theta = as_vector(theta_star, name="theta_star")

    if isinstance(source, FileSource):
        return _file_stream(source, theta, horizon)

    if source.dim != theta.shape[0]:
        raise InvalidSpecError(
            f"source dimension {source.dim} does not match theta_star dimension {theta.shape[0]}"
        )
    samples = [
        RegressorSample.from_theta(k, source.phi_at(k), theta) for k in range(1, horizon + 1)
    ]
    logger.debug("Generated %d %s samples", horizon, source.kind)
    return samples
