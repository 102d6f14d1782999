"""Experiment configuration documents.

An experiment is a JSON document validated by :class:`ExperimentConfig`.
Validation failures surface as :class:`ConfigError` carrying the dotted path
of the first offending field.
"""

from __future__ import annotations

import json
import logging
import os
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, Field, ValidationError, model_validator

from tunersim.core.errors import ConfigError
from tunersim.core.models import BoundMode, HyperParams
from tunersim.core.vectors import Vector, as_vector, zeros
from tunersim.regress.sources import FileSource, PlantSource, RegressorSource, source_dim
from tunersim.tuners.hyperparams import validate_hyperparams

logger = logging.getLogger(__name__)

OUTPUT_DIR_ENV = "TUNERSIM_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "runs"


class AnalysisSettings(BaseModel):
    """Post-run analysis settings."""

    enabled: bool = Field(True, description="Attach PE, rate, envelope and monotone reports")
    delta_t: int = Field(20, ge=1, description="PE window length")
    tolerance: float = Field(1e-9, ge=0.0, description="Envelope relative tolerance")
    monotone_tolerance: float = Field(1e-10, ge=0.0, description="Lyapunov increase slack")
    bound_mode: BoundMode = Field(BoundMode.THEOREM, description="Gamma bounds enforced")
    grid_points: int = Field(200, ge=2, description="Rate-search grid points per axis")
    sensitivity: list[int] = Field(
        default_factory=list, description="Window lengths for the optional dT sweep"
    )


class OutputSettings(BaseModel):
    """Where and how artifacts are written."""

    directory: Path | None = Field(None, description="Run root (env var, then 'runs')")
    formats: list[Literal["csv", "json"]] = Field(
        default_factory=lambda: ["csv"], min_length=1, description="Trace file formats"
    )


class ExperimentConfig(BaseModel):
    """A complete, reproducible experiment."""

    name: str = Field(..., pattern=r"^[A-Za-z0-9_.-]+$", description="Run directory name")
    description: str = Field("", description="Free text")
    inferred: list[str] = Field(
        default_factory=list, description="Fields whose values were chosen rather than given"
    )
    algorithms: list[HyperParams] = Field(..., min_length=1)
    source: RegressorSource
    theta_star: list[float] | None = Field(None, description="True parameters")
    horizon: int = Field(..., ge=1, description="Number of iterations")
    init_theta: list[float] | None = Field(None, description="Initial estimate (default zeros)")
    analysis: AnalysisSettings = Field(default_factory=AnalysisSettings)
    output: OutputSettings = Field(default_factory=OutputSettings)

    @model_validator(mode="after")
    def _check_experiment(self) -> ExperimentConfig:
        labels = [hp.name for hp in self.algorithms]
        duplicates = sorted({label for label in labels if labels.count(label) > 1})
        if duplicates:
            raise ValueError(f"duplicate algorithm labels: {', '.join(duplicates)}")

        if self.theta_star is None and not isinstance(self.source, PlantSource):
            raise ValueError(f"theta_star is required for {self.source.kind} sources")

        dim = self.dim
        declared = source_dim(self.source)
        if declared is not None and declared != dim:
            raise ValueError(f"source dimension {declared} does not match theta_star ({dim})")
        if self.init_theta is not None and len(self.init_theta) != dim:
            raise ValueError(f"init_theta has dimension {len(self.init_theta)}, expected {dim}")

        if self.analysis.enabled and self.analysis.delta_t > self.horizon:
            raise ValueError(
                f"analysis.delta_t={self.analysis.delta_t} exceeds horizon={self.horizon}"
            )

        for hp in self.algorithms:
            check = validate_hyperparams(hp, self.analysis.bound_mode)
            if check.valid:
                continue
            codes = ", ".join(f"{v.code} {v.message}" for v in check.violations)
            if not hp.override:
                raise ValueError(f"{hp.name} hyperparameters rejected ({codes}); set override")
            logger.warning("%s runs with override despite: %s", hp.name, codes)
        return self

    @property
    def resolved_theta_star(self) -> Vector:
        """theta_star, taken from the plant for plant sources."""
        if isinstance(self.source, PlantSource):
            return self.source.plant.theta_star
        assert self.theta_star is not None
        return as_vector(self.theta_star, name="theta_star")

    @property
    def dim(self) -> int:
        """Parameter dimension D."""
        if isinstance(self.source, PlantSource):
            return self.source.plant.dim
        return len(self.theta_star or [])

    @property
    def initial_theta(self) -> Vector:
        """init_theta, or zeros."""
        if self.init_theta is None:
            return zeros(self.dim)
        return as_vector(self.init_theta, name="init_theta")


def _field_path(error: ValidationError) -> tuple[str, str]:
    first = error.errors()[0]
    path = ".".join(str(part) for part in first["loc"])
    return path, first["msg"]


def parse_config(text: str, base_dir: Path | None = None) -> ExperimentConfig:
    """Validate a JSON config document.

    Relative file-source paths are resolved against ``base_dir``.

    Raises:
        ConfigError: the document is not valid JSON or fails validation
    """
    try:
        config = ExperimentConfig.model_validate_json(text)
    except ValidationError as exc:
        path, message = _field_path(exc)
        raise ConfigError(path, message) from exc

    if (
        base_dir is not None
        and isinstance(config.source, FileSource)
        and not config.source.path.is_absolute()
    ):
        resolved = (base_dir / config.source.path).resolve()
        source = config.source.model_copy(update={"path": resolved})
        config = config.model_copy(update={"source": source})
    return config


def load_config(path: Path | str) -> ExperimentConfig:
    """Read and validate a config file.

    Raises:
        ConfigError: unreadable or invalid file
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError("", f"cannot read {path}: {exc.strerror}") from exc
    return parse_config(text, base_dir=path.parent)


def config_to_json(config: ExperimentConfig) -> str:
    """Normalised JSON form of a config, as stored beside a run."""
    return json.dumps(config.model_dump(mode="json"), indent=2) + "\n"


def resolve_output_dir(config: ExperimentConfig, override: Path | str | None = None) -> Path:
    """--out, then the config, then $TUNERSIM_OUTPUT_DIR, then ./runs."""
    if override is not None:
        return Path(override)
    if config.output.directory is not None:
        return config.output.directory
    return Path(os.environ.get(OUTPUT_DIR_ENV, DEFAULT_OUTPUT_DIR))
