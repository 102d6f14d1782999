"""Registry of bundled experiment configurations."""

from __future__ import annotations

import logging
from importlib import resources
from pathlib import Path

from pydantic import BaseModel, Field

from tunersim.core.errors import ConfigError
from tunersim.harness.config import ExperimentConfig, load_config, parse_config

logger = logging.getLogger(__name__)

BUILTIN_CONFIG_NAMES = ["fig1", "fig2"]


class ConfigMetadata(BaseModel):
    """Summary of a registered config."""

    name: str = Field(..., description="Registry name")
    description: str = Field("", description="Detailed description")
    algorithms: list[str] = Field(default_factory=list, description="Run labels")
    horizon: int = Field(..., description="Number of iterations")
    source_kind: str = Field(..., description="Regressor source kind")
    inferred: list[str] = Field(default_factory=list, description="Inferred fields")


class ConfigLibrary:
    """Registry of available experiment configs."""

    _configs: dict[str, ExperimentConfig] = {}

    @classmethod
    def register(cls, config: ExperimentConfig) -> None:
        """Register a config under its name."""
        cls._configs[config.name] = config

    @classmethod
    def get(cls, name: str) -> ExperimentConfig | None:
        """Get a config by name."""
        return cls._configs.get(name)

    @classmethod
    def list_all(cls) -> list[ConfigMetadata]:
        """List all registered configs, sorted by name."""
        return [_metadata(cls._configs[name]) for name in sorted(cls._configs)]


def _metadata(config: ExperimentConfig) -> ConfigMetadata:
    return ConfigMetadata(
        name=config.name,
        description=config.description,
        algorithms=[hp.name for hp in config.algorithms],
        horizon=config.horizon,
        source_kind=config.source.kind,
        inferred=config.inferred,
    )


def load_builtin_config(name: str) -> ExperimentConfig:
    """Load a bundled config from package data."""
    resource = resources.files("tunersim.harness") / "configs" / f"{name}.json"
    return parse_config(resource.read_text())


def register_builtin_configs() -> None:
    """Register all bundled configs with the ConfigLibrary."""
    for name in BUILTIN_CONFIG_NAMES:
        if ConfigLibrary.get(name) is None:
            ConfigLibrary.register(load_builtin_config(name))


def resolve_config(name_or_path: str | Path) -> ExperimentConfig:
    """Load a config file, or look a name up in the library.

    Raises:
        ConfigError: neither an existing file nor a registered name
    """
    path = Path(name_or_path)
    if path.is_file():
        return load_config(path)

    register_builtin_configs()
    config = ConfigLibrary.get(str(name_or_path))
    if config is None:
        raise ConfigError("", f"no config file or bundled config named '{name_or_path}'")
    logger.debug("Using bundled config %s", config.name)
    return config
