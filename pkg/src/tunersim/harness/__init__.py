"""Configuration-driven experiment runner.

Bundled configurations reproduce the two reference experiments: a
piecewise constant regressor with a jump (``fig2``) and a persistently
exciting sinusoid bank (``fig1``).
"""

from tunersim.core.models import TraceRecord
from tunersim.harness.compare import (
    ComparisonRow,
    ComparisonTable,
    compare,
    iterations_to_tolerance,
)
from tunersim.harness.config import (
    AnalysisSettings,
    ExperimentConfig,
    OutputSettings,
    config_to_json,
    load_config,
    parse_config,
    resolve_output_dir,
)
from tunersim.harness.engine import (
    AlgorithmReport,
    RunArtifact,
    RunReport,
    analyze_trace,
    load_run,
    run_algorithm,
    run_experiment,
)
from tunersim.harness.library import (
    BUILTIN_CONFIG_NAMES,
    ConfigLibrary,
    ConfigMetadata,
    load_builtin_config,
    register_builtin_configs,
    resolve_config,
)
from tunersim.harness.plotdata import (
    PlotQuantity,
    PlotScale,
    emit_plot_data,
    plot_series,
    write_trace_plot_data,
)

__all__ = [
    # Configuration
    "ExperimentConfig",
    "AnalysisSettings",
    "OutputSettings",
    "load_config",
    "parse_config",
    "config_to_json",
    "resolve_output_dir",
    # Library
    "ConfigLibrary",
    "ConfigMetadata",
    "BUILTIN_CONFIG_NAMES",
    "load_builtin_config",
    "register_builtin_configs",
    "resolve_config",
    # Engine
    "TraceRecord",
    "RunArtifact",
    "RunReport",
    "AlgorithmReport",
    "run_experiment",
    "analyze_trace",
    "run_algorithm",
    "load_run",
    # Comparison
    "compare",
    "iterations_to_tolerance",
    "ComparisonTable",
    "ComparisonRow",
    # Plot data
    "emit_plot_data",
    "write_trace_plot_data",
    "plot_series",
    "PlotQuantity",
    "PlotScale",
]
