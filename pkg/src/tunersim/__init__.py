"""TunerSim - Online parameter identification with gradient and high-order tuners."""

from tunersim.analysis import (
    EnvelopeReport,
    PEReport,
    RateReport,
    check_envelope,
    lyapunov,
    parameter_error,
    pe_epsilon,
    rate_bound_hb,
    rate_bound_na,
)
from tunersim.core import (
    Algorithm,
    BoundMode,
    HyperParams,
    RegressorSample,
    TraceRecord,
    TunerState,
)
from tunersim.harness import (
    ConfigLibrary,
    ExperimentConfig,
    RunArtifact,
    compare,
    emit_plot_data,
    load_config,
    load_run,
    run_experiment,
)
from tunersim.regress import (
    BasisFn,
    PlantSpec,
    build_regressor,
    regressor_stream,
    simulate_plant,
)
from tunersim.tuners import (
    classical_hb_step,
    classical_nesterov_step,
    hb_step,
    loss_and_gradient,
    na_step,
    ngd_step,
    validate_hyperparams,
)

__version__ = "0.1.0"

__all__ = [
    # Core models
    "Algorithm",
    "BoundMode",
    "HyperParams",
    "RegressorSample",
    "TunerState",
    "TraceRecord",
    # Regressors
    "PlantSpec",
    "BasisFn",
    "build_regressor",
    "simulate_plant",
    "regressor_stream",
    # Tuners
    "loss_and_gradient",
    "ngd_step",
    "hb_step",
    "na_step",
    "classical_hb_step",
    "classical_nesterov_step",
    "validate_hyperparams",
    # Analysis
    "lyapunov",
    "parameter_error",
    "pe_epsilon",
    "rate_bound_hb",
    "rate_bound_na",
    "check_envelope",
    "PEReport",
    "RateReport",
    "EnvelopeReport",
    # Harness
    "ExperimentConfig",
    "ConfigLibrary",
    "RunArtifact",
    "load_config",
    "run_experiment",
    "load_run",
    "compare",
    "emit_plot_data",
]
