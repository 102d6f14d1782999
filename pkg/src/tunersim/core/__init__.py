"""Core TunerSim types: vectors, samples, states and errors."""

from tunersim.core.errors import (
    ConfigError,
    DivergenceError,
    IncompatibleRunsError,
    InvalidArgumentError,
    InvalidSpecError,
    NotPersistentlyExcitingError,
    ParseError,
    TunerSimError,
    UnavailableQuantityError,
)
from tunersim.core.models import (
    Algorithm,
    BoundMode,
    HyperParams,
    RegressorSample,
    StepDiagnostics,
    TraceRecord,
    TunerState,
)
from tunersim.core.vectors import Vector, as_vector, inner, norm, sq_norm, zeros

__all__ = [
    # Models
    "Algorithm",
    "BoundMode",
    "HyperParams",
    "RegressorSample",
    "TunerState",
    "StepDiagnostics",
    "TraceRecord",
    # Vectors
    "Vector",
    "as_vector",
    "zeros",
    "inner",
    "sq_norm",
    "norm",
    # Errors
    "TunerSimError",
    "InvalidSpecError",
    "InvalidArgumentError",
    "NotPersistentlyExcitingError",
    "IncompatibleRunsError",
    "DivergenceError",
    "ParseError",
    "ConfigError",
    "UnavailableQuantityError",
]
