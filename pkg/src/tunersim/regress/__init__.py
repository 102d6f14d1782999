"""Regressor generation: plants, basis functions and closed-form sources."""

from tunersim.regress.basis import BasisFn, BasisKind, LagRef, Signal
from tunersim.regress.plant import PlantSpec, build_regressor, simulate_plant
from tunersim.regress.sources import (
    ConstantSource,
    FileSource,
    InputSignal,
    PiecewiseSource,
    PlantSource,
    RegressorSource,
    Segment,
    SinusoidComponent,
    SinusoidSource,
    read_regressor_csv,
    regressor_stream,
    source_dim,
)

__all__ = [
    # Plant model
    "PlantSpec",
    "BasisFn",
    "BasisKind",
    "LagRef",
    "Signal",
    "build_regressor",
    "simulate_plant",
    # Sources
    "RegressorSource",
    "ConstantSource",
    "PiecewiseSource",
    "Segment",
    "SinusoidSource",
    "SinusoidComponent",
    "PlantSource",
    "InputSignal",
    "FileSource",
    "regressor_stream",
    "read_regressor_csv",
    "source_dim",
]
