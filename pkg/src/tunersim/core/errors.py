"""Exception hierarchy for TunerSim."""

from __future__ import annotations


class TunerSimError(Exception):
    """Base class for all TunerSim errors."""


class InvalidSpecError(TunerSimError, ValueError):
    """A source, plant or vector does not have the declared shape."""


class InvalidArgumentError(TunerSimError, ValueError):
    """An argument is outside the domain of the operation."""


class NotPersistentlyExcitingError(TunerSimError, ValueError):
    """A rate bound was requested for a regressor with zero excitation level."""


class IncompatibleRunsError(TunerSimError, ValueError):
    """Runs passed to a comparison do not share theta_star and horizon."""


class DivergenceError(TunerSimError, ArithmeticError):
    """A plant output or tuner iterate became non-finite."""

    def __init__(self, iteration: int, algorithm: str | None = None, detail: str = "") -> None:
        self.iteration = iteration
        self.algorithm = algorithm
        self.detail = detail
        where = f"{algorithm} " if algorithm else ""
        message = f"{where}diverged at iteration {iteration}"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)


class ParseError(TunerSimError, ValueError):
    """A CSV file could not be parsed."""

    def __init__(self, row: int, message: str) -> None:
        self.row = row
        super().__init__(f"row {row}: {message}")


class ConfigError(TunerSimError, ValueError):
    """An experiment configuration failed validation."""

    def __init__(self, field_path: str, message: str) -> None:
        self.field_path = field_path
        super().__init__(f"{field_path}: {message}" if field_path else message)


class UnavailableQuantityError(TunerSimError, ValueError):
    """A trace does not carry the requested quantity."""

    def __init__(self, quantity: str, algorithm: str) -> None:
        self.quantity = quantity
        self.algorithm = algorithm
        super().__init__(f"quantity '{quantity}' is not available for {algorithm}")
