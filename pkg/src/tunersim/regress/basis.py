"""Declarative nonlinear basis functions f_l of lagged outputs and inputs."""

from __future__ import annotations

import math
from enum import Enum

from pydantic import BaseModel, Field, model_validator

from tunersim.core.errors import InvalidSpecError
from tunersim.core.vectors import Vector


class BasisKind(str, Enum):
    """Supported basis function families."""

    MONOMIAL = "monomial-product"
    SINE = "sine-of-lag"
    SATURATION = "saturation-of-lag"


class Signal(str, Enum):
    """Which plant signal a lag reference reads."""

    OUTPUT = "output"
    INPUT = "input"


class LagRef(BaseModel):
    """Reference to y_{k-lag} or u_{k-lag}, raised to ``exponent`` in monomials."""

    signal: Signal = Field(..., description="output (y) or input (u)")
    lag: int = Field(..., ge=1, description="Lag in samples")
    exponent: int = Field(1, ge=1, description="Exponent in a monomial product")


class BasisFn(BaseModel):
    """One basis function f_l(z_{k-1}, v_{k-d-1}).

    Output lags must lie in [1, n] and input lags in [1 + d, m + d].

    Example:
        >>> square = BasisFn.monomial((Signal.OUTPUT, 1, 2))
        >>> square.evaluate([2.0], [0.5], delay=0)
        4.0
    """

    kind: BasisKind = Field(BasisKind.MONOMIAL, description="Function family")
    lag_refs: list[LagRef] = Field(default_factory=list, description="Lagged signals used")
    scale: float = Field(1.0, description="Argument scale for sine and saturation")

    @model_validator(mode="after")
    def _check_arity(self) -> BasisFn:
        if self.kind != BasisKind.MONOMIAL and len(self.lag_refs) != 1:
            raise ValueError(f"{self.kind.value} takes exactly one lag reference")
        return self

    @classmethod
    def constant(cls) -> BasisFn:
        """The constant function 1 (empty monomial)."""
        return cls(kind=BasisKind.MONOMIAL)

    @classmethod
    def monomial(cls, *refs: tuple[Signal, int, int]) -> BasisFn:
        """Product of lagged signals raised to integer powers."""
        return cls(
            kind=BasisKind.MONOMIAL,
            lag_refs=[LagRef(signal=s, lag=lag, exponent=e) for s, lag, e in refs],
        )

    @classmethod
    def sine(cls, signal: Signal, lag: int, scale: float = 1.0) -> BasisFn:
        """sin(scale * x) of one lagged signal."""
        return cls(kind=BasisKind.SINE, lag_refs=[LagRef(signal=signal, lag=lag)], scale=scale)

    @classmethod
    def saturation(cls, signal: Signal, lag: int, scale: float = 1.0) -> BasisFn:
        """clip(scale * x, -1, 1) of one lagged signal."""
        return cls(
            kind=BasisKind.SATURATION, lag_refs=[LagRef(signal=signal, lag=lag)], scale=scale
        )

    def check_lags(self, n: int, m: int, delay: int) -> None:
        """Raise InvalidSpecError if a lag falls outside the plant's regressor."""
        for ref in self.lag_refs:
            if ref.signal == Signal.OUTPUT and not 1 <= ref.lag <= n:
                raise InvalidSpecError(f"output lag {ref.lag} outside [1, {n}]")
            if ref.signal == Signal.INPUT and not 1 + delay <= ref.lag <= m + delay:
                raise InvalidSpecError(
                    f"input lag {ref.lag} outside [{1 + delay}, {m + delay}]"
                )

    def _lookup(
        self,
        ref: LagRef,
        z_lags: Vector | list[float],
        v_lags: Vector | list[float],
        delay: int,
    ) -> float:
        if ref.signal == Signal.OUTPUT:
            return float(z_lags[ref.lag - 1])
        return float(v_lags[ref.lag - delay - 1])

    def evaluate(
        self,
        z_lags: Vector | list[float],
        v_lags: Vector | list[float],
        delay: int = 0,
    ) -> float:
        """Evaluate on z = [y_{k-1}, ..., y_{k-n}] and v = [u_{k-d-1}, ..., u_{k-d-m}]."""
        self.check_lags(len(z_lags), len(v_lags), delay)
        if self.kind == BasisKind.MONOMIAL:
            value = 1.0
            for ref in self.lag_refs:
                value *= self._lookup(ref, z_lags, v_lags, delay) ** ref.exponent
            return value

        x = self.scale * self._lookup(self.lag_refs[0], z_lags, v_lags, delay)
        if self.kind == BasisKind.SINE:
            return math.sin(x)
        return min(1.0, max(-1.0, x))
