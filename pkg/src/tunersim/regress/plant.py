"""Discrete-time plant models in linear-regression form.

The plant

    y_k = -sum_i a_i y_{k-i} + sum_j b_j u_{k-j-d} + sum_l c_l f_l(z_{k-1}, v_{k-d-1})

is written as y_k = phi_k^T theta_star with

    phi_k      = [y_{k-1}, ..., y_{k-n}, u_{k-d-1}, ..., u_{k-d-m}, f_1, ..., f_p]
    theta_star = [-a_1, ..., -a_n, b_1, ..., b_m, c_1, ..., c_p]

i.e. the a-block is stored negated so the regression identity holds exactly.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence

import numpy as np
from pydantic import BaseModel, Field, model_validator

from tunersim.core.errors import DivergenceError, InvalidSpecError
from tunersim.core.models import RegressorSample
from tunersim.core.vectors import Vector, all_finite, as_vector, inner
from tunersim.regress.basis import BasisFn

logger = logging.getLogger(__name__)


class PlantSpec(BaseModel):
    """Coefficients, delay and basis of a plant.

    ``initial_outputs`` holds [y_0, y_{-1}, ..., y_{1-n}]; it defaults to zeros.
    """

    a_coeffs: list[float] = Field(default_factory=list, description="a_i, i = 1..n")
    b_coeffs: list[float] = Field(default_factory=list, description="b_j, j = 1..m")
    c_coeffs: list[float] = Field(default_factory=list, description="c_l, l = 1..p")
    delay_d: int = Field(0, ge=0, description="Input delay d in samples")
    basis: list[BasisFn] = Field(default_factory=list, description="Basis functions f_l")
    initial_outputs: list[float] | None = Field(None, description="[y_0, ..., y_{1-n}]")

    @model_validator(mode="after")
    def _check_shapes(self) -> PlantSpec:
        if len(self.c_coeffs) != len(self.basis):
            raise ValueError(
                f"{len(self.c_coeffs)} c coefficients for {len(self.basis)} basis functions"
            )
        if self.initial_outputs is None:
            self.initial_outputs = [0.0] * self.n
        elif len(self.initial_outputs) != self.n:
            raise ValueError(f"initial_outputs needs {self.n} values")
        for fn in self.basis:
            fn.check_lags(self.n, self.m, self.delay_d)
        return self

    @property
    def n(self) -> int:
        """Number of output lags."""
        return len(self.a_coeffs)

    @property
    def m(self) -> int:
        """Number of input lags."""
        return len(self.b_coeffs)

    @property
    def p(self) -> int:
        """Number of basis functions."""
        return len(self.c_coeffs)

    @property
    def dim(self) -> int:
        """Regressor dimension D = n + m + p."""
        return self.n + self.m + self.p

    @property
    def theta_star(self) -> Vector:
        """True parameter vector with the a-block negated."""
        return as_vector([-a for a in self.a_coeffs] + self.b_coeffs + self.c_coeffs,
                         name="theta_star")

    def regressor(self, z_lags: Sequence[float], v_lags: Sequence[float]) -> Vector:
        """build_regressor with lag vectors checked against this plant."""
        if len(z_lags) != self.n or len(v_lags) != self.m:
            raise InvalidSpecError(
                f"lag vectors of size ({len(z_lags)}, {len(v_lags)}), "
                f"plant expects ({self.n}, {self.m})"
            )
        return build_regressor(z_lags, v_lags, self.basis, delay=self.delay_d)


def build_regressor(
    z_lags: Sequence[float],
    v_lags: Sequence[float],
    basis: Sequence[BasisFn],
    delay: int = 0,
) -> Vector:
    """Concatenate [z_lags, v_lags, f_1(z, v), ..., f_p(z, v)].

    Example:
        >>> build_regressor([1.0, 2.0], [3.0], [])
        array([1., 2., 3.])
    """
    z = [float(x) for x in z_lags]
    v = [float(x) for x in v_lags]
    features = [fn.evaluate(z, v, delay) for fn in basis]
    return np.array(z + v + features, dtype=np.float64)


def _input_at(inputs: Vector, j: int) -> float:
    return float(inputs[j]) if j >= 0 else 0.0


def simulate_plant(
    spec: PlantSpec,
    input_seq: Sequence[float] | Vector,
    horizon: int,
) -> list[RegressorSample]:
    """Run the plant open-loop for ``horizon`` samples, k = 1..horizon.

    ``input_seq[j]`` is u_j for j >= 0; the plant is at rest before k = 0
    (u_j = 0 for j < 0). Plants with input lags need at least ``horizon - d``
    inputs.

    Raises:
        InvalidSpecError: too few inputs or horizon < 1
        DivergenceError: a regressor or output became non-finite
    """
    if horizon < 1:
        raise InvalidSpecError("horizon must be >= 1")
    inputs = as_vector(input_seq, name="input_seq")
    needed = max(0, horizon - spec.delay_d) if spec.m else 0
    if inputs.shape[0] < needed:
        raise InvalidSpecError(f"input sequence has {inputs.shape[0]} values, needs {needed}")

    theta_star = spec.theta_star
    d, m = spec.delay_d, spec.m
    z = list(spec.initial_outputs or [])
    samples: list[RegressorSample] = []

    for k in range(1, horizon + 1):
        v = [_input_at(inputs, k - d - j) for j in range(1, m + 1)]
        try:
            with np.errstate(over="ignore", invalid="ignore"):
                phi = spec.regressor(z, v)
                y = inner(phi, theta_star)
                sample = RegressorSample.build(k, phi, y)
        except OverflowError as exc:
            raise DivergenceError(iteration=k, detail=f"basis overflow ({exc})") from exc

        if not all_finite(sample.phi, sample.y, sample.n_k):
            logger.warning("Plant output diverged at k=%d", k)
            raise DivergenceError(iteration=k, detail="plant signal is not finite")

        samples.append(sample)
        if z:
            z = [y] + z[:-1]

    logger.debug("Simulated plant n=%d m=%d p=%d for %d samples", spec.n, m, spec.p, horizon)
    return samples
