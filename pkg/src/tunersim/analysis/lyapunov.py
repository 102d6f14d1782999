"""Lyapunov function, parameter error and trace-level envelope checks."""

from __future__ import annotations

import math
from collections.abc import Sequence

from pydantic import BaseModel, Field

from tunersim.core.errors import InvalidArgumentError
from tunersim.core.vectors import Vector, check_same_dim, norm, sq_norm

DEFAULT_ENVELOPE_TOLERANCE = 1e-9
DEFAULT_MONOTONE_TOLERANCE = 1e-10


class EnvelopeReport(BaseModel):
    """Result of checking V_k <= exp(-mu floor(k / delta_t)) V_0."""

    holds: bool = Field(..., description="Whether every V_k stays inside the envelope")
    first_violation_k: int | None = Field(None, description="First k outside the envelope")
    max_ratio: float = Field(..., description="max_k V_k / (exp(-mu floor(k/dT)) V_0)")
    mu: float = Field(..., description="Decay constant checked")
    delta_t: int = Field(..., description="Window length checked")
    tolerance: float = Field(..., description="Relative tolerance")


class MonotoneReport(BaseModel):
    """Result of checking V_{k+1} <= V_k + tolerance max(1, V_0)."""

    holds: bool
    first_violation_k: int | None = Field(None, description="k + 1 of the first increase")
    max_increase: float = Field(..., description="Largest V_{k+1} - V_k (may be negative)")
    tolerance: float


def lyapunov(theta: Vector, vartheta: Vector, theta_star: Vector, gamma: float) -> float:
    """V = (||vartheta - theta_star||^2 + ||theta - vartheta||^2) / gamma.

    Raises:
        InvalidArgumentError: gamma <= 0
        InvalidSpecError: dimension mismatch
    """
    if not gamma > 0.0:
        raise InvalidArgumentError(f"gamma must be positive, got {gamma}")
    check_same_dim([theta, vartheta, theta_star], ["theta", "vartheta", "theta_star"])
    return (sq_norm(vartheta - theta_star) + sq_norm(theta - vartheta)) / gamma


def parameter_error(theta: Vector, theta_star: Vector) -> float:
    """||theta - theta_star||."""
    check_same_dim([theta, theta_star], ["theta", "theta_star"])
    return norm(theta - theta_star)


def check_envelope(
    v_trace: Sequence[float],
    mu: float,
    delta_t: int,
    tolerance: float = DEFAULT_ENVELOPE_TOLERANCE,
) -> EnvelopeReport:
    """Check V_k <= exp(-mu floor(k / delta_t)) V_0 (1 + tolerance) for every k.

    ``v_trace[0]`` is V_0. For V_0 = 0 the envelope holds iff every V_k is 0;
    the ratio is then reported as 0 or inf.
    """
    if not v_trace:
        raise InvalidArgumentError("v_trace is empty")
    if delta_t < 1:
        raise InvalidArgumentError("delta_t must be >= 1")

    v0 = float(v_trace[0])
    first_violation: int | None = None
    max_ratio = 0.0
    for k, v in enumerate(v_trace):
        bound = math.exp(-mu * (k // delta_t)) * v0
        if bound > 0.0:
            ratio = v / bound
        else:
            ratio = math.inf if v > 0.0 else 0.0
        max_ratio = max(max_ratio, ratio)
        if first_violation is None and ratio > 1.0 + tolerance:
            first_violation = k

    return EnvelopeReport(
        holds=first_violation is None,
        first_violation_k=first_violation,
        max_ratio=max_ratio,
        mu=mu,
        delta_t=delta_t,
        tolerance=tolerance,
    )


def check_monotone(
    v_trace: Sequence[float], tolerance: float = DEFAULT_MONOTONE_TOLERANCE
) -> MonotoneReport:
    """Check that V never grows by more than tolerance max(1, V_0) in one step."""
    if not v_trace:
        raise InvalidArgumentError("v_trace is empty")

    slack = tolerance * max(1.0, float(v_trace[0]))
    first_violation: int | None = None
    max_increase = -math.inf
    for k in range(1, len(v_trace)):
        increase = float(v_trace[k]) - float(v_trace[k - 1])
        max_increase = max(max_increase, increase)
        if first_violation is None and increase > slack:
            first_violation = k

    return MonotoneReport(
        holds=first_violation is None,
        first_violation_k=first_violation,
        max_increase=max_increase if len(v_trace) > 1 else 0.0,
        tolerance=tolerance,
    )
