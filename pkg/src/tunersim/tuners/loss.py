"""Squared prediction loss and its gradient."""

from __future__ import annotations

from tunersim.core.models import RegressorSample
from tunersim.core.vectors import Vector, inner


def prediction_error(theta: Vector, sample: RegressorSample) -> float:
    """e_y = phi^T theta - y."""
    return inner(sample.phi, theta) - sample.y


def loss_and_gradient(theta: Vector, sample: RegressorSample) -> tuple[float, Vector]:
    """Return L = (phi^T theta - y)^2 / 2 and grad = phi (phi^T theta - y).

    Only (phi, y) enter the gradient; theta_star is never needed.

    Example:
        >>> sample = RegressorSample.build(1, [1.0, -2.0, 1.0], 27.0)
        >>> loss, grad = loss_and_gradient(zeros(3), sample)
        >>> loss
        364.5
    """
    e = prediction_error(theta, sample)
    return 0.5 * e * e, sample.phi * e
