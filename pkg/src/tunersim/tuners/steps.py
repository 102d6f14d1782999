"""Per-iteration update laws.

Every step is a pure transition ``(state, sample, hp) -> (state, diagnostics)``.
Diagnostics carry the prediction error and loss at the pre-update estimate
theta_k, and the norm of the gradient that drives the update (the one at
theta_{k+1} for HB, the one feeding vartheta for NA, the look-ahead gradient
for classical Nesterov).

Stabilised Heavy-Ball (two first-order iterates):

    theta_{k+1}    = theta_k - beta (theta_k - vartheta_k)
    vartheta_{k+1} = vartheta_k - gamma grad L_k(theta_{k+1}) / N_k

Stabilised Nesterov:

    theta_bar_k    = theta_k - gamma beta grad L_k(theta_k) / N_k
    theta_{k+1}    = theta_bar_k - beta (theta_bar_k - vartheta_k)
    vartheta_{k+1} = vartheta_k - gamma grad L_k(theta_{k+1}) / N_k
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import replace

from tunersim.core.errors import DivergenceError, InvalidArgumentError
from tunersim.core.models import (
    Algorithm,
    HyperParams,
    RegressorSample,
    StepDiagnostics,
    TunerState,
)
from tunersim.core.vectors import Vector, all_finite, norm
from tunersim.tuners.loss import loss_and_gradient, prediction_error

StepFn = Callable[[TunerState, RegressorSample, HyperParams], tuple[TunerState, StepDiagnostics]]


def _require(hp: HyperParams, algorithm: Algorithm) -> None:
    if hp.algorithm != algorithm:
        raise InvalidArgumentError(
            f"{algorithm.value} step called with {hp.algorithm.value} hyperparameters"
        )


def _diagnostics(state: TunerState, sample: RegressorSample, grad: Vector) -> StepDiagnostics:
    e_y = prediction_error(state.theta, sample)
    return StepDiagnostics(e_y=e_y, loss=0.5 * e_y * e_y, grad_norm=norm(grad))


def _check_finite(state: TunerState, algorithm: Algorithm, *vectors: Vector) -> None:
    if not all_finite(*vectors):
        raise DivergenceError(
            iteration=state.k + 1,
            algorithm=algorithm.value,
            detail="iterate is not finite",
        )


def ngd_step(
    state: TunerState, sample: RegressorSample, hp: HyperParams
) -> tuple[TunerState, StepDiagnostics]:
    """theta <- theta - alpha grad L(theta) / N.

    Example:
        >>> hp = HyperParams(algorithm=Algorithm.NGD, alpha=0.0469)
        >>> sample = RegressorSample.build(1, [1.0, -2.0, 1.0], 27.0)
        >>> new, diag = ngd_step(TunerState.initial([0.0, 0.0, 0.0]), sample, hp)
        >>> diag.e_y
        -27.0
    """
    _require(hp, Algorithm.NGD)
    assert hp.alpha is not None

    _, grad = loss_and_gradient(state.theta, sample)
    theta = state.theta - (hp.alpha / sample.n_k) * grad
    _check_finite(state, Algorithm.NGD, theta)

    new_state = replace(state, theta=theta, vartheta=theta, theta_prev=state.theta, k=state.k + 1)
    return new_state, _diagnostics(state, sample, grad)


def hb_step(
    state: TunerState, sample: RegressorSample, hp: HyperParams
) -> tuple[TunerState, StepDiagnostics]:
    """Stabilised Heavy-Ball step: theta first, then vartheta with grad at theta_{k+1}."""
    _require(hp, Algorithm.HB)
    assert hp.beta is not None and hp.gamma is not None

    theta = state.theta - hp.beta * (state.theta - state.vartheta)
    _, grad = loss_and_gradient(theta, sample)
    vartheta = state.vartheta - (hp.gamma / sample.n_k) * grad
    _check_finite(state, Algorithm.HB, theta, vartheta)

    new_state = replace(
        state, theta=theta, vartheta=vartheta, theta_prev=state.theta, k=state.k + 1
    )
    return new_state, _diagnostics(state, sample, grad)


def na_step(
    state: TunerState, sample: RegressorSample, hp: HyperParams
) -> tuple[TunerState, StepDiagnostics]:
    """Stabilised Nesterov step.

    Evaluation order is theta_bar, then theta_{k+1}, then vartheta_{k+1};
    theta_bar is kept in ``theta_bar_last``.
    """
    _require(hp, Algorithm.NA)
    assert hp.beta is not None and hp.gamma is not None

    _, grad_k = loss_and_gradient(state.theta, sample)
    theta_bar = state.theta - (hp.gamma * hp.beta / sample.n_k) * grad_k
    theta = theta_bar - hp.beta * (theta_bar - state.vartheta)
    _, grad = loss_and_gradient(theta, sample)
    vartheta = state.vartheta - (hp.gamma / sample.n_k) * grad
    _check_finite(state, Algorithm.NA, theta_bar, theta, vartheta)

    new_state = TunerState(
        theta=theta,
        vartheta=vartheta,
        theta_prev=state.theta,
        theta_bar_last=theta_bar,
        k=state.k + 1,
    )
    return new_state, _diagnostics(state, sample, grad)


def classical_hb_step(
    state: TunerState, sample: RegressorSample, hp: HyperParams
) -> tuple[TunerState, StepDiagnostics]:
    """theta <- theta - gamma_bar grad L(theta) / N + beta_bar (theta - theta_prev).

    No stability guarantee; adversarial regressors can make it diverge.
    """
    _require(hp, Algorithm.HB_CLASSICAL)
    assert hp.beta is not None and hp.gamma is not None

    _, grad = loss_and_gradient(state.theta, sample)
    momentum = hp.beta * (state.theta - state.theta_prev)
    theta = state.theta - (hp.gamma / sample.n_k) * grad + momentum
    _check_finite(state, Algorithm.HB_CLASSICAL, theta)

    new_state = replace(state, theta=theta, vartheta=theta, theta_prev=state.theta, k=state.k + 1)
    return new_state, _diagnostics(state, sample, grad)


def classical_nesterov_step(
    state: TunerState, sample: RegressorSample, hp: HyperParams
) -> tuple[TunerState, StepDiagnostics]:
    """Classical Nesterov step with the gradient at theta + beta_bar (theta - theta_prev).

    Example:
        >>> hp = HyperParams(algorithm=Algorithm.NA_CLASSICAL, beta=0.5, gamma=0.1)
        >>> state = TunerState(theta=as_vector([1.0]), vartheta=as_vector([1.0]),
        ...                    theta_prev=as_vector([0.0]))
        >>> new, _ = classical_nesterov_step(state, RegressorSample.build(1, [1.0], 0.0), hp)
        >>> float(new.theta[0])
        1.425
    """
    _require(hp, Algorithm.NA_CLASSICAL)
    assert hp.beta is not None and hp.gamma is not None

    momentum = hp.beta * (state.theta - state.theta_prev)
    _, grad = loss_and_gradient(state.theta + momentum, sample)
    theta = state.theta - (hp.gamma / sample.n_k) * grad + momentum
    _check_finite(state, Algorithm.NA_CLASSICAL, theta)

    new_state = replace(state, theta=theta, vartheta=theta, theta_prev=state.theta, k=state.k + 1)
    return new_state, _diagnostics(state, sample, grad)


STEP_FUNCTIONS: dict[Algorithm, StepFn] = {
    Algorithm.NGD: ngd_step,
    Algorithm.HB: hb_step,
    Algorithm.NA: na_step,
    Algorithm.HB_CLASSICAL: classical_hb_step,
    Algorithm.NA_CLASSICAL: classical_nesterov_step,
}


def step(
    state: TunerState, sample: RegressorSample, hp: HyperParams
) -> tuple[TunerState, StepDiagnostics]:
    """Dispatch to the update law named by ``hp.algorithm``."""
    return STEP_FUNCTIONS[hp.algorithm](state, sample, hp)


def is_finite_state(state: TunerState) -> bool:
    """True when every stored iterate is finite."""
    vectors = [state.theta, state.vartheta, state.theta_prev]
    if state.theta_bar_last is not None:
        vectors.append(state.theta_bar_last)
    return all_finite(*vectors)
