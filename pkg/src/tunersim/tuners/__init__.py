"""Parameter update laws and hyperparameter validation."""

from tunersim.tuners.hyperparams import (
    HyperParamCheck,
    HyperParamViolation,
    hb_gamma_bound,
    na_gamma_bound,
    validate_hyperparams,
)
from tunersim.tuners.loss import loss_and_gradient, prediction_error
from tunersim.tuners.steps import (
    STEP_FUNCTIONS,
    classical_hb_step,
    classical_nesterov_step,
    hb_step,
    is_finite_state,
    na_step,
    ngd_step,
    step,
)

__all__ = [
    # Loss
    "loss_and_gradient",
    "prediction_error",
    # Update laws
    "ngd_step",
    "hb_step",
    "na_step",
    "classical_hb_step",
    "classical_nesterov_step",
    "step",
    "STEP_FUNCTIONS",
    "is_finite_state",
    # Validation
    "validate_hyperparams",
    "HyperParamCheck",
    "HyperParamViolation",
    "hb_gamma_bound",
    "na_gamma_bound",
]
