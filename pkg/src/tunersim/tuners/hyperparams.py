"""Hyperparameter validation against the stability theorems.

Violations are returned as data. Each carries a stable code, the computed
bound and the offending value:

    HP_001  NGD alpha outside (0, 2)
    HP_002  HB beta outside (0, 2)
    HP_003  HB gamma outside (0, beta (2 - beta) / 8)       (/16 in strict mode)
    HP_004  NA beta outside (0, 1)
    HP_005  NA gamma outside (0, beta (2 - beta) / (8 + beta^2))   (16 + beta^2 strict)
    HP_006  classical gamma_bar not positive
    HP_007  classical beta_bar outside [0, 1)
"""

from __future__ import annotations

import logging

from pydantic import BaseModel, Field

from tunersim.core.models import Algorithm, BoundMode, HyperParams

logger = logging.getLogger(__name__)


class HyperParamViolation(BaseModel):
    """One violated constraint."""

    code: str = Field(..., description="Stable violation code")
    parameter: str = Field(..., description="alpha, beta or gamma")
    message: str = Field(..., description="Human readable constraint")
    bound: float = Field(..., description="Bound the value was compared against")
    value: float = Field(..., description="Offending value")


class HyperParamCheck(BaseModel):
    """Result of validate_hyperparams."""

    algorithm: Algorithm
    mode: BoundMode
    gamma_bound: float | None = Field(None, description="Upper gamma bound for HB/NA")
    violations: list[HyperParamViolation] = Field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def add(self, code: str, parameter: str, message: str, bound: float, value: float) -> None:
        self.violations.append(
            HyperParamViolation(
                code=code, parameter=parameter, message=message, bound=bound, value=value
            )
        )


def hb_gamma_bound(beta: float, mode: BoundMode = BoundMode.THEOREM) -> float:
    """beta (2 - beta) / 8, or / 16 in strict mode."""
    denominator = 8.0 if mode == BoundMode.THEOREM else 16.0
    return beta * (2.0 - beta) / denominator


def na_gamma_bound(beta: float, mode: BoundMode = BoundMode.THEOREM) -> float:
    """beta (2 - beta) / (8 + beta^2), or / (16 + beta^2) in strict mode."""
    base = 8.0 if mode == BoundMode.THEOREM else 16.0
    return beta * (2.0 - beta) / (base + beta * beta)


def _check_gamma(
    result: HyperParamCheck, code: str, gamma: float, bound: float | None, mode: BoundMode
) -> None:
    """Positivity always; the upper bound only when beta admits one."""
    if gamma <= 0.0:
        result.add(code, "gamma", "gamma must be positive", 0.0, gamma)
    elif bound is not None and gamma > bound:
        result.add(
            code, "gamma", f"gamma exceeds the {mode.value}-mode bound {bound:.6g}", bound, gamma
        )


def validate_hyperparams(
    hp: HyperParams, mode: BoundMode = BoundMode.THEOREM
) -> HyperParamCheck:
    """Return every violated constraint of ``hp`` under ``mode``.

    Example:
        >>> check = validate_hyperparams(HyperParams(algorithm=Algorithm.HB, beta=0.5,
        ...                                          gamma=0.0938))
        >>> check.gamma_bound, check.valid
        (0.09375, False)
    """
    result = HyperParamCheck(algorithm=hp.algorithm, mode=mode)

    if hp.algorithm == Algorithm.NGD:
        assert hp.alpha is not None
        if hp.alpha <= 0.0:
            result.add("HP_001", "alpha", "alpha must be positive", 0.0, hp.alpha)
        elif hp.alpha >= 2.0:
            result.add("HP_001", "alpha", "alpha must be below 2", 2.0, hp.alpha)
        return result

    assert hp.beta is not None and hp.gamma is not None
    beta, gamma = hp.beta, hp.gamma

    if hp.algorithm == Algorithm.HB:
        if not 0.0 < beta < 2.0:
            result.add("HP_002", "beta", "beta must lie in (0, 2)", 2.0 if beta > 0 else 0.0, beta)
        else:
            result.gamma_bound = hb_gamma_bound(beta, mode)
        _check_gamma(result, "HP_003", gamma, result.gamma_bound, mode)

    elif hp.algorithm == Algorithm.NA:
        if not 0.0 < beta < 1.0:
            result.add("HP_004", "beta", "beta must lie in (0, 1)", 1.0 if beta > 0 else 0.0, beta)
        else:
            result.gamma_bound = na_gamma_bound(beta, mode)
        _check_gamma(result, "HP_005", gamma, result.gamma_bound, mode)

    else:
        if gamma <= 0.0:
            result.add("HP_006", "gamma", "gamma_bar must be positive", 0.0, gamma)
        if not 0.0 <= beta < 1.0:
            result.add(
                "HP_007", "beta", "beta_bar must lie in [0, 1)", 1.0 if beta >= 0 else 0.0, beta
            )

    if not result.valid:
        logger.debug(
            "%s hyperparameters violate %d constraint(s)", hp.name, len(result.violations)
        )
    return result
