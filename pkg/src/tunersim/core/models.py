"""Core models shared by the regressor, tuner and analysis layers.

Serialisable settings are pydantic models. Per-iteration values (samples,
tuner states, step diagnostics) are frozen dataclasses over numpy arrays,
since a run creates one of each per iteration.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from numpy.typing import ArrayLike
from pydantic import BaseModel, Field, model_validator

from tunersim.core.vectors import Vector, as_vector, inner, sq_norm


class Algorithm(str, Enum):
    """Parameter update laws."""

    NGD = "NGD"
    HB = "HB"
    NA = "NA"
    HB_CLASSICAL = "HB-classical"
    NA_CLASSICAL = "NA-classical"

    @property
    def has_vartheta(self) -> bool:
        """Whether the law carries the auxiliary iterate and a Lyapunov function."""
        return self in (Algorithm.HB, Algorithm.NA)

    @property
    def has_theta_prev(self) -> bool:
        """Whether the law needs the previous estimate (classical momentum)."""
        return self in (Algorithm.HB_CLASSICAL, Algorithm.NA_CLASSICAL)


class BoundMode(str, Enum):
    """Which gamma bound the hyperparameter validator enforces."""

    THEOREM = "theorem"
    STRICT = "strict"


class HyperParams(BaseModel):
    """Hyperparameters for one update law.

    ``alpha`` is the NGD step. ``beta`` and ``gamma`` are the high-order tuner
    constants, or the momentum and step of the classical forms.

    Example:
        >>> hp = HyperParams(algorithm=Algorithm.HB, beta=0.5, gamma=0.0938)
        >>> hp.name
        'HB'
    """

    algorithm: Algorithm = Field(..., description="Update law")
    alpha: float | None = Field(None, description="NGD step size")
    beta: float | None = Field(None, description="beta, or beta-bar for classical forms")
    gamma: float | None = Field(None, description="gamma, or gamma-bar for classical forms")
    label: str | None = Field(None, description="Trace label (defaults to the algorithm name)")
    override: bool = Field(False, description="Run even if the validator reports violations")

    @model_validator(mode="after")
    def _check_required(self) -> HyperParams:
        if self.algorithm == Algorithm.NGD:
            if self.alpha is None:
                raise ValueError("NGD requires alpha")
        elif self.beta is None or self.gamma is None:
            raise ValueError(f"{self.algorithm.value} requires beta and gamma")
        return self

    @property
    def name(self) -> str:
        """Label used in traces and reports."""
        return self.label or self.algorithm.value

    @property
    def lyapunov_gamma(self) -> float | None:
        """gamma used by the Lyapunov function, None for laws without one."""
        return self.gamma if self.algorithm.has_vartheta else None


@dataclass(frozen=True, eq=False)
class RegressorSample:
    """One (phi_k, y_k, N_k) triple, the only per-step input of the tuners."""

    k: int
    phi: Vector
    y: float
    norm_sq: float
    n_k: float

    @classmethod
    def build(cls, k: int, phi: ArrayLike, y: float) -> RegressorSample:
        """Create a sample, computing ||phi||^2 and N_k = 1 + ||phi||^2."""
        vec = as_vector(phi, name="phi")
        norm_sq = sq_norm(vec)
        return cls(k=k, phi=vec, y=float(y), norm_sq=norm_sq, n_k=1.0 + norm_sq)

    @classmethod
    def from_theta(cls, k: int, phi: ArrayLike, theta_star: Vector) -> RegressorSample:
        """Create a sample whose output is y_k = phi_k^T theta_star."""
        vec = as_vector(phi, name="phi", dim=theta_star.shape[0])
        return cls.build(k, vec, inner(vec, theta_star))

    @property
    def dim(self) -> int:
        """Regressor dimension D."""
        return int(self.phi.shape[0])


@dataclass(frozen=True, eq=False)
class TunerState:
    """Iterates of an update law after ``k`` steps.

    ``vartheta`` is used by HB/NA, ``theta_prev`` by the classical forms and
    ``theta_bar_last`` records the NA intermediate iterate of the last step.
    """

    theta: Vector
    vartheta: Vector
    theta_prev: Vector
    theta_bar_last: Vector | None = None
    k: int = 0

    @classmethod
    def initial(cls, theta0: ArrayLike) -> TunerState:
        """State with every iterate equal to theta0, so momentum starts at zero."""
        theta = as_vector(theta0, name="theta0")
        return cls(theta=theta.copy(), vartheta=theta.copy(), theta_prev=theta.copy())

    @property
    def dim(self) -> int:
        """Parameter dimension D."""
        return int(self.theta.shape[0])


@dataclass(frozen=True)
class StepDiagnostics:
    """Per-step diagnostics, taken at the pre-update iterate."""

    e_y: float
    loss: float
    grad_norm: float


class TraceRecord(BaseModel):
    """One logged iteration of a run.

    Row k holds the iterate after the k-th update; ``e_y`` is phi_k^T theta_k - y_k
    so every row can be recomputed from itself and the k-th sample.
    """

    k: int = Field(..., ge=0, description="Iteration index")
    algorithm: str = Field(..., description="Run label")
    e_y: float = Field(..., description="Prediction error on sample k")
    param_err: float = Field(..., description="||theta_k - theta_star||")
    v: float | None = Field(None, description="Lyapunov value (HB/NA only)")
    theta: list[float] = Field(..., description="theta_k")
    vartheta: list[float] | None = Field(None, description="vartheta_k (HB/NA only)")

    @property
    def dim(self) -> int:
        return len(self.theta)
