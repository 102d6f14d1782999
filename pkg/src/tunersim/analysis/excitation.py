"""Persistent excitation level of a regressor sequence.

For a window length dT the excitation level is

    epsilon = min over windows  min over unit w  (1/dT) sum_i |phi_i^T w|

where each window covers dT consecutive samples. The inner minimisation is
non-convex. Every window is first scored against a shared set of random
directions and its own information-matrix eigenvectors in one batched pass;
the most promising windows are then refined by Nelder-Mead on the sphere,
unless the lower bound below shows a window cannot beat the best level found.

A certified lower bound comes from |phi^T w| >= (phi^T w)^2 / ||phi||:

    epsilon_lb = min over windows  lambda_min(M) / (dT max_i ||phi_i||),   M = sum phi_i phi_i^T
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterable, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from pydantic import BaseModel, Field
from scipy.optimize import minimize

from tunersim.core.errors import InvalidArgumentError, InvalidSpecError
from tunersim.core.models import RegressorSample
from tunersim.core.vectors import Vector

logger = logging.getLogger(__name__)

DEFAULT_RANDOM_DIRECTIONS = 64
DEFAULT_REFINED_WINDOWS = 16
DEFAULT_SEEDS_PER_WINDOW = 2
PRUNE_TOLERANCE = 1e-12
DEFAULT_SENSITIVITY_WINDOWS = (5, 10, 20, 40)


class PEReport(BaseModel):
    """Excitation level of a regressor sequence for one window length."""

    delta_t: int = Field(..., ge=1, description="Window length in samples")
    epsilon: float = Field(..., description="Excitation level found by the sphere search")
    epsilon_lb: float = Field(..., description="Certified spectral lower bound")
    max_sqrt_nk: float = Field(..., description="max_k sqrt(N_k) over the analysed samples")
    epsilon_norm: float = Field(..., description="epsilon / max_sqrt_nk")
    window_count: int = Field(..., description="Number of windows analysed")
    worst_window_start: int = Field(..., description="k of the first sample in the worst window")
    direction: list[float] = Field(default_factory=list, description="Minimising unit vector")

    @property
    def epsilon_1(self) -> float:
        """Normalised level used by the Heavy-Ball rate bound."""
        return self.epsilon_norm

    @property
    def epsilon_2(self) -> float:
        """Normalised level used by the Nesterov rate bound."""
        return self.epsilon_norm


def _stack(samples: Sequence[RegressorSample]) -> np.ndarray:
    if not samples:
        raise InvalidArgumentError("window is empty")
    dims = {s.dim for s in samples}
    if len(dims) > 1:
        raise InvalidSpecError(f"samples have mixed dimensions {sorted(dims)}")
    if dims.pop() == 0:
        raise InvalidSpecError("regressors have dimension zero")
    return np.stack([s.phi for s in samples])


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def _sphere_objective(window: np.ndarray) -> Callable[[np.ndarray], float]:
    def objective(v: np.ndarray) -> float:
        length = float(np.linalg.norm(v))
        if length == 0.0:
            return math.inf
        return float(np.abs(window @ v).mean()) / length

    return objective


def pe_epsilon(
    samples: Sequence[RegressorSample],
    delta_t: int,
    *,
    random_directions: int = DEFAULT_RANDOM_DIRECTIONS,
    refined_windows: int = DEFAULT_REFINED_WINDOWS,
    seeds_per_window: int = DEFAULT_SEEDS_PER_WINDOW,
    seed: int = 0,
) -> PEReport:
    """Estimate the excitation level of ``samples`` for window length ``delta_t``.

    Args:
        samples: regressor samples, in iteration order
        delta_t: window length
        random_directions: shared random seed directions per window
        refined_windows: windows passed to the local descent
        seeds_per_window: best seed directions refined in each of those windows
        seed: seed of the random direction generator

    Raises:
        InvalidArgumentError: empty sample list, delta_t < 1 or fewer samples than delta_t
        InvalidSpecError: zero-dimensional or mixed-dimension regressors
    """
    phi = _stack(samples)
    if delta_t < 1:
        raise InvalidArgumentError("delta_t must be >= 1")
    if phi.shape[0] < delta_t:
        raise InvalidArgumentError(f"{phi.shape[0]} samples, window needs {delta_t}")
    dim = phi.shape[1]

    # windows[w, t, :] = phi of sample w + t
    windows = sliding_window_view(phi, (delta_t, dim))[:, 0]
    info = np.einsum("wti,wtj->wij", windows, windows)
    eigvals, eigvecs = np.linalg.eigh(info)

    rng = np.random.default_rng(seed)
    shared = rng.standard_normal((random_directions, dim))
    shared /= np.linalg.norm(shared, axis=1, keepdims=True)

    shared_scores = np.abs(np.einsum("wtd,sd->wts", windows, shared)).mean(axis=1)
    eigen_scores = np.abs(np.einsum("wtd,wde->wte", windows, eigvecs)).mean(axis=1)
    scores = np.concatenate([shared_scores, eigen_scores], axis=1)

    window_eps = scores.min(axis=1)
    best_seed = scores.argmin(axis=1)

    def seed_direction(w: int, index: int) -> Vector:
        if index < random_directions:
            return shared[index]
        return eigvecs[w][:, index - random_directions]

    directions = {w: seed_direction(w, int(best_seed[w])) for w in range(windows.shape[0])}

    max_norm = np.sqrt(np.einsum("wtd,wtd->wt", windows, windows)).max(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        lower = np.where(
            max_norm > 0.0, np.maximum(eigvals[:, 0], 0.0) / (delta_t * max_norm), 0.0
        )
    slack = PRUNE_TOLERANCE * max_norm

    # Local refinement of the lowest-scoring windows. A window is skipped when
    # its lower bound shows the descent cannot beat the best level found so far.
    refined = 0
    candidates = np.argsort(window_eps, kind="stable")[:refined_windows]
    for w in candidates:
        if lower[w] + slack[w] >= window_eps.min():
            continue
        refined += 1
        objective = _sphere_objective(windows[w])
        for index in np.argsort(scores[w], kind="stable")[:seeds_per_window]:
            result = minimize(
                objective,
                seed_direction(int(w), int(index)),
                method="Nelder-Mead",
                options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 200 * dim},
            )
            value = float(result.fun)
            if value < window_eps[w]:
                window_eps[w] = value
                directions[int(w)] = _unit(np.asarray(result.x, dtype=np.float64))
    logger.debug("PE dT=%d: refined %d of %d candidate windows", delta_t, refined, len(candidates))

    lower = np.minimum(lower, window_eps)

    worst = int(np.argmin(window_eps))
    epsilon = float(window_eps[worst])
    max_sqrt_nk = max(math.sqrt(s.n_k) for s in samples)
    report = PEReport(
        delta_t=delta_t,
        epsilon=epsilon,
        epsilon_lb=float(lower.min()),
        max_sqrt_nk=max_sqrt_nk,
        epsilon_norm=epsilon / max_sqrt_nk,
        window_count=int(windows.shape[0]),
        worst_window_start=samples[worst].k,
        direction=[float(x) for x in directions[worst]],
    )
    logger.info(
        "PE dT=%d: epsilon=%.6g (lb %.6g) over %d windows, worst starts at k=%d",
        delta_t,
        report.epsilon,
        report.epsilon_lb,
        report.window_count,
        report.worst_window_start,
    )
    return report


def pe_sensitivity(
    samples: Sequence[RegressorSample],
    delta_ts: Iterable[int] = DEFAULT_SENSITIVITY_WINDOWS,
    **kwargs: int,
) -> list[PEReport]:
    """One PEReport per window length; lengths beyond the sample count are skipped."""
    reports = []
    for delta_t in delta_ts:
        if delta_t > len(samples):
            logger.debug("Skipping dT=%d, only %d samples", delta_t, len(samples))
            continue
        reports.append(pe_epsilon(samples, delta_t, **kwargs))
    return reports
