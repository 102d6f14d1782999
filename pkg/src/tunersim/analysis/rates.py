"""Certified exponential decay constants for the high-order tuners.

Both bounds are min-of-terms expressions in free proof parameters
(lambda, eta and, for Nesterov, zeta). The reported mu is the largest value
over a midpoint grid of ``grid_points`` per axis, so open-interval endpoints
are never sampled.

Heavy-Ball (c1 = 11/8, c2 = 21/32):

    mu1 = c1 lam gamma eta^2 / dT
    mu2 = c2 dT (eps1 - gamma eta |1 - beta|)^2 lam gamma / (1 + gamma dT)^2
    mu3 = c1 (1 - lam) gamma / dT

Nesterov (c3 = 7/4, c4 = 9/16):

    mu1 = c3 lam gamma eta^2 / dT
    mu2 = c4 dT (eps2 - gamma eta (1 - beta))^2 lam gamma / (1 + gamma dT)^2
    mu3 = c4 gamma zeta^2 (1 - lam) / dT
    mu4 = c3 xi^2 (1 - lam) gamma / dT

with xi = (dT - gamma zeta dT - zeta gamma beta (1 + dT) / (1 - gamma beta))
        / (1 + gamma (1 - beta) dT + beta dT + zeta gamma beta (1 + dT) / (1 - gamma beta)).
"""

from __future__ import annotations

import logging

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, Field

from tunersim.analysis.excitation import PEReport
from tunersim.core.errors import InvalidArgumentError, NotPersistentlyExcitingError
from tunersim.core.models import Algorithm, BoundMode, HyperParams
from tunersim.tuners.hyperparams import validate_hyperparams

logger = logging.getLogger(__name__)

HB_C1 = 11.0 / 8.0
HB_C2 = 21.0 / 32.0
NA_C3 = 7.0 / 4.0
NA_C4 = 9.0 / 16.0

DEFAULT_GRID_POINTS = 200
ETA_CAP = 1e3

Array = NDArray[np.float64]


class RateReport(BaseModel):
    """Decay constant mu and the proof parameters that achieve it."""

    algorithm: Algorithm
    delta_t: int = Field(..., ge=1, description="Window length")
    epsilon_norm: float = Field(..., description="eps1 (HB) or eps2 (NA)")
    beta: float
    gamma: float
    lam: float = Field(..., description="lambda in (0, 1)")
    eta: float
    zeta: float | None = Field(None, description="Nesterov only")
    xi: float | None = Field(None, description="Nesterov only")
    mu_terms: list[float] = Field(..., description="mu_1..mu_3 (HB) or mu_1..mu_4 (NA)")
    mu: float = Field(..., description="min(mu_terms)")
    c_consts: list[float] = Field(..., description="(c1, c2) or (c3, c4)")
    eta_max: float = Field(..., description="Upper end of the eta search interval")
    zeta_max: float | None = Field(None, description="Upper end of the zeta interval")
    grid_points: int
    certified: bool = Field(
        ..., description="Theorem-mode hyperparameters are valid and 0 < mu < 1"
    )


def hb_rate_terms(
    lam: ArrayLike,
    eta: ArrayLike,
    eps1: float,
    beta: float,
    gamma: float,
    delta_t: int,
) -> tuple[Array, Array, Array]:
    """mu1, mu2, mu3 of the Heavy-Ball bound, broadcast over lam and eta."""
    lam_arr = np.asarray(lam, dtype=np.float64)
    eta_arr = np.asarray(eta, dtype=np.float64)
    mu1 = HB_C1 * lam_arr * gamma * eta_arr**2 / delta_t
    gap = eps1 - gamma * eta_arr * abs(1.0 - beta)
    mu2 = HB_C2 * delta_t * gap**2 * lam_arr * gamma / (1.0 + gamma * delta_t) ** 2
    mu3 = HB_C1 * (1.0 - lam_arr) * gamma / delta_t
    return np.broadcast_arrays(mu1, mu2, mu3)  # type: ignore[return-value]


def na_xi(zeta: ArrayLike, beta: float, gamma: float, delta_t: int) -> Array:
    """xi as a function of zeta."""
    zeta_arr = np.asarray(zeta, dtype=np.float64)
    coupling = zeta_arr * gamma * beta * (1.0 + delta_t) / (1.0 - gamma * beta)
    numerator = delta_t - gamma * zeta_arr * delta_t - coupling
    denominator = 1.0 + gamma * (1.0 - beta) * delta_t + beta * delta_t + coupling
    return numerator / denominator


def na_rate_terms(
    lam: ArrayLike,
    eta: ArrayLike,
    zeta: ArrayLike,
    eps2: float,
    beta: float,
    gamma: float,
    delta_t: int,
) -> tuple[Array, Array, Array, Array, Array]:
    """mu1..mu4 of the Nesterov bound and xi, broadcast over lam, eta and zeta."""
    lam_arr = np.asarray(lam, dtype=np.float64)
    eta_arr = np.asarray(eta, dtype=np.float64)
    zeta_arr = np.asarray(zeta, dtype=np.float64)
    xi = na_xi(zeta_arr, beta, gamma, delta_t)

    mu1 = NA_C3 * lam_arr * gamma * eta_arr**2 / delta_t
    gap = eps2 - gamma * eta_arr * (1.0 - beta)
    mu2 = NA_C4 * delta_t * gap**2 * lam_arr * gamma / (1.0 + gamma * delta_t) ** 2
    mu3 = NA_C4 * gamma * zeta_arr**2 * (1.0 - lam_arr) / delta_t
    mu4 = NA_C3 * xi**2 * (1.0 - lam_arr) * gamma / delta_t
    return np.broadcast_arrays(mu1, mu2, mu3, mu4, xi)  # type: ignore[return-value]


def midpoint_grid(upper: float, points: int) -> Array:
    """(i + 0.5) / points * upper for i = 0..points-1."""
    return (np.arange(points, dtype=np.float64) + 0.5) / points * upper


def _certified(algorithm: Algorithm, beta: float, gamma: float, mu: float) -> bool:
    hp = HyperParams(algorithm=algorithm, beta=beta, gamma=gamma)
    check = validate_hyperparams(hp, BoundMode.THEOREM)
    if not check.valid:
        logger.warning(
            "%s rate bound computed for hyperparameters outside the theorem bounds (%s)",
            algorithm.value,
            "; ".join(v.message for v in check.violations),
        )
    return check.valid and 0.0 < mu < 1.0


def _require_pe(pe: PEReport) -> float:
    if not pe.epsilon_norm > 0.0:
        raise NotPersistentlyExcitingError(
            f"regressor is not persistently exciting for dT={pe.delta_t} (epsilon_norm = 0)"
        )
    return pe.epsilon_norm


def rate_bound_hb(
    pe: PEReport,
    beta: float,
    gamma: float,
    grid_points: int = DEFAULT_GRID_POINTS,
) -> RateReport:
    """Maximise mu = min(mu1, mu2, mu3) over the (lambda, eta) grid.

    eta ranges over (0, eps1 / (gamma |1 - beta|)); for beta = 1 the upper end
    is capped at ETA_CAP.

    Raises:
        NotPersistentlyExcitingError: pe.epsilon_norm = 0
        InvalidArgumentError: gamma <= 0
    """
    eps1 = _require_pe(pe)
    if not gamma > 0.0:
        raise InvalidArgumentError(f"gamma must be positive, got {gamma}")
    delta_t = pe.delta_t

    slope = gamma * abs(1.0 - beta)
    eta_max = eps1 / slope if slope > 0.0 else ETA_CAP
    lam = midpoint_grid(1.0, grid_points)[:, None]
    eta = midpoint_grid(eta_max, grid_points)[None, :]

    mu1, mu2, mu3 = hb_rate_terms(lam, eta, eps1, beta, gamma, delta_t)
    mu_grid = np.minimum(np.minimum(mu1, mu2), mu3)
    i, j = np.unravel_index(int(np.argmax(mu_grid)), mu_grid.shape)

    terms = [float(mu1[i, j]), float(mu2[i, j]), float(mu3[i, j])]
    mu = min(terms)
    report = RateReport(
        algorithm=Algorithm.HB,
        delta_t=delta_t,
        epsilon_norm=eps1,
        beta=beta,
        gamma=gamma,
        lam=float(lam[i, 0]),
        eta=float(eta[0, j]),
        mu_terms=terms,
        mu=mu,
        c_consts=[HB_C1, HB_C2],
        eta_max=eta_max,
        grid_points=grid_points,
        certified=_certified(Algorithm.HB, beta, gamma, mu),
    )
    logger.info("HB rate bound: mu=%.6g at lambda=%.4g eta=%.4g", mu, report.lam, report.eta)
    return report


def rate_bound_na(
    pe: PEReport,
    beta: float,
    gamma: float,
    delta_t: int | None = None,
    grid_points: int = DEFAULT_GRID_POINTS,
) -> RateReport:
    """Maximise mu = min(mu1, mu2, mu3, mu4) over the (lambda, eta, zeta) grid.

    mu1, mu2 depend on (lambda, eta) and mu3, mu4 on (lambda, zeta), so for
    each lambda the maximum is the smaller of the two partial maxima; this
    equals the full three-axis grid search. Candidates with xi <= 0 are
    excluded.

    Raises:
        NotPersistentlyExcitingError: pe.epsilon_norm = 0
        InvalidArgumentError: gamma <= 0, beta outside (0, 1], gamma beta >= 1,
            delta_t different from the PE window, or no admissible zeta
    """
    eps2 = _require_pe(pe)
    if delta_t is None:
        delta_t = pe.delta_t
    elif delta_t != pe.delta_t:
        raise InvalidArgumentError(f"delta_t={delta_t} but PE was measured with {pe.delta_t}")
    if not gamma > 0.0:
        raise InvalidArgumentError(f"gamma must be positive, got {gamma}")
    if not 0.0 < beta <= 1.0:
        raise InvalidArgumentError(f"beta must lie in (0, 1], got {beta}")
    if gamma * beta >= 1.0:
        raise InvalidArgumentError(f"gamma * beta must be below 1, got {gamma * beta}")

    slope = gamma * (1.0 - beta)
    eta_max = eps2 / slope if slope > 0.0 else ETA_CAP
    zeta_max = (1.0 - gamma * beta) / (gamma * (1.0 + beta - gamma * beta))

    lam = midpoint_grid(1.0, grid_points)[:, None]
    eta = midpoint_grid(eta_max, grid_points)[None, :]
    zeta = midpoint_grid(zeta_max, grid_points)[None, :]

    mu1, mu2, mu3, mu4, xi = na_rate_terms(lam, eta, zeta, eps2, beta, gamma, delta_t)
    eta_side = np.minimum(mu1, mu2)
    zeta_side = np.where(xi > 0.0, np.minimum(mu3, mu4), -np.inf)
    if not np.isfinite(zeta_side).any():
        raise InvalidArgumentError("no zeta in the search interval gives xi > 0")

    j_eta = np.argmax(eta_side, axis=1)
    j_zeta = np.argmax(zeta_side, axis=1)
    rows = np.arange(grid_points)
    per_lambda = np.minimum(eta_side[rows, j_eta], zeta_side[rows, j_zeta])
    i = int(np.argmax(per_lambda))
    je, jz = int(j_eta[i]), int(j_zeta[i])

    terms = [float(mu1[i, je]), float(mu2[i, je]), float(mu3[i, jz]), float(mu4[i, jz])]
    mu = min(terms)
    report = RateReport(
        algorithm=Algorithm.NA,
        delta_t=delta_t,
        epsilon_norm=eps2,
        beta=beta,
        gamma=gamma,
        lam=float(lam[i, 0]),
        eta=float(eta[0, je]),
        zeta=float(zeta[0, jz]),
        xi=float(xi[i, jz]),
        mu_terms=terms,
        mu=mu,
        c_consts=[NA_C3, NA_C4],
        eta_max=eta_max,
        zeta_max=zeta_max,
        grid_points=grid_points,
        certified=_certified(Algorithm.NA, beta, gamma, mu),
    )
    logger.info(
        "NA rate bound: mu=%.6g at lambda=%.4g eta=%.4g zeta=%.4g xi=%.4g",
        mu,
        report.lam,
        report.eta,
        report.zeta,
        report.xi,
    )
    return report
