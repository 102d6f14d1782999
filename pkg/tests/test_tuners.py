"""Tests for the loss, the update laws and the hyperparameter validator."""

import math
from dataclasses import replace

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from tunersim.core.errors import DivergenceError, InvalidArgumentError
from tunersim.core.models import (
    Algorithm,
    BoundMode,
    HyperParams,
    RegressorSample,
    TunerState,
)
from tunersim.core.vectors import as_vector
from tunersim.tuners import (
    classical_hb_step,
    classical_nesterov_step,
    hb_gamma_bound,
    hb_step,
    is_finite_state,
    loss_and_gradient,
    na_gamma_bound,
    na_step,
    ngd_step,
    prediction_error,
    step,
    validate_hyperparams,
)

PHI = np.array([1.0, -2.0, 1.0])


def _state(theta: list[float], vartheta: list[float] | None = None,
           theta_prev: list[float] | None = None) -> TunerState:
    return TunerState(
        theta=as_vector(theta),
        vartheta=as_vector(vartheta if vartheta is not None else theta),
        theta_prev=as_vector(theta_prev if theta_prev is not None else theta),
    )


def _random_params(rng: np.random.Generator, algorithm: Algorithm) -> HyperParams:
    if algorithm == Algorithm.NGD:
        return HyperParams(algorithm=algorithm, alpha=rng.uniform(0.05, 1.95))
    if algorithm == Algorithm.HB:
        beta = rng.uniform(0.1, 1.9)
        return HyperParams(algorithm=algorithm, beta=beta,
                           gamma=hb_gamma_bound(beta) * rng.uniform(0.1, 1.0))
    if algorithm == Algorithm.NA:
        beta = rng.uniform(0.1, 0.9)
        return HyperParams(algorithm=algorithm, beta=beta,
                           gamma=na_gamma_bound(beta) * rng.uniform(0.1, 1.0))
    return HyperParams(algorithm=algorithm, beta=rng.uniform(0.0, 0.9),
                       gamma=rng.uniform(0.01, 1.0))


# ============================================================================
# Loss
# ============================================================================


class TestLoss:
    """Tests for prediction_error and loss_and_gradient."""

    def test_first_sample_of_jump_experiment(
        self, first_sample: RegressorSample
    ) -> None:
        """theta=0, phi=[1,-2,1], y=27 -> L=364.5, grad=[-27,54,-27]."""
        loss, grad = loss_and_gradient(np.zeros(3), first_sample)
        assert loss == 364.5
        assert_array_equal(grad, [-27.0, 54.0, -27.0])

    def test_prediction_error_sign(self, first_sample: RegressorSample) -> None:
        """e_y = phi^T theta - y."""
        assert prediction_error(np.zeros(3), first_sample) == -27.0

    def test_normalizer(self, first_sample: RegressorSample) -> None:
        """N = 1 + ||phi||^2 = 7."""
        assert first_sample.n_k == 7.0

    def test_gradient_matches_finite_differences(self, rng: np.random.Generator) -> None:
        """Central differences agree with the analytic gradient."""
        h = 1e-6
        for _ in range(200):
            dim = int(rng.integers(1, 9))
            sample = RegressorSample.build(1, rng.normal(size=dim), float(rng.normal()))
            theta = rng.normal(size=dim)
            _, grad = loss_and_gradient(theta, sample)
            numeric = np.empty(dim)
            for i in range(dim):
                offset = np.zeros(dim)
                offset[i] = h
                up, _ = loss_and_gradient(theta + offset, sample)
                down, _ = loss_and_gradient(theta - offset, sample)
                numeric[i] = (up - down) / (2 * h)
            assert_allclose(grad, numeric, rtol=1e-6, atol=1e-7)


# ============================================================================
# Update laws
# ============================================================================


class TestWorkedSteps:
    """Single steps on the first sample of the jump experiment."""

    def test_ngd(self, zero_state: TunerState, first_sample: RegressorSample,
                 ngd_params: HyperParams) -> None:
        """theta_1 = 0.0469 * 27 / 7 * [1, -2, 1]."""
        new, diag = ngd_step(zero_state, first_sample, ngd_params)
        assert_allclose(new.theta, 0.0469 * 27 / 7 * PHI, rtol=1e-12)
        assert_allclose(new.theta, [0.1809, -0.3618, 0.1809], atol=1e-4)
        assert diag.e_y == -27.0
        assert diag.loss == 364.5
        assert new.k == 1

    def test_hb(self, zero_state: TunerState, first_sample: RegressorSample,
                hb_params: HyperParams) -> None:
        """theta_1 stays 0, vartheta_1 = 0.0938 * 27 / 7 * [1, -2, 1]."""
        new, _ = hb_step(zero_state, first_sample, hb_params)
        assert_array_equal(new.theta, [0.0, 0.0, 0.0])
        assert_allclose(new.vartheta, 0.0938 * 27 / 7 * PHI, rtol=1e-12)
        assert_allclose(new.vartheta, [0.3618, -0.7236, 0.3618], atol=1e-4)

    def test_na(self, zero_state: TunerState, first_sample: RegressorSample,
                na_params: HyperParams) -> None:
        """theta_bar, theta_1 and vartheta_1 by hand."""
        new, _ = na_step(zero_state, first_sample, na_params)
        theta_bar = 0.0938 * 0.5 * 27 / 7 * PHI
        assert new.theta_bar_last is not None
        assert_allclose(new.theta_bar_last, theta_bar, rtol=1e-12)
        assert_allclose(new.theta, 0.5 * theta_bar, rtol=1e-12)

        e_next = 0.5 * float(theta_bar @ PHI) - 27.0
        assert_allclose(new.vartheta, -0.0938 / 7 * e_next * PHI, rtol=1e-12)
        assert new.vartheta[0] == pytest.approx(0.354528, abs=1e-6)

    def test_classical_hb(self) -> None:
        """Pure momentum: theta=[1,0], theta_prev=0, phi=0 -> [1.5, 0]."""
        hp = HyperParams(algorithm=Algorithm.HB_CLASSICAL, beta=0.5, gamma=0.1)
        sample = RegressorSample.build(1, [0.0, 0.0], 0.0)
        new, _ = classical_hb_step(_state([1.0, 0.0], theta_prev=[0.0, 0.0]), sample, hp)
        assert_array_equal(new.theta, [1.5, 0.0])
        assert_array_equal(new.theta_prev, [1.0, 0.0])

    def test_classical_nesterov(self) -> None:
        """Look-ahead gradient at 1.5 -> theta_1 = 1.425."""
        hp = HyperParams(algorithm=Algorithm.NA_CLASSICAL, beta=0.5, gamma=0.1)
        sample = RegressorSample.build(1, [1.0], 0.0)
        new, _ = classical_nesterov_step(_state([1.0], theta_prev=[0.0]), sample, hp)
        assert new.theta[0] == pytest.approx(1.425, abs=1e-15)


class TestStepProperties:
    """Structural properties of the update laws."""

    @pytest.mark.parametrize("algorithm", list(Algorithm))
    def test_fixed_point(self, algorithm: Algorithm, rng: np.random.Generator) -> None:
        """theta = vartheta = theta_prev = theta_star is preserved bit for bit."""
        for _ in range(50):
            dim = int(rng.integers(1, 9))
            theta_star = rng.normal(size=dim)
            sample = RegressorSample.from_theta(1, rng.normal(size=dim), theta_star)
            state = TunerState.initial(theta_star)
            new, _ = step(state, sample, _random_params(rng, algorithm))
            assert_array_equal(new.theta, theta_star)
            if algorithm.has_vartheta:
                assert_array_equal(new.vartheta, theta_star)

    def test_zero_regressor_freezes_ngd(self) -> None:
        """phi = 0 leaves the NGD estimate unchanged."""
        hp = HyperParams(algorithm=Algorithm.NGD, alpha=1.0)
        new, diag = ngd_step(_state([3.0, -1.0]), RegressorSample.build(1, [0.0, 0.0], 0.0), hp)
        assert_array_equal(new.theta, [3.0, -1.0])
        assert diag.grad_norm == 0.0

    def test_zero_regressor_contracts_hb(self) -> None:
        """phi = 0 pulls theta toward vartheta and leaves vartheta alone."""
        hp = HyperParams(algorithm=Algorithm.HB, beta=0.5, gamma=0.05)
        sample = RegressorSample.build(1, [0.0], 0.0)
        new, _ = hb_step(_state([4.0], vartheta=[0.0]), sample, hp)
        assert_array_equal(new.theta, [2.0])
        assert_array_equal(new.vartheta, [0.0])

    def test_classical_reduces_to_ngd_without_momentum(self, rng: np.random.Generator) -> None:
        """theta_prev = theta makes the classical step an NGD step."""
        for _ in range(50):
            theta = rng.normal(size=3)
            sample = RegressorSample.build(1, rng.normal(size=3), float(rng.normal()))
            gamma = float(rng.uniform(0.1, 1.5))
            classical = HyperParams(algorithm=Algorithm.HB_CLASSICAL, beta=0.7, gamma=gamma)
            ngd = HyperParams(algorithm=Algorithm.NGD, alpha=gamma)
            a, _ = classical_hb_step(TunerState.initial(theta), sample, classical)
            b, _ = ngd_step(TunerState.initial(theta), sample, ngd)
            assert_array_equal(a.theta, b.theta)

    def test_ngd_contracts_parameter_error(self, rng: np.random.Generator) -> None:
        """0 < alpha < 2 never increases ||theta - theta_star||."""
        for _ in range(500):
            dim = int(rng.integers(1, 9))
            theta_star = rng.normal(size=dim) * 10
            state = TunerState.initial(rng.normal(size=dim))
            hp = _random_params(rng, Algorithm.NGD)
            for k in range(1, 21):
                sample = RegressorSample.from_theta(k, rng.normal(size=dim), theta_star)
                before = np.linalg.norm(state.theta - theta_star)
                state, _ = ngd_step(state, sample, hp)
                after = np.linalg.norm(state.theta - theta_star)
                assert after <= before * (1 + 1e-12) + 1e-12

    def test_wrong_hyperparameters(self, zero_state: TunerState,
                                   first_sample: RegressorSample,
                                   ngd_params: HyperParams) -> None:
        """Each step checks it received its own algorithm's constants."""
        with pytest.raises(InvalidArgumentError):
            hb_step(zero_state, first_sample, ngd_params)

    def test_divergence_raises(self) -> None:
        """A non-finite iterate raises DivergenceError with the iteration number."""
        hp = HyperParams(algorithm=Algorithm.HB_CLASSICAL, beta=0.9, gamma=0.1)
        state = _state([1e308], theta_prev=[-1e308])
        with pytest.raises(DivergenceError) as exc_info:
            classical_hb_step(state, RegressorSample.build(1, [1.0], 0.0), hp)
        assert exc_info.value.iteration == 1
        assert exc_info.value.algorithm == "HB-classical"

    def test_is_finite_state(self) -> None:
        """is_finite_state inspects every iterate."""
        assert is_finite_state(_state([1.0]))
        assert not is_finite_state(_state([1.0], vartheta=[math.inf]))
        assert not is_finite_state(_state([1.0, 2.0], theta_prev=[0.0, math.nan]))
        assert is_finite_state(replace(_state([1.0]), theta_bar_last=as_vector([1.0])))
        assert not is_finite_state(replace(_state([1.0]), theta_bar_last=as_vector([-math.inf])))


# ============================================================================
# Independent reference implementation
# ============================================================================


def _dot(a: list[float], b: list[float]) -> float:
    return math.fsum(x * y for x, y in zip(a, b))


def _reference_step(algorithm: Algorithm, hp: HyperParams, theta: list[float],
                    vartheta: list[float], prev: list[float], phi: list[float],
                    y: float) -> tuple[list[float], list[float]]:
    """Plain-list transcription of the five update laws."""
    n = 1.0 + _dot(phi, phi)

    def grad(at: list[float]) -> list[float]:
        e = _dot(phi, at) - y
        return [p * e for p in phi]

    if algorithm == Algorithm.NGD:
        g = grad(theta)
        new = [t - hp.alpha / n * gi for t, gi in zip(theta, g)]
        return new, new
    if algorithm == Algorithm.HB:
        new = [t - hp.beta * (t - v) for t, v in zip(theta, vartheta)]
        g = grad(new)
        return new, [v - hp.gamma / n * gi for v, gi in zip(vartheta, g)]
    if algorithm == Algorithm.NA:
        g = grad(theta)
        bar = [t - hp.gamma * hp.beta / n * gi for t, gi in zip(theta, g)]
        new = [b - hp.beta * (b - v) for b, v in zip(bar, vartheta)]
        g = grad(new)
        return new, [v - hp.gamma / n * gi for v, gi in zip(vartheta, g)]
    momentum = [hp.beta * (t - p) for t, p in zip(theta, prev)]
    if algorithm == Algorithm.HB_CLASSICAL:
        g = grad(theta)
    else:
        g = grad([t + m for t, m in zip(theta, momentum)])
    new = [t - hp.gamma / n * gi + m for t, gi, m in zip(theta, g, momentum)]
    return new, new


class TestAgainstReference:
    """Vectorised steps agree with a straight-line list implementation."""

    @pytest.mark.parametrize("algorithm", list(Algorithm))
    def test_thousand_random_steps(self, algorithm: Algorithm) -> None:
        """1000 random single steps per law agree to 1e-12."""
        rng = np.random.default_rng(7)
        for _ in range(1000):
            dim = int(rng.integers(1, 9))
            theta, vartheta, prev = (rng.normal(size=dim) for _ in range(3))
            phi, y = rng.normal(size=dim), float(rng.normal())
            hp = _random_params(rng, algorithm)

            state = TunerState(theta=theta, vartheta=vartheta, theta_prev=prev)
            new, _ = step(state, RegressorSample.build(1, phi, y), hp)
            ref_theta, ref_vartheta = _reference_step(
                algorithm, hp, theta.tolist(), vartheta.tolist(), prev.tolist(), phi.tolist(), y
            )
            assert_allclose(new.theta, ref_theta, rtol=0, atol=1e-12)
            if algorithm.has_vartheta:
                assert_allclose(new.vartheta, ref_vartheta, rtol=0, atol=1e-12)


# ============================================================================
# Hyperparameter validation
# ============================================================================


class TestValidateHyperparams:
    """Tests for validate_hyperparams."""

    def test_hb_bundled_gamma_exceeds_bound(self, hb_params: HyperParams) -> None:
        """beta=0.5 -> bound 0.09375; gamma=0.0938 is flagged."""
        check = validate_hyperparams(hb_params)
        assert check.gamma_bound == 0.09375
        assert not check.valid
        violation = check.violations[0]
        assert violation.code == "HP_003"
        assert violation.bound == 0.09375
        assert violation.value == 0.0938

    def test_na_bundled_gamma_exceeds_bound(self, na_params: HyperParams) -> None:
        """beta=0.5 -> bound 0.75 / 8.25."""
        check = validate_hyperparams(na_params)
        assert check.gamma_bound == pytest.approx(0.75 / 8.25, rel=1e-15)
        assert [v.code for v in check.violations] == ["HP_005"]

    def test_hb_within_bound(self) -> None:
        """gamma at the bound is accepted."""
        hp = HyperParams(algorithm=Algorithm.HB, beta=0.5, gamma=0.09375)
        assert validate_hyperparams(hp).valid

    def test_strict_mode_halves_hb_bound(self) -> None:
        """Strict mode divides by 16."""
        hp = HyperParams(algorithm=Algorithm.HB, beta=0.5, gamma=0.05)
        check = validate_hyperparams(hp, BoundMode.STRICT)
        assert check.gamma_bound == 0.046875
        assert not check.valid

    def test_ngd_alpha(self, ngd_params: HyperParams) -> None:
        """alpha must lie in (0, 2)."""
        assert validate_hyperparams(ngd_params).valid
        check = validate_hyperparams(HyperParams(algorithm=Algorithm.NGD, alpha=2.0))
        assert [v.code for v in check.violations] == ["HP_001"]

    def test_hb_beta_range(self) -> None:
        """HB beta outside (0, 2)."""
        check = validate_hyperparams(HyperParams(algorithm=Algorithm.HB, beta=2.0, gamma=0.01))
        assert [v.code for v in check.violations] == ["HP_002"]

    def test_na_beta_range(self) -> None:
        """NA beta outside (0, 1)."""
        check = validate_hyperparams(HyperParams(algorithm=Algorithm.NA, beta=1.0, gamma=0.01))
        assert [v.code for v in check.violations] == ["HP_004"]

    @pytest.mark.parametrize(
        ("algorithm", "beta", "codes"),
        [(Algorithm.HB, 3.0, ["HP_002", "HP_003"]), (Algorithm.NA, 1.5, ["HP_004", "HP_005"])],
    )
    def test_bad_beta_still_reports_gamma_sign(
        self, algorithm: Algorithm, beta: float, codes: list[str]
    ) -> None:
        """gamma <= 0 is reported even when beta has no gamma bound."""
        check = validate_hyperparams(HyperParams(algorithm=algorithm, beta=beta, gamma=-1.0))
        assert [v.code for v in check.violations] == codes
        assert {v.parameter for v in check.violations} == {"beta", "gamma"}
        assert check.gamma_bound is None

    def test_classical_constraints(self) -> None:
        """gamma_bar > 0 and beta_bar in [0, 1)."""
        hp = HyperParams(algorithm=Algorithm.NA_CLASSICAL, beta=1.0, gamma=0.0)
        codes = {v.code for v in validate_hyperparams(hp).violations}
        assert codes == {"HP_006", "HP_007"}

    def test_missing_constants(self) -> None:
        """HB without gamma fails model validation."""
        with pytest.raises(ValueError):
            HyperParams(algorithm=Algorithm.HB, beta=0.5)
