"""End-to-end behaviour of the bundled experiments and the stability guarantees."""

import numpy as np
import pytest

from tunersim.analysis import lyapunov
from tunersim.core.models import Algorithm, HyperParams, RegressorSample, TunerState
from tunersim.harness import RunArtifact, iterations_to_tolerance
from tunersim.tuners import hb_gamma_bound, is_finite_state, na_gamma_bound, step

JUMP_AT = 251


def _abs_e(run: RunArtifact, label: str) -> np.ndarray:
    return np.array([abs(record.e_y) for record in run.traces[label]])


# ============================================================================
# Piecewise constant regressor with a jump
# ============================================================================


class TestJumpExperiment:
    """fig2: phi jumps from [1,-2,1] to [2,-1,-2] at k = 251."""

    @pytest.mark.parametrize("k", [250, 500])
    def test_high_order_tuners_beat_ngd(self, fig2_run: RunArtifact, k: int) -> None:
        """|e_y| of HB and NA is below NGD at the end of each segment."""
        ngd = _abs_e(fig2_run, "NGD")[k - 1]
        assert _abs_e(fig2_run, "HB")[k - 1] < ngd
        assert _abs_e(fig2_run, "NA")[k - 1] < ngd

    @pytest.mark.parametrize("label", ["NGD", "HB", "NA"])
    def test_error_non_increasing_within_segments(
        self, fig2_run: RunArtifact, label: str
    ) -> None:
        """|e_y| never grows while the regressor is constant."""
        abs_e = _abs_e(fig2_run, label)
        for start, stop in ((0, JUMP_AT - 1), (JUMP_AT - 1, len(abs_e))):
            segment = abs_e[start:stop]
            assert np.all(segment[1:] <= segment[:-1] * (1 + 1e-12) + 1e-12)

    def test_jump_raises_error(self, fig2_run: RunArtifact) -> None:
        """The new regressor exposes unidentified directions."""
        abs_e = _abs_e(fig2_run, "HB")
        assert abs_e[JUMP_AT - 1] > abs_e[JUMP_AT - 2]

    def test_parameter_error_stays_bounded(self, fig2_run: RunArtifact) -> None:
        """Without excitation theta does not converge, but it stays bounded."""
        for label in fig2_run.labels:
            errors = [record.param_err for record in fig2_run.traces[label]]
            assert max(errors) <= np.linalg.norm([20.0, -3.0, 1.0]) + 1e-9


# ============================================================================
# Persistently exciting sinusoid bank
# ============================================================================


class TestSinusoidExperiment:
    """fig1: phi_k = [1, 2 sin(k), 2 sin(2k)] over 2000 iterations."""

    def test_high_order_tuners_converge_first(self, fig1_run: RunArtifact) -> None:
        """HB and NA reach ||theta~|| < 1e-3 strictly before NGD, all within the run."""
        k_param = {
            label: iterations_to_tolerance(fig1_run.traces[label], 1e-3, 1e-3)[1]
            for label in fig1_run.labels
        }
        assert all(k is not None and k < 2000 for k in k_param.values())
        assert k_param["HB"] < k_param["NGD"]
        assert k_param["NA"] < k_param["NGD"]

    @pytest.mark.parametrize("label", ["HB", "NA"])
    def test_envelope_holds(self, fig1_run: RunArtifact, label: str) -> None:
        """V stays below exp(-mu floor(k/20)) V_0 for the whole run."""
        report = fig1_run.report.get(label)
        assert report.pe is not None and report.pe.epsilon > 0.0
        assert report.rate is not None
        assert 0.0 < report.rate.mu < 1.0
        assert report.rate.delta_t == 20
        assert report.envelope is not None
        assert report.envelope.holds
        assert report.envelope.tolerance == 1e-9

    @pytest.mark.parametrize("label", ["HB", "NA"])
    def test_lyapunov_monotone(self, fig1_run: RunArtifact, label: str) -> None:
        """V never increases along the run."""
        v = np.array(fig1_run.v_trace(label))
        assert len(v) == 2001
        assert np.all(np.diff(v) <= 1e-10 * max(1.0, v[0]))


# ============================================================================
# Lyapunov decrease on random regressors
# ============================================================================


class TestLyapunovDecrease:
    """Theorem-mode hyperparameters make V non-increasing for any regressor."""

    @pytest.mark.parametrize("algorithm", [Algorithm.HB, Algorithm.NA])
    def test_random_bounded_sequences(self, algorithm: Algorithm) -> None:
        """1000 random sequences of 200 steps in dimension up to 8."""
        rng = np.random.default_rng(2024)
        for _ in range(1000):
            dim = int(rng.integers(1, 9))
            if algorithm == Algorithm.HB:
                beta = float(rng.uniform(0.1, 1.9))
                gamma = hb_gamma_bound(beta) * float(rng.uniform(0.1, 1.0))
            else:
                beta = float(rng.uniform(0.1, 0.9))
                gamma = na_gamma_bound(beta) * float(rng.uniform(0.1, 1.0))
            hp = HyperParams(algorithm=algorithm, beta=beta, gamma=gamma)

            theta_star = rng.normal(size=dim) * 10
            state = TunerState.initial(rng.normal(size=dim))
            v_prev = lyapunov(state.theta, state.vartheta, theta_star, gamma)
            slack = 1e-10 * max(1.0, v_prev)
            scales = 10.0 ** rng.uniform(-2, 2, size=200)
            for k in range(1, 201):
                phi = rng.normal(size=dim) * scales[k - 1]
                state, _ = step(state, RegressorSample.from_theta(k, phi, theta_star), hp)
                v = lyapunov(state.theta, state.vartheta, theta_star, gamma)
                assert v <= v_prev + slack
                v_prev = v
            assert is_finite_state(state)
