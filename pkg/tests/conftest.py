"""Shared test fixtures for TunerSim."""

import numpy as np
import pytest

from tunersim import Algorithm, HyperParams, RegressorSample, TunerState
from tunersim.core.vectors import Vector, as_vector
from tunersim.harness import RunArtifact, load_builtin_config, run_experiment
from tunersim.regress import SinusoidComponent, SinusoidSource, regressor_stream


@pytest.fixture
def seed() -> int:
    """Fixed seed for reproducible tests."""
    return 42


@pytest.fixture
def rng(seed: int) -> np.random.Generator:
    """Seeded numpy generator."""
    return np.random.default_rng(seed)


@pytest.fixture
def theta_star() -> Vector:
    """Reference parameter vector [20, -3, 1]."""
    return as_vector([20.0, -3.0, 1.0])


@pytest.fixture
def first_sample() -> RegressorSample:
    """phi = [1, -2, 1] with y = 27, the first sample of the jump experiment."""
    return RegressorSample.build(1, [1.0, -2.0, 1.0], 27.0)


@pytest.fixture
def zero_state() -> TunerState:
    """All iterates at zero in dimension 3."""
    return TunerState.initial([0.0, 0.0, 0.0])


@pytest.fixture
def ngd_params() -> HyperParams:
    """NGD step of the bundled experiments."""
    return HyperParams(algorithm=Algorithm.NGD, alpha=0.0469)


@pytest.fixture
def hb_params() -> HyperParams:
    """Heavy-Ball constants of the bundled experiments."""
    return HyperParams(algorithm=Algorithm.HB, beta=0.5, gamma=0.0938, override=True)


@pytest.fixture
def na_params() -> HyperParams:
    """Nesterov constants of the bundled experiments."""
    return HyperParams(algorithm=Algorithm.NA, beta=0.5, gamma=0.0938, override=True)


@pytest.fixture(scope="session")
def sinusoid_source() -> SinusoidSource:
    """phi_k = [1, 2 sin(k), 2 sin(2k)]."""
    return SinusoidSource(
        components=[
            SinusoidComponent(offset=1.0),
            SinusoidComponent(amplitude=2.0, frequency=1.0),
            SinusoidComponent(amplitude=2.0, frequency=2.0),
        ]
    )


@pytest.fixture(scope="session")
def sinusoid_samples(sinusoid_source: SinusoidSource) -> list[RegressorSample]:
    """First 200 samples of the sinusoid bank with theta_star = [20, -3, 1]."""
    return regressor_stream(sinusoid_source, [20.0, -3.0, 1.0], 200)


@pytest.fixture(scope="session")
def fig1_run() -> RunArtifact:
    """Bundled fig1 experiment, in memory."""
    return run_experiment(load_builtin_config("fig1"), write=False)


@pytest.fixture(scope="session")
def fig2_run() -> RunArtifact:
    """Bundled fig2 experiment, in memory."""
    return run_experiment(load_builtin_config("fig2"), write=False)
