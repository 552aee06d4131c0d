import numpy as np
import pytest

from chartnb.model import NegBinomialTarget, PoissonTarget
from chartnb.nuts import SamplerConfig, run_chains
from chartnb.synth import GeneratorSpec, generate_tracks

REFERENCE_BETA = (-8.126, -0.074, 0.859)


@pytest.fixture(scope="session")
def small_data():
    """200 tracks straight from the model (no truncation)."""
    return generate_tracks(GeneratorSpec(n_tracks=200, alpha=5.0, truncate=False, seed=7)).dataset


@pytest.fixture(scope="session")
def full_data():
    return generate_tracks(GeneratorSpec(alpha=5.0, truncate=False, seed=11)).dataset


@pytest.fixture(scope="session")
def nb_trace(full_data):
    config = SamplerConfig(chains=2, warmup_draws=500, post_warmup_draws=500, seed=5)
    return run_chains(NegBinomialTarget(full_data), config)


@pytest.fixture(scope="session")
def poisson_trace(full_data):
    config = SamplerConfig(chains=2, warmup_draws=500, post_warmup_draws=500, seed=5)
    return run_chains(PoissonTarget(full_data), config)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
