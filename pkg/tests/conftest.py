import numpy as np
import pytest

from telegame import ComplexAmplitude, GaussianState


@pytest.fixture
def rng():
    return np.random.default_rng(20240901)


def random_physical_state(rng, modes: int) -> GaussianState:
    """Random valid state: classical noise L L^T on top of vacuum covariance."""
    dim = 2 * modes
    L = rng.normal(0.0, 0.6, (dim, dim))
    cov = L @ L.T * 0.3 + 0.5 * np.eye(dim)
    mean = rng.normal(0.0, 1.5, dim)
    return GaussianState(modes, mean, cov)


def random_amplitude(rng, scale: float = 1.5) -> ComplexAmplitude:
    return ComplexAmplitude(*rng.normal(0.0, scale, 2))
