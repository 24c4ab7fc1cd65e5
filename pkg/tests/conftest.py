import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def omega(n):
    """Symplectic form written out independently of the package."""
    w = np.array([[0.0, 1.0], [-1.0, 0.0]])
    return np.kron(np.eye(n), w)


def sympl_eigs(sigma):
    """Symplectic spectrum from the eigenvalues of i Omega sigma (oracle)."""
    n = sigma.shape[0] // 2
    ev = np.sort(np.abs(np.linalg.eigvals(1j * omega(n) @ sigma)))[::-1]
    return ev[::2]
