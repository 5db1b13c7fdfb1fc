import numpy as np
import pytest
from hypothesis import settings
from scipy.linalg import expm

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


def omega_matrix(n):
    I = np.eye(n)
    O = np.zeros((n, n))
    return np.block([[O, I], [-I, O]])


def random_symplectic(rng, n, scale=0.6):
    """``expm(Omega H)`` with random symmetric ``H`` is symplectic."""
    H = rng.normal(scale=scale, size=(2 * n, 2 * n))
    H = 0.5 * (H + H.T)
    return expm(omega_matrix(n) @ H)


def random_covariance(rng, n, max_thermal=1.0, scale=0.6):
    """Valid variance matrix: symplectic image of a thermal state."""
    S = random_symplectic(rng, n, scale)
    nu = 0.5 + rng.uniform(0.0, max_thermal, size=n)
    D = np.diag(np.concatenate([nu, nu]))
    V = S @ D @ S.T
    return 0.5 * (V + V.T)


def random_orthonormal_real(rng, grid, count):
    A = rng.normal(size=(grid.num_bins, count))
    Q, _ = np.linalg.qr(A)
    return Q.T / np.sqrt(grid.delta_omega)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# acceptance results, filled by test_acceptance.py and printed after the run
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
