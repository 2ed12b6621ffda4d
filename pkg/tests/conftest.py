import numpy as np
import pytest
from scipy.linalg import fractional_matrix_power

from skewlab.states import SamplerConfig, pauli, sample_density, sample_observable, validate_density

SQRT3 = np.sqrt(3.0)

# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def qubit():
    """diag(3/4, 1/4) with sigma_x, sigma_y, sigma_z."""
    return validate_density(np.diag([0.75, 0.25])), pauli("x"), pauli("y"), pauli("z")


@pytest.fixture
def mixed():
    return validate_density(np.eye(2) / 2)


def random_inputs(seed, dim, n, floor=1e-6):
    """``n`` reproducible (rho, A, B) triples."""
    cfg = SamplerConfig(dim, seed, floor)
    out = []
    for i in range(n):
        rng = cfg.stream(dim, i)
        out.append((sample_density(cfg, rng), sample_observable(cfg, rng), sample_observable(cfg, rng)))
    return out


def mpow(m, a):
    """Matrix power through scipy's Schur-Pade algorithm; no eigendecomposition."""
    if a == 0:
        return np.eye(m.shape[0], dtype=complex)
    return np.asarray(fractional_matrix_power(m, a), dtype=complex)


def oracle_IJ(rho_m, h, alpha, beta):
    """I and J from the commutator / anticommutator products.

    I = 1/2 Tr[(i[r^a, H0])(i[r^b, H0]) r^(1-a-b)],
    J = 1/2 Tr[{r^a, H0}{r^b, H0} r^(1-a-b)].
    """
    n = rho_m.shape[0]
    h0 = h - np.trace(rho_m @ h).real * np.eye(n)
    ra, rb, rc = mpow(rho_m, alpha), mpow(rho_m, beta), mpow(rho_m, 1 - alpha - beta)
    ca = 1j * (ra @ h0 - h0 @ ra)
    cb = 1j * (rb @ h0 - h0 @ rb)
    aa = ra @ h0 + h0 @ ra
    ab = rb @ h0 + h0 @ rb
    return 0.5 * np.trace(ca @ cb @ rc).real, 0.5 * np.trace(aa @ ab @ rc).real
