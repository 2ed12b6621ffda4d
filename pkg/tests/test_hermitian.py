import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from skewlab.errors import ConvergenceError, DimensionError, EigenFloorError, NotHermitianError
from skewlab.hermitian import (
    anti_commutator,
    as_matrix,
    commutator,
    eig_hermitian,
    frac_power,
    jacobi_eigh,
    trace_product,
)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]])
SZ = np.diag([1.0, -1.0]).astype(complex)
RHO = np.diag([0.75, 0.25]).astype(complex)


def rand_herm(rng, n):
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (g + g.conj().T) / 2


def rand_psd(rng, n, floor=1e-3):
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    m = g @ g.conj().T
    return m / np.trace(m).real + floor * np.eye(n)


def test_commutator_examples():
    np.testing.assert_allclose(commutator(SX, SY), 2j * SZ, atol=0)
    np.testing.assert_array_equal(commutator(SX, SX), np.zeros((2, 2)))
    np.testing.assert_allclose(commutator(RHO, SX), [[0, 0.5], [-0.5, 0]], atol=1e-15)


def test_anti_commutator_examples():
    np.testing.assert_array_equal(anti_commutator(SX, SY), np.zeros((2, 2)))
    x = np.array([[1, 2 - 1j], [2 + 1j, -3]])
    np.testing.assert_array_equal(anti_commutator(np.eye(2), x), 2 * x)
    np.testing.assert_array_equal(anti_commutator(SX, SX), 2 * np.eye(2))


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        commutator(np.eye(2), np.eye(3))
    with pytest.raises(DimensionError):
        anti_commutator(np.eye(3), np.eye(2))
    with pytest.raises(DimensionError):
        trace_product([np.eye(2), np.eye(3)])
    with pytest.raises(DimensionError):
        as_matrix(np.ones((2, 3)))


def test_trace_product_examples():
    assert trace_product([RHO]) == 1
    assert trace_product([SX, SY]) == 0
    assert trace_product([RHO, SZ]) == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(ValueError):
        trace_product([])


def test_trace_product_cyclic():
    rng = np.random.default_rng(3)
    for n in range(1, 7):
        a, b, c = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)) for _ in range(3))
        t1 = trace_product([a, b, c])
        t2 = trace_product([c, a, b])
        assert abs(t1 - t2) <= 1e-12 * max(1.0, abs(t1))
        assert abs(t1 - np.trace(a @ b @ c)) <= 1e-12 * max(1.0, abs(t1))


@pytest.mark.parametrize("method", ["lapack", "jacobi"])
def test_eig_diagonal(method):
    d = eig_hermitian(RHO, method)
    np.testing.assert_allclose(d.eigenvalues, [0.25, 0.75])
    # columns are e_2 and e_1 up to phase
    np.testing.assert_allclose(np.abs(d.eigenvectors), [[0, 1], [1, 0]], atol=1e-15)


@pytest.mark.parametrize("method", ["lapack", "jacobi"])
def test_eig_sigma_x(method):
    d = eig_hermitian(SX, method)
    np.testing.assert_allclose(d.eigenvalues, [-1, 1], atol=1e-15)
    for v, ref in zip(d.eigenvectors.T, [np.array([1, -1]) / np.sqrt(2), np.array([1, 1]) / np.sqrt(2)]):
        assert abs(abs(np.vdot(ref, v)) - 1) < 1e-12


@pytest.mark.parametrize("method", ["lapack", "jacobi"])
@pytest.mark.parametrize("n", [1, 3, 6])
def test_eig_identity(method, n):
    d = eig_hermitian(np.eye(n), method)
    np.testing.assert_allclose(d.eigenvalues, np.ones(n))


@pytest.mark.parametrize("method", ["lapack", "jacobi"])
def test_eig_invariants_random(method):
    rng = np.random.default_rng(11)
    for i in range(1000):
        n = 2 + i % 7
        m = rand_herm(rng, n)
        d = eig_hermitian(m, method)
        assert d.orthonormality_defect() <= 1e-10
        assert d.residual(m) <= 1e-10
        assert np.all(np.diff(d.eigenvalues) >= 0)


def test_jacobi_matches_lapack():
    rng = np.random.default_rng(5)
    for n in range(2, 9):
        m = rand_herm(rng, n)
        np.testing.assert_allclose(
            eig_hermitian(m, "jacobi").eigenvalues, np.linalg.eigvalsh(m), atol=1e-12
        )


def test_jacobi_degenerate_spectrum():
    rng = np.random.default_rng(8)
    q, _ = np.linalg.qr(rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5)))
    m = q @ np.diag([1.0, 1.0, 1.0, 2.0, 2.0]) @ q.conj().T
    d = eig_hermitian(m, "jacobi")
    np.testing.assert_allclose(d.eigenvalues, [1, 1, 1, 2, 2], atol=1e-12)
    assert d.residual(m) <= 1e-12


def test_eig_deterministic():
    m = rand_herm(np.random.default_rng(2), 5)
    d1, d2 = eig_hermitian(m), eig_hermitian(m)
    np.testing.assert_array_equal(d1.eigenvectors, d2.eigenvectors)


def test_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        eig_hermitian([[0.5, 0.5], [-0.5, 0.5]])


def test_jacobi_sweep_cap():
    m = rand_herm(np.random.default_rng(1), 4)
    with pytest.raises(ConvergenceError):
        jacobi_eigh(m, max_sweeps=1)
    with pytest.raises(ConvergenceError):
        eig_hermitian(m, "jacobi", max_sweeps=0)


def test_decomposition_is_immutable():
    d = eig_hermitian(RHO)
    with pytest.raises(ValueError):
        d.eigenvalues[0] = 3.0


def test_frac_power_examples():
    np.testing.assert_allclose(frac_power(eig_hermitian(np.eye(3)), 0.37), np.eye(3), atol=1e-15)
    np.testing.assert_allclose(frac_power(eig_hermitian(RHO), 0.5), np.diag([np.sqrt(3) / 2, 0.5]), atol=1e-15)
    rho = rand_psd(np.random.default_rng(4), 4)
    np.testing.assert_allclose(frac_power(eig_hermitian(rho), 1), rho, atol=1e-10)


def test_frac_power_matches_scipy():
    from scipy.linalg import fractional_matrix_power

    rng = np.random.default_rng(6)
    for n in (2, 4, 7):
        m = rand_psd(rng, n)
        d = eig_hermitian(m)
        for a in (-1.5, -0.3, 0.25, 0.5, 1.7):
            ref = fractional_matrix_power(m, a)
            assert np.linalg.norm(frac_power(d, a) - ref) <= 1e-9 * max(1, np.linalg.norm(ref))


def test_frac_power_additive():
    rng = np.random.default_rng(9)
    for _ in range(200):
        n = int(rng.integers(2, 9))
        d = eig_hermitian(rand_psd(rng, n))
        a, b = rng.uniform(-1, 2, 2)
        lhs = frac_power(d, a) @ frac_power(d, b)
        assert np.linalg.norm(lhs - frac_power(d, a + b)) <= 1e-9


def test_frac_power_floor_rules():
    singular = eig_hermitian(np.diag([1.0, 0.0]))
    np.testing.assert_allclose(frac_power(singular, 0.5), np.diag([1.0, 0.0]))
    np.testing.assert_allclose(frac_power(singular, 0), np.eye(2))
    with pytest.raises(EigenFloorError):
        frac_power(singular, -0.5)
    with pytest.raises(EigenFloorError):
        frac_power(eig_hermitian(np.diag([1.0, 1e-9])), -1, floor=1e-8)
    indefinite = eig_hermitian(SZ)
    np.testing.assert_allclose(frac_power(indefinite, 2), np.eye(2), atol=1e-15)
    with pytest.raises(EigenFloorError):
        frac_power(indefinite, 0.5)


def test_frac_power_clamps_roundoff_negatives():
    d = eig_hermitian(np.diag([1.0, -1e-16]))
    np.testing.assert_array_equal(frac_power(d, 0.5), np.diag([1.0, 0.0]))


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 6))
def test_commutator_adjoint_symmetry(seed, n):
    rng = np.random.default_rng(seed)
    x, y = rand_herm(rng, n), rand_herm(rng, n)
    c, a = commutator(x, y), anti_commutator(x, y)
    np.testing.assert_allclose(c.conj().T, -c, atol=1e-12)
    np.testing.assert_allclose(a.conj().T, a, atol=1e-12)
