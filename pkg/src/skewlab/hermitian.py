"""Dense complex matrix helpers, Hermitian eigensolvers and spectral powers.

Matrices are plain ``numpy`` complex128 arrays of shape ``(n, n)``. Two
eigensolvers are provided: LAPACK (via :func:`numpy.linalg.eigh`, the
default) and a self-contained cyclic complex Jacobi iteration. Both return a
:class:`SpectralDecomposition` with eigenvalues sorted ascending.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConvergenceError, DimensionError, EigenFloorError, NotHermitianError

HERMITIAN_RTOL = 1e-10
# eigenvalues this close to zero are treated as exact zeros before powering
ZERO_CLAMP = 1e-12
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100


def as_matrix(x) -> np.ndarray:
    """Coerce ``x`` to a finite square complex128 array."""
    m = np.array(x, dtype=np.complex128)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DimensionError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def _same_dim(*ms: np.ndarray) -> None:
    shapes = {m.shape for m in ms}
    if len(shapes) != 1:
        raise DimensionError(f"dimension mismatch: {sorted(shapes)}")


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def hermiticity_defect(m: np.ndarray) -> float:
    """Relative Frobenius distance of ``m`` from its adjoint."""
    return float(np.linalg.norm(m - dagger(m))) / max(1.0, float(np.linalg.norm(m)))


def is_hermitian(m: np.ndarray, rtol: float = HERMITIAN_RTOL) -> bool:
    return hermiticity_defect(m) <= rtol


def commutator(x, y) -> np.ndarray:
    """Return ``XY - YX``."""
    x, y = as_matrix(x), as_matrix(y)
    _same_dim(x, y)
    return x @ y - y @ x


def anti_commutator(x, y) -> np.ndarray:
    """Return ``XY + YX``."""
    x, y = as_matrix(x), as_matrix(y)
    _same_dim(x, y)
    return x @ y + y @ x


def trace_product(factors: Sequence) -> complex:
    """Trace of the ordered product ``factors[0] @ factors[1] @ ...``.

    The last multiplication is folded into an elementwise sum so the full
    product matrix is never formed.
    """
    if len(factors) == 0:
        raise ValueError("trace_product needs at least one factor")
    ms = [as_matrix(f) for f in factors]
    _same_dim(*ms)
    if len(ms) == 1:
        return complex(np.trace(ms[0]))
    left = ms[0]
    for m in ms[1:-1]:
        left = left @ m
    # Tr[L R] = sum_ij L_ij R_ji
    return complex(np.sum(left * ms[-1].T))


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigensystem ``M = U diag(eigenvalues) U^dagger`` of a Hermitian matrix.

    ``eigenvectors[:, i]`` is the unit eigenvector for ``eigenvalues[i]``;
    eigenvalues are ascending.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        self.eigenvalues.setflags(write=False)
        self.eigenvectors.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        u = self.eigenvectors
        return (u * self.eigenvalues) @ dagger(u)

    def orthonormality_defect(self) -> float:
        u = self.eigenvectors
        return float(np.linalg.norm(dagger(u) @ u - np.eye(self.dim)))

    def residual(self, m: np.ndarray) -> float:
        """Relative reconstruction error against the original matrix."""
        return float(np.linalg.norm(self.reconstruct() - m)) / max(1.0, float(np.linalg.norm(m)))


def _off_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def jacobi_eigh(
    m: np.ndarray, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS
) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi diagonalisation of a complex Hermitian matrix.

    Each rotation first removes the phase of the pivot ``a_pq`` and then
    applies the real symmetric Jacobi rotation. Converges when the
    off-diagonal Frobenius norm drops to ``tol * ||M||_F``.

    Returns unsorted ``(eigenvalues, eigenvectors)``.
    """
    a = np.array(m, dtype=np.complex128)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    target = tol * float(np.linalg.norm(a))
    for sweep in range(max_sweeps + 1):
        if _off_norm(a) <= target:
            return np.real(np.diag(a)).copy(), v
        # the extra pass only re-checks convergence
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                phase = apq / mag
                app, aqq = a[p, p].real, a[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.hypot(t, 1.0)
                s = t * c
                # J = diag(1, conj(phase)) @ [[c, s], [-s, c]] on the (p, q) block
                j = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ j
                a[idx, :] = dagger(j) @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, idx] = v[:, idx] @ j
    raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")


def eig_hermitian(m, method: str = "lapack", max_sweeps: int = JACOBI_MAX_SWEEPS) -> SpectralDecomposition:
    """Spectral decomposition of a Hermitian matrix.

    ``method`` is ``"lapack"`` or ``"jacobi"``; ``max_sweeps`` only applies
    to Jacobi.
    """
    m = as_matrix(m)
    if not is_hermitian(m):
        raise NotHermitianError(f"matrix is not Hermitian (defect {hermiticity_defect(m):.3g})")
    h = (m + dagger(m)) / 2
    if method == "lapack":
        try:
            w, u = np.linalg.eigh(h)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(str(exc)) from exc
    elif method == "jacobi":
        w, u = jacobi_eigh(h, max_sweeps=max_sweeps)
        order = np.argsort(w, kind="stable")
        w, u = w[order], u[:, order]
    else:
        raise ValueError(f"unknown eigensolver {method!r}")
    return SpectralDecomposition(np.ascontiguousarray(w, dtype=np.float64), np.ascontiguousarray(u))


def clamped_eigenvalues(d: SpectralDecomposition) -> np.ndarray:
    w = np.array(d.eigenvalues)
    w[np.abs(w) <= ZERO_CLAMP] = 0.0
    return w


def power_eigenvalues(w: np.ndarray, a: float, floor: float = 0.0) -> np.ndarray:
    """``w**a`` elementwise with the admissibility rules of :func:`frac_power`."""
    a = float(a)
    integral = a == int(a)
    wmin = float(np.min(w))
    if a < 0:
        if wmin <= 0.0 or wmin < floor:
            raise EigenFloorError(
                f"power {a:g} needs eigenvalues >= floor {floor:g} > 0, min is {wmin:.3g}"
            )
    elif not integral and wmin < 0.0:
        raise EigenFloorError(f"fractional power {a:g} of a matrix with eigenvalue {wmin:.3g}")
    if a == 0.0:
        return np.ones_like(w)
    return w ** a


def frac_power(d: SpectralDecomposition, a: float, floor: float = 0.0) -> np.ndarray:
    """``sum_i lambda_i**a |phi_i><phi_i|`` by spectral calculus.

    Negative exponents require every eigenvalue to be at least ``floor`` and
    strictly positive; fractional exponents require a PSD spectrum.
    Eigenvalues within ``ZERO_CLAMP`` of zero count as zero.
    """
    wa = power_eigenvalues(clamped_eigenvalues(d), a, floor)
    u = d.eigenvectors
    return (u * wa) @ dagger(u)
