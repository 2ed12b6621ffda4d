"""Density matrices, observables, moments and seeded random sampling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, EigenFloorError, InvalidStateError, NotHermitianError
from .hermitian import (
    HERMITIAN_RTOL,
    SpectralDecomposition,
    as_matrix,
    dagger,
    eig_hermitian,
    frac_power,
    hermiticity_defect,
)

TRACE_TOL = 1e-10
NEGATIVITY_TOL = 1e-10
DEFAULT_FLOOR = 1e-8
# round-off allowance when comparing the smallest eigenvalue with the floor
FLOOR_SLACK = 1e-14


def _frozen(m: np.ndarray) -> np.ndarray:
    m = np.array(m, dtype=np.complex128)
    m.setflags(write=False)
    return m


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated quantum state with its cached spectral decomposition.

    Build instances with :func:`validate_density`. ``invertible`` records
    whether the smallest eigenvalue cleared ``eigen_floor`` at validation
    time; only invertible states admit negative powers.
    """

    matrix: np.ndarray
    spectrum: SpectralDecomposition
    eigen_floor: float
    invertible: bool

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.spectrum.eigenvalues

    @property
    def eigenvectors(self) -> np.ndarray:
        return self.spectrum.eigenvectors

    def power(self, a: float) -> np.ndarray:
        if a < 0 and not self.invertible:
            raise EigenFloorError(
                f"rho**{a:g} needs an invertible state "
                f"(min eigenvalue {self.eigenvalues[0]:.3g} < floor {self.eigen_floor:g})"
            )
        return frac_power(self.spectrum, a)


@dataclass(frozen=True, eq=False)
class Observable:
    matrix: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if hermiticity_defect(m) > HERMITIAN_RTOL:
            raise NotHermitianError("observable is not Hermitian")
        object.__setattr__(self, "matrix", _frozen((m + dagger(m)) / 2))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class CenteredObservable:
    """``H - Tr[rho H] I`` together with the subtracted mean."""

    matrix: np.ndarray
    mean: float

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def observable_matrix(h) -> np.ndarray:
    """Matrix of an observable given as an :class:`Observable`, a centered one, or an array."""
    if isinstance(h, (Observable, CenteredObservable)):
        return h.matrix
    return Observable(h).matrix


def validate_density(
    m,
    floor: float = DEFAULT_FLOOR,
    require_invertible: bool = False,
    method: str = "lapack",
    max_sweeps: int = 100,
) -> DensityMatrix:
    """Check that ``m`` is a density operator and cache its spectrum.

    Raises :class:`NotHermitianError`, :class:`InvalidStateError` for bad
    trace or negative eigenvalues, and :class:`EigenFloorError` when
    ``require_invertible`` is set and the smallest eigenvalue is below
    ``floor``.
    """
    m = as_matrix(m)
    if hermiticity_defect(m) > HERMITIAN_RTOL:
        raise NotHermitianError("density matrix is not Hermitian")
    m = (m + dagger(m)) / 2
    tr = float(np.trace(m).real)
    if abs(tr - 1.0) > TRACE_TOL:
        raise InvalidStateError(f"trace is {tr!r}, expected 1")
    spectrum = eig_hermitian(m, method=method, max_sweeps=max_sweeps)
    wmin = float(spectrum.eigenvalues[0])
    if wmin < -NEGATIVITY_TOL:
        raise InvalidStateError(f"negative eigenvalue {wmin:.3g}")
    invertible = wmin > 0.0 and wmin >= floor - FLOOR_SLACK
    if require_invertible and not invertible:
        raise EigenFloorError(f"min eigenvalue {wmin:.3g} below floor {floor:g}")
    return DensityMatrix(_frozen(m), spectrum, float(floor), invertible)


def maximally_mixed(dim: int) -> DensityMatrix:
    return validate_density(np.eye(dim) / dim)


def expectation(rho: DensityMatrix, h) -> float:
    """``Tr[rho H]`` (real for Hermitian ``H``)."""
    hm = observable_matrix(h)
    _check_dims(rho, hm)
    return float(np.sum(rho.matrix * hm.T).real)


def _check_dims(rho: DensityMatrix, *ms: np.ndarray) -> None:
    for m in ms:
        if m.shape != rho.matrix.shape:
            raise DimensionError(f"state is {rho.matrix.shape}, operator is {m.shape}")


def center(rho: DensityMatrix, h) -> CenteredObservable:
    hm = observable_matrix(h)
    mean = expectation(rho, hm)
    return CenteredObservable(_frozen(hm - mean * np.eye(hm.shape[0])), mean)


def variance(rho: DensityMatrix, h) -> float:
    """``Tr[rho H0^2]`` with ``H0`` the centered observable."""
    h0 = center(rho, h).matrix
    return float(np.sum((rho.matrix @ h0) * h0.T).real)


def covariance(rho: DensityMatrix, a, b) -> complex:
    """``Tr[rho A0 B0]``; complex in general, conjugate-symmetric in ``(a, b)``."""
    a0 = center(rho, a).matrix
    b0 = center(rho, b).matrix
    return complex(np.sum((rho.matrix @ a0) * b0.T))


_PAULI = {
    "id": np.array([[1, 0], [0, 1]], dtype=np.complex128),
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def pauli(name: str) -> Observable:
    try:
        return Observable(_PAULI[name.lower()])
    except KeyError:
        raise ValueError(f"unknown Pauli matrix {name!r}; use one of {sorted(_PAULI)}") from None


# --- random sampling -------------------------------------------------------


@dataclass(frozen=True)
class SamplerConfig:
    dim: int
    seed: int = 0
    eigen_floor: float = 1e-6

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError(f"dim must be a positive integer, got {self.dim!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if not 0.0 <= self.eigen_floor < 1.0 / self.dim:
            raise ValueError(f"eigen_floor must lie in [0, 1/dim), got {self.eigen_floor!r}")

    def stream(self, *key: int) -> np.random.Generator:
        return trial_stream(self.seed, *key)


def trial_stream(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for the counter ``key`` under ``seed``.

    Streams depend only on ``(seed, key)``, never on how many other streams
    were drawn before, so trials can run in any order or process.
    """
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))


def _ginibre(dim: int, stream: np.random.Generator) -> np.ndarray:
    z = stream.standard_normal((dim, dim, 2))
    return (z[..., 0] + 1j * z[..., 1]) / np.sqrt(2.0)


def sample_density(cfg: SamplerConfig, stream: np.random.Generator) -> DensityMatrix:
    """Hilbert-Schmidt random state, mixed with ``I/dim`` if needed to clear the floor.

    The mixing weight is either 0 or ``dim * eigen_floor``, which lifts the
    smallest eigenvalue to at least ``eigen_floor``.
    """
    g = _ginibre(cfg.dim, stream)
    w = g @ dagger(g)
    rho = w / np.trace(w).real
    rho = (rho + dagger(rho)) / 2
    floor = cfg.eigen_floor
    if floor > 0.0 and np.linalg.eigvalsh(rho)[0] < floor:
        eps = cfg.dim * floor
        rho = (1.0 - eps) * rho + eps * np.eye(cfg.dim) / cfg.dim
    return validate_density(rho, floor=floor, require_invertible=floor > 0.0)


def sample_observable(cfg: SamplerConfig, stream: np.random.Generator) -> Observable:
    """GUE-style random observable ``(G + G^dagger) / 2``."""
    g = _ginibre(cfg.dim, stream)
    return Observable((g + dagger(g)) / 2)
