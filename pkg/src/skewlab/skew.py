"""Skew informations I, J and U in their one- and two-parameter forms.

Every quantity is evaluated on the centered observable ``H0``. The
``skew_I``/``skew_J`` functions use the four-trace expansion

    I = 1/2 (Tr[rho H0^2] + T(a+b) - T(a) - T(b))
    J = 1/2 (Tr[rho H0^2] + T(a+b) + T(a) + T(b))

with ``T(c) = Tr[rho^c H0 rho^(1-c) H0]`` evaluated in the computational
basis. ``skew_I_spectral`` and ``skew_J_spectral_bound`` instead sum pair
weights over off-diagonal matrix elements in the eigenbasis of ``rho``, which
gives an independent route to the same numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import NumericalError
from .hermitian import clamped_eigenvalues, dagger, power_eigenvalues
from .states import DensityMatrix, _check_dims, center, variance

# quantities this close to zero (relative to their scale) are round-off
CLAMP_TOL = 1e-12


class Region(str, Enum):
    LE_HALF = "le_half"
    GE_ONE = "ge_one"
    GAP = "gap"


@dataclass(frozen=True)
class SkewParams:
    """Exponent pair ``(alpha, beta)`` and the region of ``k = alpha + beta``."""

    alpha: float
    beta: float

    def __post_init__(self):
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {v!r}")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))

    @classmethod
    def dyson(cls, alpha: float) -> "SkewParams":
        """The one-parameter case ``beta = 1 - alpha``."""
        return cls(alpha, 1.0 - alpha)

    @property
    def k(self) -> float:
        return self.alpha + self.beta

    @property
    def region(self) -> Region:
        k = self.k
        if k <= 0.5:
            return Region.LE_HALF
        if k >= 1.0:
            return Region.GE_ONE
        return Region.GAP

    @property
    def asserted(self) -> bool:
        return self.region is not Region.GAP


WIGNER_YANASE = SkewParams(0.5, 0.5)


def f_weight(x: float, y: float, a: float) -> float:
    """``x^a y^(1-a) + x^(1-a) y^a`` for positive ``x, y``."""
    if not (x > 0 and y > 0):
        raise ValueError(f"f_weight needs x, y > 0, got {x!r}, {y!r}")
    return x ** a * y ** (1 - a) + x ** (1 - a) * y ** a


def _f_matrix(pw: dict, a: float) -> np.ndarray:
    left = np.outer(pw[a], pw[1 - a])
    return left + left.T


def pair_weights(eigenvalues, p: SkewParams, sign: int = -1) -> np.ndarray:
    """Matrix of ``lam_i + lam_j + f_{a+b} + sign * (f_a + f_b)`` over eigenvalue pairs.

    Zero eigenvalues are allowed as long as no exponent is negative.
    """
    lam = np.asarray(eigenvalues, dtype=np.float64)
    a, b, k = p.alpha, p.beta, p.k
    exps = {a, 1 - a, b, 1 - b, k, 1 - k}
    pw = {e: power_eigenvalues(lam, e) for e in exps}
    base = lam[:, None] + lam[None, :] + _f_matrix(pw, k)
    return base + sign * (_f_matrix(pw, a) + _f_matrix(pw, b))


def _trace_terms(rho: DensityMatrix, h0: np.ndarray, p: SkewParams) -> tuple[float, float, float, float]:
    """``(Tr[rho H0^2], T(a+b), T(a), T(b))`` in the computational basis."""
    cache: dict[float, np.ndarray] = {}

    def pw(e: float) -> np.ndarray:
        if e not in cache:
            cache[e] = rho.power(e)
        return cache[e]

    def t(c: float) -> float:
        left = pw(c) @ h0
        right = pw(1 - c) @ h0
        return float(np.sum(left * right.T).real)

    sq = float(np.sum((rho.matrix @ h0) * h0.T).real)
    return sq, t(p.k), t(p.alpha), t(p.beta)


def skew_IJ(rho: DensityMatrix, h, p: SkewParams) -> tuple[float, float, float]:
    """``(I, J, scale)`` from one set of matrix powers.

    ``scale`` is the sum of the magnitudes of the four traces, the natural
    size of the round-off in ``I`` and ``J``.
    """
    h0 = center(rho, h).matrix
    _check_dims(rho, h0)
    sq, tk, ta, tb = _trace_terms(rho, h0, p)
    skew_i = 0.5 * (sq + tk - ta - tb)
    skew_j = 0.5 * (sq + tk + ta + tb)
    scale = abs(sq) + abs(tk) + abs(ta) + abs(tb)
    return skew_i, skew_j, scale


def skew_I(rho: DensityMatrix, h, p: SkewParams) -> float:
    return skew_IJ(rho, h, p)[0]


def skew_J(rho: DensityMatrix, h, p: SkewParams) -> float:
    return skew_IJ(rho, h, p)[1]


def _eigenbasis_elements(rho: DensityMatrix, h) -> np.ndarray:
    h0 = center(rho, h).matrix
    u = rho.eigenvectors
    return dagger(u) @ h0 @ u


def _upper_sum(weights: np.ndarray, elements: np.ndarray) -> float:
    iu = np.triu_indices(weights.shape[0], k=1)
    return float(np.sum(weights[iu] * np.abs(elements[iu]) ** 2))


def _spectral_eigenvalues(rho: DensityMatrix, p: SkewParams) -> np.ndarray:
    if p.k > 1:
        # same admissibility rule as the trace path
        rho.power(1 - p.k)
    return clamped_eigenvalues(rho.spectrum)


def skew_I_spectral(rho: DensityMatrix, h, p: SkewParams) -> float:
    """Generalized skew information as a weighted sum over eigenvalue pairs."""
    lam = _spectral_eigenvalues(rho, p)
    return 0.5 * _upper_sum(pair_weights(lam, p, -1), _eigenbasis_elements(rho, h))


def skew_J_spectral_bound(rho: DensityMatrix, h, p: SkewParams) -> float:
    """Off-diagonal part of J; a lower bound for :func:`skew_J`."""
    lam = _spectral_eigenvalues(rho, p)
    return 0.5 * _upper_sum(pair_weights(lam, p, +1), _eigenbasis_elements(rho, h))


def skew_J_spectral(rho: DensityMatrix, h, p: SkewParams) -> float:
    """Exact J from the eigenbasis: the bound plus ``2 sum_i lam_i |<i|H0|i>|^2``."""
    lam = _spectral_eigenvalues(rho, p)
    el = _eigenbasis_elements(rho, h)
    diag = 2.0 * float(np.sum(lam * np.abs(np.diag(el)) ** 2))
    return diag + 0.5 * _upper_sum(pair_weights(lam, p, +1), el)


def wyd_I(rho: DensityMatrix, h, alpha: float) -> float:
    """One-parameter skew information ``Tr[rho H0^2] - Tr[rho^a H0 rho^(1-a) H0]``."""
    h0 = center(rho, h).matrix
    sq = float(np.sum((rho.matrix @ h0) * h0.T).real)
    left = rho.power(alpha) @ h0
    right = rho.power(1 - alpha) @ h0
    return sq - float(np.sum(left * right.T).real)


def wyd_J(rho: DensityMatrix, h, alpha: float) -> float:
    h0 = center(rho, h).matrix
    sq = float(np.sum((rho.matrix @ h0) * h0.T).real)
    left = rho.power(alpha) @ h0
    right = rho.power(1 - alpha) @ h0
    return sq + float(np.sum(left * right.T).real)


def wy_I(rho: DensityMatrix, h) -> float:
    """Wigner-Yanase skew information ``Tr[rho H^2] - Tr[rho^1/2 H rho^1/2 H]``."""
    return wyd_I(rho, h, 0.5)


def _clamp(x: float, scale: float, what: str) -> float:
    """Snap round-off-sized values to zero before a square root.

    Both signs are snapped: an ``I`` of 1e-17 is as much noise as -1e-17,
    and its square root would otherwise surface as a spurious 1e-8.
    """
    if abs(x) <= CLAMP_TOL * max(1.0, scale):
        return 0.0
    if x > 0.0:
        return x
    raise NumericalError(f"{what} is negative beyond round-off: {x!r} (scale {scale:.3g})")


def u_luo(rho: DensityMatrix, h, alpha: float = 0.5) -> float:
    """``sqrt(V^2 - (V - I_alpha)^2)``; ``alpha = 1/2`` is Luo's quantum uncertainty."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha!r}")
    v = variance(rho, h)
    i = wyd_I(rho, h, alpha)
    radicand = v * v - (v - i) ** 2
    return math.sqrt(_clamp(radicand, v * v, "U radicand"))


def u_geo(rho: DensityMatrix, h, p: SkewParams) -> float:
    """``sqrt(I * J)`` for the two-parameter family."""
    i, j, scale = skew_IJ(rho, h, p)
    return math.sqrt(_clamp(i, scale, "I") * _clamp(j, scale, "J"))


@dataclass(frozen=True)
class QuantityReport:
    variance: float
    skew_I: float
    skew_J: float
    skew_U: float
    dual_path_delta: float
    params: SkewParams

    def to_dict(self) -> dict:
        return {
            "alpha": self.params.alpha,
            "beta": self.params.beta,
            "region": self.params.region.value,
            "V": self.variance,
            "I": self.skew_I,
            "J": self.skew_J,
            "U": self.skew_U,
            "dual_path_delta": self.dual_path_delta,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "QuantityReport":
        params = SkewParams(d["alpha"], d["beta"])
        if params.region.value != d["region"]:
            raise ValueError(f"region {d['region']!r} inconsistent with alpha+beta={params.k!r}")
        return cls(d["V"], d["I"], d["J"], d["U"], d["dual_path_delta"], params)


def report(rho: DensityMatrix, h, p: SkewParams) -> QuantityReport:
    raw_i, raw_j, scale = skew_IJ(rho, h, p)
    i, j = _clamp(raw_i, scale, "I"), _clamp(raw_j, scale, "J")
    delta = abs(raw_i - skew_I_spectral(rho, h, p))
    return QuantityReport(variance(rho, h), i, j, math.sqrt(i * j), delta, p)
