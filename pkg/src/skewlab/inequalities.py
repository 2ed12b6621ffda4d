"""Verdicts for the uncertainty relations, ordering chains and scalar lemmas.

Each checker returns an :class:`InequalityVerdict` for a claim ``lhs >= rhs``.
The claim holds when ``lhs - rhs >= -tol * max(1, |lhs|, |rhs|)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hermitian import commutator
from .states import DensityMatrix, center, covariance, observable_matrix, variance
from .skew import (
    WIGNER_YANASE,
    SkewParams,
    f_weight,
    skew_IJ,
    u_geo,
    u_luo,
    wy_I,
    wyd_I,
    wyd_J,
)

DEFAULT_TOL = 1e-9
SCALAR_F_TOL = 1e-12

VERDICT_KEYS = ("name", "lhs", "rhs", "slack", "holds", "tol")


@dataclass(frozen=True)
class InequalityVerdict:
    """Outcome of checking ``lhs >= rhs``.

    ``asserted`` is False when the relation is not claimed for the inputs (e.g. the gap
    region ``1/2 < alpha + beta < 1``); it is not part of the JSON form.
    """

    name: str
    lhs: float
    rhs: float
    slack: float
    holds: bool
    tol: float
    asserted: bool = True

    @property
    def scale(self) -> float:
        return max(1.0, abs(self.lhs), abs(self.rhs))

    @property
    def relative_slack(self) -> float:
        return self.slack / self.scale

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in VERDICT_KEYS}

    @classmethod
    def from_dict(cls, d: dict) -> "InequalityVerdict":
        return cls(*(d[k] for k in VERDICT_KEYS))


def verdict(name: str, lhs: float, rhs: float, tol: float = DEFAULT_TOL, asserted: bool = True) -> InequalityVerdict:
    lhs, rhs = float(lhs), float(rhs)
    slack = lhs - rhs
    holds = slack >= -tol * max(1.0, abs(lhs), abs(rhs))
    return InequalityVerdict(name, lhs, rhs, slack, bool(holds), tol, asserted)


# --- commutator expectation ------------------------------------------------


def commutator_expectation(rho: DensityMatrix, a, b) -> float:
    """``|Tr[rho [A, B]]|`` evaluated directly."""
    c = commutator(observable_matrix(a), observable_matrix(b))
    return abs(complex(np.sum(rho.matrix * c.T)))


def commutator_expectation_spectral(rho: DensityMatrix, a, b) -> float:
    """``2 |sum_{i<j} (lam_i - lam_j) Im(<i|A0|j><j|B0|i>)|`` in the eigenbasis of ``rho``."""
    u = rho.eigenvectors
    lam = rho.eigenvalues
    a0 = u.conj().T @ center(rho, a).matrix @ u
    b0 = u.conj().T @ center(rho, b).matrix @ u
    iu = np.triu_indices(rho.dim, k=1)
    terms = (lam[iu[0]] - lam[iu[1]]) * np.imag(a0[iu] * b0.T[iu])
    return 2.0 * abs(float(np.sum(terms)))


def _commutator_sq(rho: DensityMatrix, a, b) -> float:
    return commutator_expectation(rho, a, b) ** 2


# --- matrix inequalities ---------------------------------------------------


def check_heisenberg(rho: DensityMatrix, a, b, tol: float = DEFAULT_TOL) -> InequalityVerdict:
    lhs = variance(rho, a) * variance(rho, b)
    return verdict("heisenberg", lhs, 0.25 * _commutator_sq(rho, a, b), tol)


def check_schrodinger(rho: DensityMatrix, a, b, tol: float = DEFAULT_TOL) -> InequalityVerdict:
    """``V(A) V(B) - |Cov(A, B)|^2 >= |Tr[rho [A, B]]|^2 / 4`` with the complex covariance.

    Not a valid inequality: ``|Cov|^2`` already contains the commutator
    term, since ``Im Cov = Tr[rho [A, B]] / 2i``. The pure state ``|0>``
    with sigma_x, sigma_y gives ``lhs = 0 < rhs = 1``. Verdicts are
    therefore unasserted; :func:`check_schrodinger_sym` is the valid form.
    """
    lhs = variance(rho, a) * variance(rho, b) - abs(covariance(rho, a, b)) ** 2
    return verdict("schrodinger", lhs, 0.25 * _commutator_sq(rho, a, b), tol, asserted=False)


def check_schrodinger_sym(rho: DensityMatrix, a, b, tol: float = DEFAULT_TOL) -> InequalityVerdict:
    """Robertson-Schrodinger relation with the symmetrized covariance ``Re Cov(A, B)``."""
    lhs = variance(rho, a) * variance(rho, b) - covariance(rho, a, b).real ** 2
    return verdict("schrodinger_sym", lhs, 0.25 * _commutator_sq(rho, a, b), tol)


def check_luo(rho: DensityMatrix, a, b, tol: float = DEFAULT_TOL) -> InequalityVerdict:
    lhs = u_luo(rho, a, 0.5) * u_luo(rho, b, 0.5)
    return verdict("luo", lhs, 0.25 * _commutator_sq(rho, a, b), tol)


def check_thm21(rho: DensityMatrix, a, b, alpha: float, tol: float = DEFAULT_TOL) -> InequalityVerdict:
    """``U_alpha(A) U_alpha(B) >= alpha (1 - alpha) |Tr[rho [A, B]]|^2``."""
    lhs = u_luo(rho, a, alpha) * u_luo(rho, b, alpha)
    return verdict("thm21", lhs, alpha * (1 - alpha) * _commutator_sq(rho, a, b), tol)


def check_thm31(rho: DensityMatrix, a, b, p: SkewParams, tol: float = DEFAULT_TOL) -> InequalityVerdict:
    """``U_{a,b}(A) U_{a,b}(B) >= a b |Tr[rho [A, B]]|^2``.

    Only asserted when ``a + b <= 1/2`` or ``a + b >= 1``; gap-region
    verdicts are computed the same way but flagged ``asserted=False``.
    """
    lhs = u_geo(rho, a, p) * u_geo(rho, b, p)
    rhs = p.alpha * p.beta * _commutator_sq(rho, a, b)
    return verdict("thm31", lhs, rhs, tol, asserted=p.asserted)


def check_wy_naive(rho: DensityMatrix, a, b, tol: float = DEFAULT_TOL) -> InequalityVerdict:
    """The relation ``I(A) I(B) >= |Tr[rho [A, B]]|^2 / 4``, which is false in general."""
    lhs = wy_I(rho, a) * wy_I(rho, b)
    return verdict("wy_naive", lhs, 0.25 * _commutator_sq(rho, a, b), tol, asserted=False)


def check_chain(rho: DensityMatrix, h, alpha: float, tol: float = DEFAULT_TOL) -> list[InequalityVerdict]:
    """Every link of the orderings between V, I, J and U for ``alpha`` in [0, 1].

    Covers ``0 <= I <= U <= V``, ``I_a <= I <= J <= J_a``,
    ``0 <= I_a <= U_a <= U`` and the trace comparison
    ``Tr[rho^1/2 H rho^1/2 H] <= Tr[rho^a H rho^(1-a) H]``.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha!r}")
    v = variance(rho, h)
    i_wy, j_wy, _ = skew_IJ(rho, h, WIGNER_YANASE)
    u_wy = u_luo(rho, h, 0.5)
    i_a = wyd_I(rho, h, alpha)
    j_a = wyd_J(rho, h, alpha)
    u_a = u_luo(rho, h, alpha)

    hm = observable_matrix(h)
    half = rho.power(0.5) @ hm
    t_half = float(np.sum(half * half.T).real)
    t_alpha = float(np.sum((rho.power(alpha) @ hm) * (rho.power(1 - alpha) @ hm).T).real)

    return [
        verdict("wy_nonneg", i_wy, 0.0, tol),
        verdict("wy_le_u", u_wy, i_wy, tol),
        verdict("u_le_var", v, u_wy, tol),
        verdict("wyd_le_wy", i_wy, i_a, tol),
        verdict("wy_le_jwy", j_wy, i_wy, tol),
        verdict("jwy_le_jwyd", j_a, j_wy, tol),
        verdict("wyd_nonneg", i_a, 0.0, tol),
        verdict("wyd_le_uwyd", u_a, i_a, tol),
        verdict("uwyd_le_u", u_wy, u_a, tol),
        verdict("trace_comparison", t_alpha, t_half, tol),
    ]


# --- scalar layer ----------------------------------------------------------


def _check_t(t: float) -> None:
    if not t > 0:
        raise ValueError(f"t must be positive, got {t!r}")


def lemma33_sides(t: float, alpha: float, beta: float) -> tuple[float, float]:
    _check_t(t)
    k = alpha + beta
    lhs = (t ** (1 - k) + 1) ** 2 * (t ** (2 * alpha) - 1) * (t ** (2 * beta) - 1)
    return lhs, 16 * alpha * beta * (t - 1) ** 2


def scalar_lemma33(t: float, alpha: float, beta: float, tol: float = DEFAULT_TOL) -> InequalityVerdict:
    """``(t^(1-k)+1)^2 (t^2a - 1)(t^2b - 1) >= 16 a b (t-1)^2`` with ``k = a + b``."""
    lhs, rhs = lemma33_sides(t, alpha, beta)
    return verdict("lemma33", lhs, rhs, tol, asserted=SkewParams(alpha, beta).asserted)


FACTORIZATION_RTOL = 1e-10


def _factorization_terms(t: float, alpha: float, beta: float) -> tuple[float, float, float]:
    _check_t(t)
    k = alpha + beta
    product = (t ** (1 - k) + 1) ** 2 * (t ** (2 * alpha) - 1) * (t ** (2 * beta) - 1)
    plus = t + 1 + t ** k + t ** (1 - k)
    minus = t ** alpha + t ** (1 - alpha) + t ** beta + t ** (1 - beta)
    return product, plus * plus, minus * minus


def factorization_sides(t: float, alpha: float, beta: float) -> tuple[float, float]:
    """Product form and difference-of-squares form of the same expression."""
    product, plus_sq, minus_sq = _factorization_terms(t, alpha, beta)
    return product, plus_sq - minus_sq


def scalar_factorization(t: float, alpha: float, beta: float) -> float:
    """Absolute difference between the two forms; zero up to round-off."""
    product, diff = factorization_sides(t, alpha, beta)
    return abs(product - diff)


def check_factorization(t: float, alpha: float, beta: float, rtol: float = FACTORIZATION_RTOL) -> InequalityVerdict:
    """Verdict ``rtol * scale >= residual``.

    ``scale`` is the largest magnitude among the product and the two squares.
    The squares cancel when ``alpha`` or ``beta`` is near 0, so the residual
    is only meaningful relative to them, not to the small difference.
    """
    product, plus_sq, minus_sq = _factorization_terms(t, alpha, beta)
    scale = max(1.0, abs(product), plus_sq, minus_sq)
    return verdict("factorization", rtol * scale, abs(product - (plus_sq - minus_sq)), 0.0)


def scalar_f(t: float, k: float) -> float:
    """``(t^(1-k)+1)(t^k-1) - 2k(t-1)``."""
    _check_t(t)
    return (t ** (1 - k) + 1) * (t ** k - 1) - 2 * k * (t - 1)


def check_scalar_f(t: float, k: float, tol: float = SCALAR_F_TOL) -> InequalityVerdict:
    """``f(t) >= 0``; claimed for ``t >= 1`` when ``k >= 1`` or ``k <= 1/2``."""
    if t < 1 or k < 0:
        raise ValueError(f"need t >= 1 and k >= 0, got t={t!r}, k={k!r}")
    # compare the two products so the tolerance scales with their size
    lhs = (t ** (1 - k) + 1) * (t ** k - 1)
    rhs = 2 * k * (t - 1)
    return verdict("scalar_f", lhs, rhs, tol, asserted=k >= 1 or k <= 0.5)


def scalar_prior(p: float, s: float, tol: float = DEFAULT_TOL) -> InequalityVerdict:
    """``(1-2p)^2 (s-1)^2 >= (s^p - s^(1-p))^2`` for ``p`` in [0, 1], ``s >= 1``."""
    if not (0.0 <= p <= 1.0 and s >= 1.0):
        raise ValueError(f"need 0 <= p <= 1 and s >= 1, got p={p!r}, s={s!r}")
    return verdict("prior", (1 - 2 * p) ** 2 * (s - 1) ** 2, (s ** p - s ** (1 - p)) ** 2, tol)


def check_weight_product(lam_i: float, lam_j: float, p: SkewParams, tol: float = 1e-12) -> InequalityVerdict:
    """Pair-weight inequality ``(l_i+l_j+f_k)^2 - (f_a+f_b)^2 >= 16 a b (l_i-l_j)^2``."""
    fk = f_weight(lam_i, lam_j, p.k)
    fab = f_weight(lam_i, lam_j, p.alpha) + f_weight(lam_i, lam_j, p.beta)
    lhs = (lam_i + lam_j + fk) ** 2 - fab ** 2
    rhs = 16 * p.alpha * p.beta * (lam_i - lam_j) ** 2
    return verdict("weight_product", lhs, rhs, tol, asserted=p.asserted)
