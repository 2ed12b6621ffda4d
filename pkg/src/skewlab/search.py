"""Randomized trial runner, counterexample hunter and parameter sweep.

Every trial is a pure function of ``(seed, dim, trial_index)``: its random
stream is derived from that key alone, so aggregates do not depend on the
order trials run in or on how they are split across worker processes.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import inequalities as ineq
from .hermitian import dagger
from .io import matrix_from_dict, matrix_to_dict
from .skew import SkewParams
from .states import (
    DensityMatrix,
    Observable,
    SamplerConfig,
    pauli,
    sample_density,
    sample_observable,
    trial_stream,
    validate_density,
)

TARGETS = ("heisenberg", "schrodinger", "schrodinger_sym", "luo", "thm21", "thm31", "wy_naive", "chain")
REGIONS = ("asserted", "gap", "any")
DEFAULT_FLOOR = 1e-6
# a trial only counts as a counterexample below this relative slack
HUNT_THRESHOLD = 1e-6
# hunting refines the best candidate when its relative slack is below this
NEAR_MISS = 1e-2
REFINE_STEPS = 100
REFINE_STEP = 0.5
REFINE_DECAY = 0.97
# key used for the refinement stream; trial indices never reach it
_REFINE_KEY = 2**63 - 1


def normalize_target(name: str) -> str:
    t = name.replace("-", "_").lower()
    if t not in TARGETS:
        raise ValueError(f"unknown target {name!r}; choose from {', '.join(TARGETS)}")
    return t


# relations that are false in general; their verdicts are never asserted
UNASSERTED_TARGETS = ("schrodinger", "wy_naive")


def is_asserted(target: str, params: Optional[SkewParams]) -> bool:
    """Whether a verdict of ``target`` at ``params`` is expected to hold."""
    if target in UNASSERTED_TARGETS:
        return False
    if target == "thm31":
        return params.asserted
    return True


def sample_params(target: str, region: str, rng: np.random.Generator) -> Optional[SkewParams]:
    """Exponents for one trial.

    ``thm21`` and ``chain`` use ``alpha ~ U[0, 1]``. For ``thm31`` the
    ``asserted`` region is, with probability 1/2, the triangle
    ``alpha + beta <= 1/2`` and otherwise ``{alpha + beta >= 1}`` inside
    ``[0, 2]^2``; ``gap`` is the strip ``1/2 < alpha + beta < 1``; ``any``
    is all of ``[0, 2]^2``.
    """
    if target in ("thm21", "chain"):
        return SkewParams.dyson(float(rng.uniform(0.0, 1.0)))
    if target != "thm31":
        return None
    if region == "any":
        a, b = rng.uniform(0.0, 2.0, 2)
        return SkewParams(float(a), float(b))
    if region == "asserted":
        if rng.uniform() < 0.5:
            box, accept = 0.5, lambda k: k <= 0.5
        else:
            box, accept = 2.0, lambda k: k >= 1.0
    elif region == "gap":
        box, accept = 1.0, lambda k: 0.5 < k < 1.0
    else:
        raise ValueError(f"unknown region {region!r}; choose from {', '.join(REGIONS)}")
    # rejection sampling from the box [0, box]^2
    while True:
        a, b = rng.uniform(0.0, box, 2)
        if accept(a + b):
            return SkewParams(float(a), float(b))


def evaluate(target: str, rho: DensityMatrix, a, b, params: Optional[SkewParams], tol: float = ineq.DEFAULT_TOL):
    """Verdict of ``target`` on one input; ``chain`` reports its tightest link."""
    if target == "heisenberg":
        return ineq.check_heisenberg(rho, a, b, tol)
    if target == "schrodinger":
        return ineq.check_schrodinger(rho, a, b, tol)
    if target == "schrodinger_sym":
        return ineq.check_schrodinger_sym(rho, a, b, tol)
    if target == "luo":
        return ineq.check_luo(rho, a, b, tol)
    if target == "wy_naive":
        return ineq.check_wy_naive(rho, a, b, tol)
    if target == "thm21":
        return ineq.check_thm21(rho, a, b, params.alpha, tol)
    if target == "thm31":
        return ineq.check_thm31(rho, a, b, params, tol)
    if target == "chain":
        return min(ineq.check_chain(rho, a, params.alpha, tol), key=lambda v: v.relative_slack)
    raise ValueError(f"unknown target {target!r}")


@dataclass(frozen=True)
class TrialRecord:
    """One evaluated trial, replayable from ``(seed, dim, trial_index)`` or from ``witness``.

    ``source`` is ``"sample"`` for drawn trials and ``"refine"`` for
    perturbations produced by :func:`hunt`; ``refine_step`` numbers the
    latter.
    """

    target: str
    seed: int
    trial_index: int
    dim: int
    params: Optional[SkewParams]
    verdict: ineq.InequalityVerdict
    witness: Optional[dict] = None
    source: str = "sample"
    refine_step: int = 0

    def to_dict(self) -> dict:
        p = self.params
        return {
            "target": self.target,
            "seed": self.seed,
            "trial_index": self.trial_index,
            "dim": self.dim,
            "alpha": None if p is None else p.alpha,
            "beta": None if p is None else p.beta,
            "region": None if p is None else p.region.value,
            "source": self.source,
            "refine_step": self.refine_step,
            "verdict": self.verdict.to_dict(),
            "witness": self.witness,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TrialRecord":
        params = None if d.get("alpha") is None else SkewParams(d["alpha"], d["beta"])
        v = ineq.InequalityVerdict.from_dict(d["verdict"])
        # verdict JSON has no asserted flag; it follows from target and region
        v = ineq.InequalityVerdict(*(getattr(v, k) for k in ineq.VERDICT_KEYS),
                                   asserted=is_asserted(d["target"], params))
        return cls(
            d["target"], d["seed"], d["trial_index"], d["dim"], params, v,
            d.get("witness"), d.get("source", "sample"), d.get("refine_step", 0),
        )


def _witness(rho: DensityMatrix, a, b) -> dict:
    return {
        "rho": matrix_to_dict(rho.matrix),
        "a": matrix_to_dict(a.matrix),
        "b": matrix_to_dict(b.matrix),
        "eigen_floor": rho.eigen_floor,
    }


def _draw(target: str, seed: int, dim: int, index: int, region: str, floor: float):
    rng = trial_stream(seed, dim, index)
    params = sample_params(target, region, rng)
    cfg = SamplerConfig(dim, seed, floor)
    rho = sample_density(cfg, rng)
    a = sample_observable(cfg, rng)
    b = sample_observable(cfg, rng)
    return params, rho, a, b


def generate_trial(
    target: str, seed: int, dim: int, index: int,
    region: str = "asserted", floor: float = DEFAULT_FLOOR, tol: float = ineq.DEFAULT_TOL,
) -> TrialRecord:
    """Regenerate trial ``index`` deterministically, witness included."""
    target = normalize_target(target)
    params, rho, a, b = _draw(target, seed, dim, index, region, floor)
    v = evaluate(target, rho, a, b, params, tol)
    return TrialRecord(target, seed, index, dim, params, v, _witness(rho, a, b))


def replay(record: TrialRecord, tol: Optional[float] = None) -> ineq.InequalityVerdict:
    """Re-evaluate a record from its serialized witness."""
    if record.witness is None:
        raise ValueError("record carries no witness")
    w = record.witness
    rho = validate_density(matrix_from_dict(w["rho"]), floor=w.get("eigen_floor", 0.0))
    a = Observable(matrix_from_dict(w["a"]))
    b = Observable(matrix_from_dict(w["b"]))
    return evaluate(record.target, rho, a, b, record.params, record.verdict.tol if tol is None else tol)


# --- aggregate runner ------------------------------------------------------


@dataclass(frozen=True)
class TrialAggregate:
    target: str
    region: str
    seed: int
    dims: tuple
    trials_per_dim: int
    trials: int
    violations: int
    unasserted: int
    min_slack: float
    worst: Optional[TrialRecord]

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "region": self.region,
            "seed": self.seed,
            "dims": list(self.dims),
            "trials_per_dim": self.trials_per_dim,
            "trials": self.trials,
            "violations": self.violations,
            "unasserted": self.unasserted,
            "min_slack": self.min_slack,
            "worst": None if self.worst is None else self.worst.to_dict(),
        }


def _scan_chunk(args) -> tuple:
    target, seed, dim, start, stop, region, floor, tol = args
    violations = unasserted = 0
    best_slack, best_index = math.inf, -1
    for i in range(start, stop):
        params, rho, a, b = _draw(target, seed, dim, i, region, floor)
        v = evaluate(target, rho, a, b, params, tol)
        if not v.holds:
            violations += 1
        if not v.asserted:
            unasserted += 1
        if v.slack < best_slack:
            best_slack, best_index = v.slack, i
    return dim, stop - start, violations, unasserted, best_slack, best_index


def _chunks(dims, trials_per_dim, workers):
    n_chunks = max(1, workers * 4)
    size = max(1, math.ceil(trials_per_dim / n_chunks))
    for dim in dims:
        for start in range(0, trials_per_dim, size):
            yield dim, start, min(start + size, trials_per_dim)


def _map(fn, tasks, workers: int):
    if workers <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


def run_trials(
    target: str,
    dims: Sequence[int],
    trials_per_dim: int,
    seed: int,
    region: str = "asserted",
    floor: float = DEFAULT_FLOOR,
    tol: float = ineq.DEFAULT_TOL,
    workers: int = 1,
) -> TrialAggregate:
    """Evaluate ``target`` on ``trials_per_dim`` random inputs per dimension.

    ``violations`` counts verdicts that do not hold under ``tol``; ``worst``
    is the trial with the smallest slack (earliest on ties), regenerated
    with its witness.
    """
    target = normalize_target(target)
    if region not in REGIONS:
        raise ValueError(f"unknown region {region!r}; choose from {', '.join(REGIONS)}")
    if trials_per_dim < 1:
        raise ValueError("trials_per_dim must be >= 1")
    dims = tuple(int(d) for d in dims)
    tasks = [(target, seed, d, s, e, region, floor, tol) for d, s, e in _chunks(dims, trials_per_dim, workers)]
    results = _map(_scan_chunk, tasks, workers)

    trials = violations = unasserted = 0
    best = (math.inf, None, -1)
    for dim, n, viol, unas, slack, index in results:
        trials += n
        violations += viol
        unasserted += unas
        # strict comparison keeps the earliest trial on ties
        if slack < best[0]:
            best = (slack, dim, index)
    worst = None
    if best[1] is not None:
        worst = generate_trial(target, seed, best[1], best[2], region, floor, tol)
    return TrialAggregate(target, region, seed, dims, trials_per_dim, trials, violations, unasserted, best[0], worst)


# --- hunting ---------------------------------------------------------------


def _is_counterexample(v: ineq.InequalityVerdict) -> bool:
    return v.slack < -HUNT_THRESHOLD * v.scale


def _project_density(m: np.ndarray, floor: float) -> DensityMatrix:
    h = (m + dagger(m)) / 2
    w, u = np.linalg.eigh(h)
    w = np.clip(w, 0.0, None)
    w = w / w.sum()
    dim = len(w)
    if floor > 0 and w.min() < floor:
        eps = dim * floor
        w = (1 - eps) * w + eps / dim
    return validate_density((u * w) @ dagger(u), floor=floor)


def _refine(record: TrialRecord, floor: float, tol: float) -> TrialRecord:
    """Local search around a witness: Gaussian perturbations with a shrinking step.

    Candidates are accepted when they lower the relative slack. Returns the
    best record seen, which is ``record`` itself if nothing improved.
    """
    rng = trial_stream(record.seed, record.dim, _REFINE_KEY)
    w = record.witness
    rho = matrix_from_dict(w["rho"])
    a = matrix_from_dict(w["a"])
    b = matrix_from_dict(w["b"])
    cfg = SamplerConfig(record.dim, record.seed, floor)
    best = record
    step = REFINE_STEP
    for j in range(1, REFINE_STEPS + 1):
        step *= REFINE_DECAY
        cand_rho = _project_density(rho + step * sample_observable(cfg, rng).matrix / record.dim, floor)
        cand_a = Observable(a + step * sample_observable(cfg, rng).matrix)
        cand_b = Observable(b + step * sample_observable(cfg, rng).matrix)
        v = evaluate(record.target, cand_rho, cand_a, cand_b, record.params, tol)
        if v.relative_slack < best.verdict.relative_slack:
            rho, a, b = cand_rho.matrix, cand_a.matrix, cand_b.matrix
            best = TrialRecord(
                record.target, record.seed, record.trial_index, record.dim, record.params, v,
                _witness(cand_rho, cand_a, cand_b), "refine", j,
            )
    return best


def hunt(
    target: str,
    dim: int,
    max_trials: int,
    seed: int,
    region: str = "asserted",
    floor: float = DEFAULT_FLOOR,
    tol: float = ineq.DEFAULT_TOL,
    refine: bool = True,
) -> Optional[TrialRecord]:
    """Search for an input whose slack is below ``-1e-6 * scale``.

    Trials are scanned in index order and the first counterexample is
    returned. With ``refine`` it is first sharpened by local search; if no
    sampled trial qualifies but the closest one lies within ``NEAR_MISS``
    relative slack, the same local search is tried from there.
    """
    target = normalize_target(target)
    best_rel, best_index = math.inf, -1
    for i in range(max_trials):
        params, rho, a, b = _draw(target, seed, dim, i, region, floor)
        v = evaluate(target, rho, a, b, params, tol)
        if _is_counterexample(v):
            found = TrialRecord(target, seed, i, dim, params, v, _witness(rho, a, b))
            return _refine(found, floor, tol) if refine else found
        if v.relative_slack < best_rel:
            best_rel, best_index = v.relative_slack, i
    if refine and best_index >= 0 and best_rel < NEAR_MISS:
        candidate = _refine(generate_trial(target, seed, dim, best_index, region, floor, tol), floor, tol)
        if _is_counterexample(candidate.verdict):
            return candidate
    return None


# --- sweep -----------------------------------------------------------------

SWEEP_HEADER = ("alpha", "beta", "region", "trials", "min_slack", "mean_slack", "violations")


def fixture() -> tuple[DensityMatrix, Observable, Observable]:
    """The qubit state ``diag(3/4, 1/4)`` with observables sigma_x, sigma_y."""
    return validate_density(np.diag([0.75, 0.25])), pauli("x"), pauli("y")


def _sweep_cell(args) -> dict:
    alpha, beta, dims, trials, seed, floor, tol, include_fixture = args
    p = SkewParams(alpha, beta)
    slacks = []
    violations = 0
    inputs = []
    if include_fixture:
        inputs.append(fixture())
    for dim in dims:
        cfg = SamplerConfig(dim, seed, floor)
        for t in range(trials):
            # common random inputs across cells
            rng = cfg.stream(dim, t)
            inputs.append((sample_density(cfg, rng), sample_observable(cfg, rng), sample_observable(cfg, rng)))
    for rho, a, b in inputs:
        v = ineq.check_thm31(rho, a, b, p, tol)
        slacks.append(v.slack)
        violations += not v.holds
    return {
        "alpha": p.alpha,
        "beta": p.beta,
        "region": p.region.value,
        "trials": len(slacks),
        "min_slack": min(slacks),
        "mean_slack": math.fsum(slacks) / len(slacks),
        "violations": violations,
    }


def sweep(
    alpha_grid: Sequence[float],
    beta_grid: Sequence[float],
    dims: Sequence[int],
    trials_per_cell: int,
    seed: int,
    floor: float = DEFAULT_FLOOR,
    tol: float = ineq.DEFAULT_TOL,
    include_fixture: bool = False,
    workers: int = 1,
) -> list[dict]:
    """Empirical slack of the two-parameter relation over an ``(alpha, beta)`` grid.

    Rows come out alpha-major in grid order. ``trials_per_cell`` inputs are
    drawn per dimension; the qubit fixture is added when requested.
    """
    if not alpha_grid or not beta_grid:
        raise ValueError("grids must be non-empty")
    for g in (*alpha_grid, *beta_grid):
        if not 0.0 <= g <= 2.0:
            raise ValueError(f"grid values must lie in [0, 2], got {g!r}")
    if trials_per_cell < 0 or (trials_per_cell == 0 and not include_fixture):
        raise ValueError("need at least one trial per cell")
    dims = tuple(int(d) for d in dims)
    tasks = [
        (float(a), float(b), dims, trials_per_cell, seed, floor, tol, include_fixture)
        for a in alpha_grid for b in beta_grid
    ]
    return _map(_sweep_cell, tasks, workers)


# --- scalar grids ----------------------------------------------------------


def _summary(name: str, verdicts) -> dict:
    verdicts = list(verdicts)
    return {
        "check": name,
        "evaluations": len(verdicts),
        "violations": sum(not v.holds for v in verdicts),
        "min_relative_slack": min(v.relative_slack for v in verdicts),
    }


def scalar_suite(points: int = 200, samples: int = 400, seed: int = 0, tol: float = ineq.DEFAULT_TOL) -> list[dict]:
    """Grid checks of the scalar inequalities behind the two-parameter relation.

    * ``lemma33``: ``points`` log-spaced ``t`` in [1e-3, 1e3] times
      ``samples`` exponent pairs from the asserted region;
    * ``factorization``: same ``t`` grid, exponent pairs from all of
      ``[0, 2]^2`` (gap included), residual below ``1e-10 * scale``;
    * ``scalar_f``: ``t`` in [1, 1e3] against ``k`` in [0, 1/2] and [1, 4];
    * ``prior``: ``p`` in [0, 1] against ``s`` in [1, 1e3].
    """
    ts = np.geomspace(1e-3, 1e3, points)
    asserted = [sample_params("thm31", "asserted", trial_stream(seed, 0, i)) for i in range(samples)]
    anywhere = [sample_params("thm31", "any", trial_stream(seed, 1, i)) for i in range(samples)]

    lemma = [ineq.scalar_lemma33(float(t), p.alpha, p.beta, tol) for p in asserted for t in ts]

    fact = [ineq.check_factorization(float(t), p.alpha, p.beta) for p in anywhere for t in ts]

    t_up = np.geomspace(1.0, 1e3, points)
    ks = np.concatenate([np.linspace(0.0, 0.5, 51), np.linspace(1.0, 4.0, 61)])
    f_checks = [ineq.check_scalar_f(float(t), float(k)) for k in ks for t in t_up]

    prior = [ineq.scalar_prior(float(p), float(s), tol) for p in np.linspace(0.0, 1.0, 101) for s in t_up]

    return [
        _summary("lemma33", lemma),
        _summary("factorization", fact),
        _summary("scalar_f", f_checks),
        _summary("prior", prior),
    ]
