"""Acceptance criteria, one test each, at the stated budgets and tolerances.

Each test records a single PASS/FAIL line, printed together in the
terminal summary, then asserts.
"""

import math
import time

import numpy as np
import pytest

from skewlab.cli import run_cli
from skewlab.inequalities import check_luo, check_thm21, check_thm31, check_wy_naive, commutator_expectation
from skewlab.search import fixture, hunt, replay, run_trials, scalar_suite
from skewlab.skew import (
    SkewParams,
    skew_I,
    skew_I_spectral,
    skew_IJ,
    skew_J,
    skew_J_spectral,
    u_geo,
    u_luo,
)
from skewlab.states import Observable, SamplerConfig, sample_density, sample_observable, validate_density, variance

from conftest import ACCEPTANCE_LINES, mpow

pytestmark = pytest.mark.acceptance


def record(number, title, ok, detail, seconds):
    line = f"[{'PASS' if ok else 'FAIL'}] {number}. {title}: {detail} ({seconds:.1f} s)"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def draws(seed, dim, n, floor=1e-6):
    cfg = SamplerConfig(dim, seed, floor)
    for i in range(n):
        rng = cfg.stream(dim, i)
        yield rng, sample_density(cfg, rng), sample_observable(cfg, rng)


def test_1_dual_path_oracle():
    start = time.perf_counter()
    worst, n = 0.0, 0
    for dim in range(2, 9):
        for rng, rho, h in draws(101, dim, 1000):
            p = SkewParams(*rng.uniform(0, 2, 2))
            i = skew_I(rho, h, p)
            worst = max(worst, abs(i - skew_I_spectral(rho, h, p)) / max(1.0, i))
            n += 1
    secs = time.perf_counter() - start
    ok = worst <= 1e-9 and secs <= 30
    record(1, "dual-path oracle", ok, f"{n} trials, worst relative gap {worst:.2e} <= 1e-9", secs)
    assert ok


def test_2_two_parameter_relation_in_asserted_regions():
    start = time.perf_counter()
    agg = run_trials("thm31", [2, 3, 4], 10_000, 2024, region="asserted")
    secs = time.perf_counter() - start
    ok = agg.violations == 0 and agg.unasserted == 0 and secs <= 60
    record(2, "U_ab(A) U_ab(B) >= ab |Tr rho[A,B]|^2, asserted regions", ok,
           f"{agg.trials} trials, {agg.violations} violations, min slack {agg.min_slack:.3g}", secs)
    assert ok


def test_3_one_parameter_and_luo_relations():
    start = time.perf_counter()
    thm21 = run_trials("thm21", [2, 3, 4], 10_000, 2024)
    luo = run_trials("luo", [2, 3, 4], 10_000, 2024)
    rho, a, b = fixture()
    fx = check_thm21(rho, a, b, 0.5)
    fl = check_luo(rho, a, b)
    eq = max(abs(v.lhs - 0.25) for v in (fx, fl)) <= 1e-9 and max(abs(v.rhs - 0.25) for v in (fx, fl)) <= 1e-9
    secs = time.perf_counter() - start
    ok = thm21.violations == 0 and luo.violations == 0 and eq
    record(3, "one-parameter and Luo relations", ok,
           f"{thm21.trials}+{luo.trials} trials, {thm21.violations}+{luo.violations} violations; "
           f"fixture lhs {fx.lhs:.12f} rhs {fx.rhs:.12f}", secs)
    assert ok


def test_4_exact_equality_at_quarter():
    start = time.perf_counter()
    rho, a, b = fixture()
    p = SkewParams(0.25, 0.25)
    v = check_thm31(rho, a, b, p)
    # spectral route: I from pair weights, J from eigenbasis elements
    u_spec = [math.sqrt(skew_I_spectral(rho, h, p) * skew_J_spectral(rho, h, p)) for h in (a, b)]
    lhs_spec = u_spec[0] * u_spec[1]
    rhs_direct = p.alpha * p.beta * commutator_expectation(rho, a, b) ** 2
    dev = max(abs(v.lhs - 0.0625), abs(v.rhs - 0.0625), abs(lhs_spec - 0.0625), abs(rhs_direct - 0.0625))
    secs = time.perf_counter() - start
    ok = dev <= 1e-9
    record(4, "equality at alpha = beta = 1/4 on the qubit fixture", ok,
           f"lhs {v.lhs:.15f}, rhs {v.rhs:.15f}, spectral lhs {lhs_spec:.15f}, max dev {dev:.1e}", secs)
    assert ok


def test_5_ordering_chains():
    start = time.perf_counter()
    agg = run_trials("chain", [2, 3, 4, 5, 6], 10_000, 2024)
    secs = time.perf_counter() - start
    ok = agg.violations == 0
    record(5, "ordering chains and trace comparison", ok,
           f"{agg.trials} trials x 10 links, {agg.violations} violations, min slack {agg.min_slack:.3g}", secs)
    assert ok


def test_6_naive_relation_fails():
    start = time.perf_counter()
    rec = hunt("wy_naive", 2, 10_000, 1)
    first = hunt("wy_naive", 2, 10_000, 1, refine=False)
    replayed = replay(rec) if rec is not None else None
    rho, a, b = fixture()
    fx = check_wy_naive(rho, a, b)
    secs = time.perf_counter() - start
    ok = (rec is not None and rec.verdict.slack <= -1e-3
          and abs(replayed.slack - rec.verdict.slack) <= 1e-12 and abs(fx.slack + 0.232) < 5e-4)
    detail = "no witness" if rec is None else (
        f"witness slack {rec.verdict.slack:.4f} (first hit at trial {rec.trial_index} "
        f"with slack {first.verdict.slack:.5f}, then refined), "
        f"replay delta {abs(replayed.slack - rec.verdict.slack):.1e}, fixture slack {fx.slack:.4f}")
    record(6, "naive Wigner-Yanase relation has counterexamples", ok, detail, secs)
    assert ok


def test_7_scalar_layer():
    start = time.perf_counter()
    rows = scalar_suite(points=200, samples=400, seed=0)
    secs = time.perf_counter() - start
    ok = all(r["violations"] == 0 for r in rows) and secs <= 10
    detail = ", ".join(f"{r['check']} {r['violations']}/{r['evaluations']}" for r in rows)
    record(7, "scalar inequalities and factorization identity", ok, detail, secs)
    assert ok


def unitary(rng, n):
    q, r = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def rel(x, y):
    """Deviation relative to max(1, |x|); exponents up to 2 give values near 1e10."""
    return abs(x - y) / max(1.0, abs(x))


def test_8_consistency_reductions():
    start = time.perf_counter()
    dev = {"reduction": 0.0, "I+J=2V": 0.0, "u_luo=u_geo": 0.0, "unitary": 0.0}
    for t in range(1000):
        dim = 2 + t % 7
        cfg = SamplerConfig(dim, 77, 1e-6)
        rng = cfg.stream(dim, t)
        rho, h = sample_density(cfg, rng), sample_observable(cfg, rng)
        alpha = float(rng.uniform(0, 1))
        p = SkewParams.dyson(alpha)
        i, j, _ = skew_IJ(rho, h, p)
        # one-parameter forms straight from scipy powers
        h0 = h.matrix - np.trace(rho.matrix @ h.matrix).real * np.eye(dim)
        sq = np.trace(rho.matrix @ h0 @ h0).real
        cross = np.trace(mpow(rho.matrix, alpha) @ h0 @ mpow(rho.matrix, 1 - alpha) @ h0).real
        dev["reduction"] = max(dev["reduction"], rel(sq - cross, i), rel(sq + cross, j))
        dev["I+J=2V"] = max(dev["I+J=2V"], rel(2 * variance(rho, h), i + j))
        dev["u_luo=u_geo"] = max(dev["u_luo=u_geo"], rel(u_luo(rho, h, alpha), u_geo(rho, h, p)))
        q = SkewParams(*rng.uniform(0, 2, 2))
        u = unitary(rng, dim)
        rho2 = validate_density(u @ rho.matrix @ u.conj().T)
        h2 = Observable(u @ h.matrix @ u.conj().T)
        pairs = [(variance(rho, h), variance(rho2, h2)), (skew_I(rho, h, q), skew_I(rho2, h2, q)),
                 (skew_J(rho, h, q), skew_J(rho2, h2, q)), (u_geo(rho, h, q), u_geo(rho2, h2, q))]
        dev["unitary"] = max([dev["unitary"]] + [rel(x, y) for x, y in pairs])
    secs = time.perf_counter() - start
    ok = max(dev.values()) <= 1e-9
    record(8, "consistency reductions", ok,
           "1000 trials each, max relative deviation " + ", ".join(f"{k} {v:.1e}" for k, v in dev.items()), secs)
    assert ok


def test_9_determinism(tmp_path):
    start = time.perf_counter()

    def run(name, args):
        path = tmp_path / name
        code = run_cli(args + ["--output", str(path)])
        return code, path.read_bytes()

    verify = ["verify", "--ineq", "thm31", "--dims", "2,3", "--trials", "500", "--seed", "9"]
    sweep = ["sweep", "--grid", "5", "--dims", "2,3", "--trials", "20", "--seed", "9", "--include-fixture"]
    outputs = {
        "verify": [run("v1", verify), run("v2", verify), run("v3", verify + ["--workers", "2"])],
        "sweep": [run("s1", sweep), run("s2", sweep), run("s3", sweep + ["--workers", "2"])],
    }
    secs = time.perf_counter() - start
    same = {k: len(set(v)) == 1 for k, v in outputs.items()}
    ok = all(same.values())
    record(9, "byte-identical verify and sweep outputs, serial and 2 workers", ok,
           ", ".join(f"{k} {'identical' if s else 'DIFFERENT'}" for k, s in same.items()), secs)
    assert ok
