"""Acceptance criteria 1-12, one test each.

Every test records a line "criterion N: PASS|FAIL ..." with the achieved
value and runtime; the lines are printed at the end of the pytest run.
Run standalone with ``python tests/test_acceptance.py``.
"""

import sys
import time
from fractions import Fraction as F

import numpy as np
import pytest

from twistranks import chains, ffstats
from twistranks.grids import (Grid, basis_bound, basis_construct, bye_ramsey_check,
                              bye_ramsey_construct, closure, eta_decompose, eta_sum,
                              example_grid, find_basis, full_ideal, is_closed, nib_extend,
                              nib_membership, random_member, restrict, zs_basis)
from twistranks.grids.ramsey import random_battery
from twistranks.harness import (SweepConfig, class_sweep, jutila_probe,
                                monsky_invariance_battery, run_gates, selmer_sweep)
from twistranks.harness.gates import recurrence_gate

from corpus import random_grid, random_ideal, random_subset

RESULTS = []


def record(n, ok, detail, seconds, budget=None):
    within = budget is None or seconds < budget
    verdict = "PASS" if ok and within else "FAIL"
    limit = f" (budget {budget:g} s)" if budget else ""
    RESULTS.append((n, f"criterion {n:2d}: {verdict}  {detail}  [{seconds:.2f} s{limit}]"))
    assert ok, detail
    assert within, f"took {seconds:.1f} s, budget {budget} s"


@pytest.fixture(scope="module")
def cache(tmp_path_factory):
    return tmp_path_factory.mktemp("acceptance-cache")


@pytest.fixture(scope="module")
def gates(cache):
    """The monsky and redei gates at their acceptance ranges, run once."""
    out = {}
    for name, H in (("monsky", 2000), ("redei", 10 ** 4)):
        t0 = time.perf_counter()
        res = run_gates(cache, [name], H=H)[name]
        out[name] = (res, time.perf_counter() - t0)
    return out


def test_criterion_01_alternating_rationals():
    t0 = time.perf_counter()
    got = {n: [ffstats.p_alt(j, n) for j in range(n + 1) if (n - j) % 2 == 0] for n in (2, 3, 4)}
    want = {2: [F(1, 2), F(1, 2)], 3: [F(7, 8), F(1, 8)], 4: [F(28, 64), F(35, 64), F(1, 64)]}
    exact = all(isinstance(p, F) for ps in got.values() for p in ps)
    record(1, got == want and exact, f"p_alt = {[[str(p) for p in got[n]] for n in got]}",
           time.perf_counter() - t0, 1)


def test_criterion_02_general_rationals():
    t0 = time.perf_counter()
    got = {n: [ffstats.p_mat(0, 2, j, n) for j in range(n + 1)] for n in (1, 2, 3)}
    want = {1: [F(1, 2), F(1, 2)], 2: [F(6, 16), F(9, 16), F(1, 16)],
            3: [F(168, 512), F(294, 512), F(49, 512), F(1, 512)]}
    record(2, got == want, f"p_mat(0,2) = {[[str(p) for p in got[n]] for n in got]}",
           time.perf_counter() - t0, 1)


def test_criterion_03_enumeration_gate():
    t0 = time.perf_counter()
    res = recurrence_gate(max_general=4, max_alt=5)
    record(3, res.passed, f"{res.checked} shapes, {len(res.mismatches)} mismatches",
           time.perf_counter() - t0, 30)


def test_criterion_04_absorption():
    t0 = time.perf_counter()
    res = chains.absorption_distribution(chains.ChainSpec.alternating(40), "limit")
    err = max(abs(res.masses.get(0, 0) - 0.5), abs(res.masses.get(1, 0) - 0.5))
    ok = set(res.masses) == {0, 1} and err < 1e-9 and res.escape < 1e-12
    record(4, ok, f"absorption {res.masses}, max error {err:.2e}, escape {res.escape:.2e}",
           time.perf_counter() - t0, 5)


def test_criterion_05_monsky_gate(gates):
    res, seconds = gates["monsky"]
    record(5, res.passed and res.checked > 0,
           f"{res.checked} odd squarefree d <= 2000, {len(res.mismatches)} exceptions",
           seconds, 600)


def test_criterion_06_invariance_battery(cache):
    t0 = time.perf_counter()
    cfg = SweepConfig("monsky-invariance", 1, seed=0, cache_dir=str(cache), pairs=200,
                      max_primes=3, prime_bound=10 ** 5)
    res = monsky_invariance_battery(cfg)
    record(6, res.passed and res.pairs == 200,
           f"{res.pairs} matched tuples, {res.mismatches} rank mismatches",
           time.perf_counter() - t0, 300)


def test_criterion_07_redei_gate(gates):
    res, seconds = gates["redei"]
    record(7, res.passed and res.checked > 0,
           f"{res.checked} squarefree d <= 10^4, {len(res.mismatches)} mismatches", seconds, 600)


def test_criterion_08_selmer_sweep(cache, gates):
    t0 = time.perf_counter()
    rep = selmer_sweep(SweepConfig("selmer", 10 ** 7, cache_dir=str(cache)))
    record(8, rep.passed,
           f"n = {rep.count}, tv = {rep.tv_distance:.5f} vs threshold {rep.threshold}",
           time.perf_counter() - t0)


def test_criterion_09_class_sweep(cache, gates):
    t0 = time.perf_counter()
    rep = class_sweep(SweepConfig("class", 10 ** 6, cache_dir=str(cache)))
    cond = rep.extra["conditional_r8_given_r4_1"]
    record(9, rep.passed,
           f"n = {rep.count}, r4 tv = {rep.tv_distance:.5f} vs {rep.threshold}; "
           f"r8 | r4=1 tv = {cond['tv_distance']:.5f} vs {cond['threshold']} "
           f"({'pass' if cond['pass'] else 'fail'})",
           time.perf_counter() - t0)


def test_criterion_10_grid_suite():
    t0 = time.perf_counter()
    failures = []
    g = example_grid("2x2")
    subsets = [tuple(p for i, p in enumerate(g.points) if mask >> i & 1) for mask in range(16)]
    if any(is_closed(g, Y) != (len(Y) != 3) for Y in subsets):
        failures.append("(a) 2x2 example")
    rng = np.random.default_rng(2024)
    bases = 0
    for _ in range(200):
        g = random_grid(rng)
        x0 = g.points[int(rng.integers(len(g)))]
        Y = basis_construct(g, x0)
        if closure(g, Y) != g.points or zs_basis(g, g.S, Y):
            failures.append(f"(b) basis_construct on {g.sizes}")
        for B in (Y, find_basis(g, closure(g, random_subset(g, rng)))):
            bases += 1
            if len(B) > basis_bound(g):
                failures.append(f"(b) basis bound on {g.sizes}")
    for _ in range(200):
        g = random_grid(rng)
        I, b = random_ideal(g, rng)
        n = random_member(g, I, b, int(rng.integers(1, 3)), rng)
        if eta_sum(g, eta_decompose(g, I, b, n), n.rank) != n:
            failures.append(f"(c) eta round trip on {g.sizes}")
    for _ in range(200):
        g = random_grid(rng)
        I, b = random_ideal(g, rng)
        n = random_member(g, I, b, 1, rng)
        Y = random_subset(g, rng)
        Yp = g.check_subset(set(Y) | set(random_subset(g, rng)))
        ext = nib_extend(g, I, b, restrict(n, Y), Yp)
        if not nib_membership(g, I, b, ext) or restrict(ext, Y) != restrict(n, Y):
            failures.append(f"(d) extension on {g.sizes}")
        FI, top = full_ideal(g), len(g.S)
        m = random_member(g, FI, top, 1, rng)
        C = closure(g, Y)
        if nib_extend(g, FI, top, restrict(m, Y), C) != restrict(m, C):
            failures.append(f"(d) closure bijection on {g.sizes}")
    record(10, not failures,
           f"16 subsets, 200 grids ({bases} bases), 200 eta round trips, 200 extensions; "
           f"failures: {failures[:3] or 'none'}", time.perf_counter() - t0, 300)


def test_criterion_11_bye_ramsey():
    t0 = time.perf_counter()
    g = Grid.of_sizes([4, 4, 4], 2)
    M = 4
    res = bye_ramsey_construct(g, M, seed=0, batteries=100, cap=64)
    rng = np.random.default_rng(11)
    slacks = []
    for _ in range(100):
        Ys, f, c = random_battery(g, res.g, M, rng)
        chk = bye_ramsey_check(g, res.g, Ys, f, c, M)
        slacks.append(chk.slack if chk.passed else -1)
    ok = min(slacks) >= 0
    record(11, ok, f"g found on attempt {res.attempts}/64; 100 fresh batteries, "
                   f"min slack {min(slacks):.2f}", time.perf_counter() - t0, 300)


def test_criterion_12_jutila_decay():
    t0 = time.perf_counter()
    rows = [jutila_probe(n, n, "constant") for n in (10 ** 2, 10 ** 3, 10 ** 4)]
    norm = [r.normalized for r in rows]
    ok = all(a > b for a, b in zip(norm, norm[1:]))
    record(12, ok, "lhs/(N1 N2) = " + ", ".join(f"{v:.5f}" for v in norm),
           time.perf_counter() - t0, 600)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
