"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line."""

import json
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from conftest import record
from injdim import linalg as la
from injdim.cli import parse_input, run
from injdim.ext import ext_hom, yoneda
from injdim.fid import (
    DEFAULT_ZOO,
    check_fid,
    koszul_compacts,
    verify_koszul_perfection,
    verify_theorem_sweep,
    zoo_algebra,
)
from injdim.modules import random_module, syzygy_module, trivial_module
from injdim.operators import annihilation_exponent, compose_actions, eisenbud_operators, operator_action
from injdim.render import to_json
from oracles import NaiveAlgebra, brute_betti

GOLDEN = Path(__file__).parent / "golden"


def check(criterion, ok, detail):
    record(criterion, ok, detail)
    assert ok, detail


@pytest.fixture(scope="module")
def sweep():
    t0 = time.perf_counter()
    rep = verify_theorem_sweep(DEFAULT_ZOO, count=50, seed=7, bound=12, koszul=False)
    return rep, time.perf_counter() - t0


def test_criterion_01_betti_growth():
    A = zoo_algebra("f2_x2y2")
    k = trivial_module(A)
    t0 = time.perf_counter()
    res = k.resolution(10)
    table = ext_hom(k, k, 11).ext_dims(0, 10)
    elapsed = time.perf_counter() - t0
    want = list(range(1, 12))
    ref = brute_betti(NaiveAlgebra(A.p, A.mult.tolist(), A.augmentation.tolist()), k.actions.tolist(), 5)
    ok = res.betti == want and table == want and ref == want[:6] and elapsed < 5
    check(1, ok, f"betti={res.betti} ext={table} brute[0..5]={ref} time={elapsed:.2f}s (<5s)")


def test_criterion_02_periodicity():
    A = zoo_algebra("f2_x2")
    t0 = time.perf_counter()
    k = trivial_module(A)
    H = ext_hom(k, k, 13)
    table = H.ext_dims(0, 12)
    (t,) = eisenbud_operators(H.P)
    chi = operator_action(t, H, 0, 12)
    elapsed = time.perf_counter() - t0
    identity = all(chi.matrix(n).tolist() == [[1]] for n in range(0, 11))
    ok = table == [1] * 13 and identity and elapsed < 1
    check(2, ok, f"ext={table} chi identity in degrees 0..10: {identity} time={elapsed:.2f}s (<1s)")


def test_criterion_03_soundness(sweep):
    rep, elapsed = sweep
    n = rep.counts()["soundness_violations"]
    ok = n == 0 and elapsed < 60 and rep.counts()["targets"] == 50 * len(DEFAULT_ZOO)
    check(3, ok, f"{rep.counts()['targets']} targets, {rep.counts()['certified']} certified, "
                 f"{n} soundness violations, time={elapsed:.1f}s (<60s)")


def test_criterion_04_converse(sweep):
    rep, _ = sweep
    exact_finite = [r for r in rep.records if r.oracle.startswith("Finite") and r.oracle_exact]
    bad = [r for r in exact_finite if any(r.ext_table[1:])]
    ok = not bad and rep.counts()["converse_violations"] == 0
    check(4, ok, f"{len(exact_finite)} exact-Finite targets, {len(bad)} with nonzero Ext^>=1")


def test_criterion_05_window_vs_degree_ml(sweep):
    rep, _ = sweep
    ci = [r for r in rep.records if zoo_algebra(r.algebra).ci is not None]
    disagree = [r for r in ci if r.window != r.ml]
    ok = not disagree and len(ci) == len(rep.records)
    check(5, ok, f"{len(ci)} CI targets, {len(disagree)} window/degree-2m disagreements")


def test_criterion_06_koszul_perfection():
    t0 = time.perf_counter()
    results = []
    for name in DEFAULT_ZOO:
        A = zoo_algebra(name)
        if A.ci is not None:
            results += verify_koszul_perfection(koszul_compacts(A, name, seeds=5))
    elapsed = time.perf_counter() - t0
    failures = [r["target"] for r in results if not r["finite"]]
    ok = not failures and elapsed < 30
    check(6, ok, f"{len(results)} Koszul objects, failures={failures}, time={elapsed:.1f}s (<30s)")


def test_criterion_07_annihilation():
    golden = json.loads((GOLDEN / "annihilation.json").read_text())
    measured = {}
    for name in DEFAULT_ZOO:
        A = zoo_algebra(name)
        k = trivial_module(A)
        for label, X in [("k", k), ("syz1(k)", syzygy_module(k, 1)), ("random0", random_module(A, 2, 2, 0, in_radical=True))]:
            measured[f"{name}:{label}"] = annihilation_exponent(X).to_json()
    within = all(m["exponent"] is not None and m["exponent"] <= m["cap"] for m in measured.values())
    ok = within and measured == golden
    exps = sorted({m["exponent"] for m in measured.values()})
    check(7, ok, f"{len(measured)} instances, exponents {exps} within cap 2r, golden match={measured == golden}")


def _laws_for(A, M, bound=8):
    p = A.p
    H = ext_hom(M, M, bound + 1)
    acts = [operator_action(t, H, 0, bound) for t in eisenbud_operators(H.P)]
    commute = True
    for i in range(len(acts)):
        for j in range(i + 1, len(acts)):
            ab, ba = compose_actions(acts[i], acts[j], p), compose_actions(acts[j], acts[i], p)
            commute &= all(np.array_equal(ab.matrix(n), ba.matrix(n)) for n in ab.degrees)
    independent = True
    P = H.P
    for m in range(P.lo, P.hi - 1):
        if P.rank(m) and P.rank(m + 1):
            for v in range(A.ci.c):
                other = [operator_action(t, H, 0, bound) for t in eisenbud_operators(P, (m, 0, 0, v))]
                independent &= all(
                    np.array_equal(a.matrix(n), b.matrix(n)) for a, b in zip(acts, other) for n in a.degrees
                )
            break
    return H, acts, commute, independent


def _central(H, acts, p, top=2):
    def apply(act, x):
        g = H.cohomology(x.degree + 2)
        return g.element(la.matmul(act.matrix(x.degree), x.coords.reshape(-1, 1), p)[:, 0])

    for act in acts:
        for m in range(top + 1):
            for n in range(top + 1):
                gm, gn = H.cohomology(m), H.cohomology(n)
                for i in range(gm.dim):
                    for j in range(gn.dim):
                        a, b = gm.basis_element(i), gn.basis_element(j)
                        whole = apply(act, yoneda(a, b)).coords
                        if not (np.array_equal(whole, yoneda(a, apply(act, b)).coords)
                                and np.array_equal(whole, yoneda(apply(act, a), b).coords)):
                            return False
    return True


def test_criterion_08_operator_laws():
    commute = independent = central = True
    checked = 0
    for name in DEFAULT_ZOO:
        A = zoo_algebra(name)
        k = trivial_module(A)
        for M in [k, syzygy_module(k, 1), random_module(A, 2, 2, 1, in_radical=True)]:
            H, acts, c, i = _laws_for(A, M)
            commute &= c
            independent &= i
            checked += 1
        Hk, acts_k, _, _ = _laws_for(A, k)
        central &= _central(Hk, acts_k, A.p)
    ok = commute and independent and central
    check(8, ok, f"{checked} modules: commute={commute} lift-independent={independent} central={central}")


def test_criterion_09_hopf_vs_eisenbud():
    G = zoo_algebra("f2_z2xz2")
    shapes = [(1, 1), (2, 1), (1, 2), (2, 2), (3, 2)]
    agree = 0
    certified = 0
    for s in range(20):
        a, b = shapes[s % len(shapes)]
        M = random_module(G, a, b, s, in_radical=True)
        eta = check_fid(M, 8, operators="hopf").criterion
        chi = check_fid(M, 8, operators="eisenbud").criterion
        if eta.status == chi.status and eta.jointly_nilpotent == chi.jointly_nilpotent:
            agree += 1
        certified += chi.certified
    check(9, agree == 20, f"{agree}/20 modules agree ({certified} certified)")


def test_criterion_10_determinism():
    jobs = sorted((GOLDEN / "jobs").glob("*.json"))
    docs = [json.loads(j.read_text()) for j in jobs]
    docs.append({"command": "verify", "zoo": ["f2_x2", "f3_x3"], "count": 10, "seed": 11, "bound": 8})
    same = True
    for doc in docs:
        a = to_json(run(parse_input(dict(doc)))[1])
        b = to_json(run(parse_input(dict(doc)))[1])
        same &= a == b
    job = str(jobs[0])
    outs = [subprocess.run([sys.executable, "-m", "injdim", job], capture_output=True).stdout for _ in range(2)]
    same &= outs[0] == outs[1] and outs[0] == (GOLDEN / f"{jobs[0].stem}.out.json").read_bytes()
    check(10, same, f"{len(docs)} job specs rerun, byte-identical={same}")
