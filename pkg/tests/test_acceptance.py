"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines.
"""
import random
import time

from dtilde.cli import Report, bgpeuler_checks, binolem_part1, binolem_part2, cc_survivors
from dtilde.coeffq import build_snake, gen_function, snake_recursion
from dtilde.formulas import (
    cc_variable,
    dual_fpoly,
    euler_strata,
    euler_table,
    f_defect1,
    f_defect2,
    f_delta,
    f_homog,
    f_root,
    grassrefl_sum,
    homog_closed_form,
    reflection_chain,
    structure_problems,
    x_dim,
)
from dtilde.laurent import x
from dtilde.oracle import direct_sum, fpoly_oracle, homogeneous_rep, rep_from_root
from dtilde.quiver import (
    DimVec,
    QuiverDn,
    RootKind,
    all_orientations,
    classify_root,
    delta,
    positive_real_roots,
    simple,
    tau_dim,
)

D4 = QuiverDn.subspace(4)


def roots(Q, h):
    return [a for a in positive_real_roots(Q, h) if a.height() <= h]


def verdict(k, ok, t0, limit, detail):
    secs = time.perf_counter() - t0
    within = secs < limit
    status = "PASS" if ok and within else "FAIL"
    print(f"\n{status} criterion {k}: {detail}; {secs:.1f} s (limit {limit} s)")
    assert ok, detail
    assert within, f"criterion {k} took {secs:.1f} s, over {limit} s"


def test_criterion_1_snake_pipelines():
    t0 = time.perf_counter()
    bad = []
    for n in (4, 5, 6):
        Q = QuiverDn.subspace(n)
        for s in (0, 1, 2):
            G = build_snake(s, n)
            F = f_defect1(Q, classify_root(Q, G.type()))
            if not (F == snake_recursion(s, n) == gen_function(G)):
                bad.append((n, s))
    verdict(1, not bad, t0, 60, f"9 snake cases exact, mismatches {bad}")


def test_criterion_2_formula_vs_reflection_chain():
    t0 = time.perf_counter()
    total, bad = 0, []
    for Q in all_orientations(4):
        for a in roots(Q, 12):
            total += 1
            if f_root(Q, a) != reflection_chain(Q, a):
                bad.append((Q.orientation_string(), str(a)))
    verdict(2, not bad and total, t0, 120, f"{total} roots over 16 orientations, mismatches {len(bad)}")


def test_criterion_3_point_count_oracle():
    t0 = time.perf_counter()
    chosen = [a for a in roots(D4, 10) if a.height() <= 10]
    bad = [str(a) for a in chosen if fpoly_oracle(rep_from_root(D4, a)) != f_root(D4, a)]
    for lam in (2, 3):
        if fpoly_oracle(homogeneous_rep(D4, 1, lam)) != f_delta(D4):
            bad.append(f"homogeneous lambda={lam}")
    ok = len(chosen) >= 20 and not bad
    verdict(3, ok, t0, 600, f"{len(chosen)} real roots plus lambda 2, 3; mismatches {bad}")


def test_criterion_4_homogeneous_identities():
    t0 = time.perf_counter()
    bad = []
    for n in (4, 5):
        Q = QuiverDn.subspace(n)
        for r in range(1, 5):
            if f_homog(Q, r + 1) * f_homog(Q, r - 1) != f_homog(Q, r) ** 2 - x_dim(delta(Q) * r):
                bad.append((n, r, "recursion"))
            if homog_closed_form(Q, r) != f_homog(Q, r):
                bad.append((n, r, "closed form"))
    verdict(4, not bad, t0, 30, f"r = 1..4 on D~4 and D~5, mismatches {bad}")


def test_criterion_5_defect_two():
    t0 = time.perf_counter()
    B = tau_dim(D4, simple("0"), "inverse")
    info = classify_root(D4, B)
    assert info.kind is RootKind.RealPreprojective and info.defect == -2
    F = f_defect2(D4, info)
    ok = F == fpoly_oracle(rep_from_root(D4, B))
    verdict(5, ok, t0, 60, f"B = {B}, formula equals oracle: {ok}")


def test_criterion_6_binomial_identities():
    t0 = time.perf_counter()
    cases1 = [(m, t, n) for n in range(9) for t in range(n + 1) for m in range(t + 1)]
    cases2 = [(m, t, n) for n in range(9) for t in range(n + 1, 9) for m in range(n + 1)]
    bad = [c for c in cases1 if not binolem_part1(*c)] + [c for c in cases2 if not binolem_part2(*c)]
    verdict(6, not bad, t0, 1, f"{len(cases1)} + {len(cases2)} cases, failures {bad[:5]}")


def test_criterion_7_euler_propagation():
    t0 = time.perf_counter()
    rep = Report("bgpeuler")
    used_roots = 0
    for a in roots(D4, 8):
        if a != simple("0") and bgpeuler_checks(D4, a, "0", rep, mmax=2):
            used_roots += 1
    rng = random.Random(2024)
    inverse_bad = 0
    for _ in range(500):
        aq = rng.randint(0, 8)
        eq = rng.randint(0, aq)
        m = rng.randint(0, aq - eq)
        tab = {i: rng.randint(-30, 30) for i in range(m + 1)}
        strata = {k: euler_strata(tab, aq, eq, k) for k in range(m + 1)}
        inverse_bad += grassrefl_sum(strata, aq, eq, m) != tab[m]
    ok = used_roots >= 5 and rep.passed and not inverse_bad
    verdict(7, ok, t0, 60, f"{used_roots} roots, {rep.checks} reflection checks, "
            f"{len(rep.failures)} failures; 500 random inverse pairs, {inverse_bad} failures")


def test_criterion_8_structural_sanity():
    t0 = time.perf_counter()
    bad = []
    for Q in all_orientations(4)[::5] + [QuiverDn.subspace(5), QuiverDn.subspace(6)]:
        Qop = Q.opposite()
        for a in roots(Q, 10):
            F = f_root(Q, a)
            if structure_problems(F, a):
                bad.append(("structure", str(a)))
            D = dual_fpoly(F, a)
            if dual_fpoly(D, a) != F or D != f_root(Qop, a):
                bad.append(("duality", str(a)))
    blocks = [DimVec({"a": 1, "0": 1}), DimVec({"c": 1}), DimVec({"b": 1, "0": 1, "d": 1})]
    for A in blocks:
        for B in blocks:
            G = fpoly_oracle(direct_sum(rep_from_root(D4, A), rep_from_root(D4, B)))
            if G != f_root(D4, A) * f_root(D4, B):
                bad.append(("direct sum", str(A), str(B)))
            if structure_problems(G, A + B):
                bad.append(("structure of sum", str(A), str(B)))
    verdict(8, not bad, t0, 300, f"structure, duality and block sums; problems {bad[:5]}")


def test_criterion_9_cc_map():
    t0 = time.perf_counter()
    Xa = cc_variable(D4, simple("a"), euler_table(f_root(D4, simple("a"))))
    X0 = cc_variable(D4, simple("0"), euler_table(f_root(D4, simple("0"))))
    hand = Xa == x("a", -1) * (1 + x("0")) and X0 == x("0", -1) * (1 + x("a") * x("b") * x("c") * x("d"))
    alive = cc_survivors(D4, [simple(q) for q in D4.vertices] + roots(D4, 8))
    ok = hand and alive == {("outgoing", "outgoing")}
    verdict(9, ok, t0, 10, f"hand values match: {hand}; surviving conventions {sorted(alive)}")
