from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dtilde.oracle import reflect_rep, rep_from_root, simple_rep
from dtilde.quiver import (
    DimVec,
    NotARoot,
    OutOfCategory,
    QuiverDn,
    RootKind,
    all_orientations,
    bfs_reduction,
    classify_root,
    coxeter_reduction,
    defect,
    delta,
    euler_form,
    find_quasi_simple_orbits,
    injective_dim,
    is_thin_root,
    orientation_path,
    positive_real_roots,
    projective_dim,
    reflect_dim,
    simple,
    sink_order,
    source_order,
    tau_dim,
    tits_form,
    tube_quasi_simples,
    tube_rank,
)

D4 = QuiverDn.subspace(4)
D5 = QuiverDn.subspace(5)


def dv(**kw):
    return DimVec({("0" if k == "q0" else "1" if k == "q1" else k): v for k, v in kw.items()})


def test_dimvec_arithmetic_and_json():
    a = dv(a=1, q0=2)
    b = dv(q0=1, d=3)
    assert a + b == dv(a=1, q0=3, d=3)
    assert (a - b)["d"] == -3 and not (a - b).is_nonnegative()
    assert a * 2 == dv(a=2, q0=4)
    assert b <= dv(q0=1, d=3, c=1) and not a <= b
    assert a.height() == 3 and DimVec() == DimVec({"a": 0})
    assert DimVec.from_json(a.to_json(D4.vertices)) == a


def test_subspace_orientation_edges():
    assert D4.vertices == ("a", "b", "0", "c", "d")
    assert set(D4.arrows) == {("a", "a", "0"), ("b", "b", "0"), ("c", "c", "0"), ("d", "d", "0")}
    assert D5.arrows[-1] == ("v0", "1", "0")
    assert D4.sinks() == ["0"] and set(D4.sources()) == {"a", "b", "c", "d"}


def test_orientation_string_round_trip_and_errors():
    Q = QuiverDn.from_string(5, "a:rev,v0:fwd")
    assert QuiverDn.from_string(5, Q.orientation_string()) == Q
    for bad in ["a", "z:fwd", "a:sideways"]:
        with pytest.raises(ValueError):
            QuiverDn.from_string(5, bad)
    assert len(all_orientations(4)) == 16 and len(all_orientations(5)) == 32


def test_euler_form_and_defect():
    assert euler_form(D4, simple("a"), simple("0")) == -1
    assert euler_form(D4, simple("0"), simple("a")) == 0
    assert tits_form(D4, delta(D4)) == 0
    assert defect(D4, simple("0")) == -2  # simple projective at the centre
    assert defect(D4, simple("a")) == 1  # simple injective
    assert defect(D5, delta(D5)) == 0


def test_reflection_of_quiver_and_dims():
    R = D4.reflect("0")
    assert R.is_source("0") and R.reflect("0") == D4
    assert reflect_dim(D4, "0", dv(a=1, q0=1)) == dv(a=1)
    with pytest.raises(ValueError):
        D4.reflect("a").reflect("a").reflect("b").reflect("0")


def test_projectives_and_injectives():
    assert projective_dim(D4, "a") == dv(a=1, q0=1)
    assert projective_dim(D4, "0") == simple("0")
    assert injective_dim(D4, "0") == dv(a=1, b=1, q0=1, c=1, d=1)
    assert projective_dim(D5, "c") == dv(c=1, q1=1, q0=1, a=1, b=1) - dv(a=1, b=1)


def test_tau_inverse_examples():
    # dim tau^-1 P_a, checked against the reflection functor on matrices below
    assert tau_dim(D4, dv(a=1, q0=1), "inverse") == dv(b=1, q0=2, c=1, d=1)
    assert tau_dim(D4, simple("0"), "inverse") == dv(a=1, b=1, q0=3, c=1, d=1)
    with pytest.raises(OutOfCategory):
        tau_dim(D4, simple("0"), "forward")
    with pytest.raises(ValueError):
        tau_dim(D4, simple("0"), "sideways")


def test_tau_inverse_agrees_with_functor_on_matrices():
    for q in D4.vertices:
        P = rep_from_root(D4, projective_dim(D4, q))
        cur, M = D4, P
        for v in source_order(D4):
            M = reflect_rep(cur, v, M)
            cur = cur.reflect(v)
        assert cur == D4
        try:
            expected = tau_dim(D4, projective_dim(D4, q), "inverse")
        except OutOfCategory:
            continue
        assert M.dims == expected


def test_sink_and_source_orders_are_admissible():
    for Q in all_orientations(5):
        cur = Q
        for q in sink_order(Q):
            assert cur.is_sink(q)
            cur = cur.reflect(q)
        assert cur == Q
        cur = Q
        for q in source_order(Q):
            assert cur.is_source(q)
            cur = cur.reflect(q)
        assert cur == Q


def _brute_roots(Q, h):

    out = []
    for vals in product(*(range(h + 1) for _ in Q.vertices)):
        a = DimVec(dict(zip(Q.vertices, vals)))
        if a and a.height() <= h and tits_form(Q, a) == 1:
            out.append(a)
    return sorted(out, key=str)


@pytest.mark.parametrize("Q,h", [(D4, 9), (D5, 7)])
def test_positive_real_roots_match_brute_force(Q, h):
    got = sorted((a for a in positive_real_roots(Q, h) if a.height() <= h), key=str)
    assert got == _brute_roots(Q, h)


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_tube_orbits_sum_to_delta(n):
    for Q in all_orientations(n)[:: max(1, 2 ** (n - 3) // 6)]:
        tubes = tube_quasi_simples(Q)
        d = delta(Q)
        for name, orbit in tubes.items():
            assert len(orbit) == tube_rank(n, name)
            acc = DimVec()
            for i, E in enumerate(orbit):
                acc = acc + E
                assert tau_dim(Q, E, "inverse") == orbit[(i + 1) % len(orbit)]
            assert acc == d
        assert {frozenset(o) for o in find_quasi_simple_orbits(Q)} == {frozenset(o) for o in tubes.values()}


def test_tube_ranks():
    assert [tube_rank(4, t) for t in ("2a", "2b", "big")] == [2, 2, 2]
    assert [tube_rank(6, t) for t in ("2a", "2b", "big")] == [2, 2, 4]


def test_subspace_big_tube_starts_at_a_b_q0():
    assert tube_quasi_simples(D5)["big"][0] == dv(a=1, b=1, q0=1)


@pytest.mark.parametrize("n", [5, 6])
def test_rank2_quasi_simples_reduce_to_thin_roots(n):
    Q = QuiverDn.subspace(n)
    for name in ("2a", "2b"):
        for E in tube_quasi_simples(Q)[name]:
            steps, last, thin = bfs_reduction(Q, E)
            assert is_thin_root(last, thin)
            beta, cur = thin, last
            for st_ in reversed(steps):
                beta = reflect_dim(cur, st_.vertex, beta)
                cur = cur.reflect(st_.vertex)
                assert beta == st_.dim
            assert beta == E and cur == Q


def test_coxeter_reduction_reaches_simple():
    alpha = dv(a=2, b=1, q0=4, c=2, d=2)
    steps, last, q = coxeter_reduction(D4, alpha, "sink")
    assert steps[0].dim == alpha and steps[0].quiver == D4
    cur, beta = last, simple(q)
    for st_ in reversed(steps):
        beta = reflect_dim(cur, st_.vertex, beta)
        cur = cur.reflect(st_.vertex)
    assert beta == alpha


def test_orientation_path_is_admissible():
    for dst in all_orientations(4):
        cur = D4
        for q in orientation_path(D4, dst):
            assert cur.is_sink(q) or cur.is_source(q)
            cur = cur.reflect(q)
        assert cur == dst


def test_classify_root_kinds():
    assert classify_root(D4, delta(D4)).kind is RootKind.ImaginaryMultipleOfDelta
    assert classify_root(D4, delta(D4) * 3).kind is RootKind.ImaginaryRegularNonSchur
    info = classify_root(D4, dv(a=1, b=1, q0=3, c=1, d=1))
    assert info.kind is RootKind.RealPreprojective and info.defect == -2 and info.splitting
    M, N = info.splitting
    assert M + N == dv(a=1, b=1, q0=3, c=1, d=1)
    assert classify_root(D4, simple("a")).kind is RootKind.RealPreinjective
    reg = classify_root(D4, dv(a=1, c=1, q0=1) + delta(D4))
    assert reg.kind is RootKind.RealRegular and reg.r == 1 and reg.l == 1 and reg.rank == 2
    for bad in [dv(a=2), dv(a=-1), DimVec(), dv(z=1)]:
        with pytest.raises(NotARoot):
            classify_root(D4, bad)


@given(st.sampled_from(all_orientations(4)), st.data())
@settings(max_examples=40, deadline=None)
def test_classification_reconstructs_and_tau_round_trips(Q, data):
    roots = [a for a in positive_real_roots(Q, 12) if a.height() <= 12]
    a = data.draw(st.sampled_from(roots))
    info = classify_root(Q, a)
    if info.kind is RootKind.RealRegular:
        assert info.reconstruct(Q) == a
    assert info.defect == defect(Q, a)
    try:
        b = tau_dim(Q, a, "inverse")
    except OutOfCategory:
        return
    assert tau_dim(Q, b, "forward") == a
    assert defect(Q, b) == defect(Q, a) and tits_form(Q, b) == 1


def test_simple_rep_reflects_to_zero_at_sink():
    Z = reflect_rep(D4, "0", simple_rep(D4, "0"))
    assert Z.dims == DimVec()
