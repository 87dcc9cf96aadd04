"""Command-line front end: ``fpoly``, ``cc`` and ``verify``.

Exit codes: 0 success, 1 a verification suite failed, 2 bad input,
3 an internal identity failed while computing.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
from fractions import Fraction
from math import comb, factorial

from .coeffq import build_snake, gen_function, snake_recursion
from .formulas import (
    CC_CONVENTIONS,
    NonIntegralResult,
    NoSplitting,
    cc_factorized,
    cc_variable,
    dual_fpoly,
    euler_reflect,
    euler_strata,
    euler_table,
    f_delta,
    f_defect1,
    f_homog,
    f_root,
    grassrefl_sum,
    homog_closed_form,
    reflection_chain,
    structure_problems,
    tube_info,
    f_tube,
    type_two_identity,
    x_dim,
)
from .laurent import NotDivisible, render_fraction
from .oracle import (
    BadReduction,
    NonIntegralInterpolation,
    count_table,
    direct_sum,
    ext_dim,
    ext_simple_dim,
    fpoly_oracle,
    good_primes,
    hom_dim,
    hom_to_simple_dim,
    homogeneous_rep,
    is_good_prime,
    quotient_by_vector,
    rep_from_root,
    simple_rep,
    socle_vector,
    subrepresentations,
    tree_module,
)
from .oracle import euler_table as oracle_table
from .quiver import (
    DimVec,
    NotARoot,
    QuiverDn,
    classify_root,
    delta,
    positive_real_roots,
    simple,
    tits_form,
    vectors_below,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3

SUITES = ("cross-pipeline", "snake", "formhom", "binolem", "bgpeuler", "type-two", "duality", "oracle", "cc")


class InputError(ValueError):
    pass


# ------------------------------------------------------------ parsing


def parse_root(items: list[str], Q: QuiverDn) -> DimVec:
    entries: dict[str, int] = {}
    for item in items:
        for tok in item.split(","):
            tok = tok.strip()
            if not tok:
                continue
            if "=" not in tok:
                raise InputError(f"malformed root entry {tok!r}; expected vertex=count")
            k, v = (s.strip() for s in tok.split("=", 1))
            if k not in Q.vertices:
                raise InputError(f"unknown vertex {k!r} for n={Q.n}")
            if k in entries:
                raise InputError(f"vertex {k!r} given twice")
            try:
                entries[k] = int(v)
            except ValueError:
                raise InputError(f"non-integer count {v!r} for vertex {k}") from None
            if entries[k] < 0:
                raise InputError(f"negative count for vertex {k}")
    return DimVec(entries)


def is_positive_root(Q, alpha: DimVec) -> bool:
    """Positive real root, or a positive multiple of delta."""
    if not alpha.is_nonnegative() or not alpha:
        return False
    d = delta(Q)
    return tits_form(Q, alpha) == 1 or alpha == d * (alpha.height() // d.height())


def _quiver(args) -> QuiverDn:
    if args.n < 4:
        raise InputError("--n must be at least 4")
    try:
        return QuiverDn.from_string(args.n, args.orient)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _target(args, Q: QuiverDn):
    """(dim vector, F thunk) for the object selected on the command line."""
    chosen = [bool(args.root), args.tube is not None, args.snake is not None]
    if sum(chosen) != 1:
        raise InputError("give exactly one of --root, --tube, --snake")
    if args.root:
        alpha = parse_root(args.root, Q)
        if not alpha:
            raise InputError("root must be nonzero")
        if not is_positive_root(Q, alpha):
            raise NotARoot(f"{alpha} is not a positive root of D~{Q.n}")
        return alpha, lambda: f_root(Q, alpha)
    if args.tube is not None:
        if args.l is None or args.r is None:
            raise InputError("--tube needs --l and --r")
        if args.l == 0 and args.r < 1:
            raise InputError("--l 0 needs --r >= 1")
        try:
            info = tube_info(Q, args.tube, args.l, args.r, args.socle)
        except (KeyError, ValueError) as exc:
            raise InputError(f"bad tube coordinates: {exc}") from None
        alpha = info.base + delta(Q) * args.r
        return alpha, lambda: f_tube(Q, info)
    if args.snake < 0:
        raise InputError("--snake must be nonnegative")
    if Q != QuiverDn.subspace(Q.n):
        raise InputError("--snake needs the subspace orientation")
    alpha = build_snake(args.snake, Q.n).type()
    return alpha, lambda: f_defect1(Q, classify_root(Q, alpha))


def _root_json(alpha: DimVec, Q) -> dict:
    return {q: alpha[q] for q in Q.vertices}


# ----------------------------------------------------------- commands


def cmd_fpoly(args, out) -> int:
    Q = _quiver(args)
    alpha, thunk = _target(args, Q)
    F = thunk()
    probs = structure_problems(F, alpha)
    if probs:
        raise ArithmeticError(f"structure check failed: {'; '.join(probs)}")
    if args.format == "json":
        rec = {
            "command": "fpoly",
            "n": Q.n,
            "orientation": Q.orientation_string(),
            "dim": _root_json(alpha, Q),
            "fpoly": F.to_json_obj(),
        }
        print(json.dumps(rec, sort_keys=True), file=out)
    else:
        print(F.to_text(), file=out)
    return EXIT_OK


def cmd_cc(args, out) -> int:
    Q = _quiver(args)
    alpha, thunk = _target(args, Q)
    if tits_form(Q, alpha) != 1 and not args.allow_imaginary:
        raise InputError("imaginary root: cluster variables need real roots (pass --allow-imaginary)")
    F = thunk()
    X = cc_variable(Q, alpha, euler_table(F))
    if args.format == "json":
        rec = {
            "command": "cc",
            "n": Q.n,
            "orientation": Q.orientation_string(),
            "dim": _root_json(alpha, Q),
            "cc": X.to_json_obj(),
            "text": render_fraction(X),
        }
        print(json.dumps(rec, sort_keys=True), file=out)
    else:
        print(render_fraction(X), file=out)
    return EXIT_OK


# ------------------------------------------------------------- suites


class Report:
    def __init__(self, name: str):
        self.name = name
        self.checks = 0
        self.failures: list[dict] = []
        self.items: list[dict] = []

    def check(self, ok: bool, **detail) -> bool:
        self.checks += 1
        if not ok:
            self.failures.append(detail)
        return ok

    @property
    def passed(self) -> bool:
        return not self.failures and self.checks > 0


def _roots(Q, height):
    return [a for a in positive_real_roots(Q, height) if a.height() <= height]


def _structure(rep: Report, F, alpha, where: str) -> None:
    probs = structure_problems(F, alpha)
    rep.check(not probs, where=where, dim=str(alpha), problems=probs)


def suite_cross_pipeline(Q, opts, rep: Report) -> None:
    for a in _roots(Q, opts.height):
        F = f_root(Q, a)
        rep.check(F == reflection_chain(Q, a), dim=str(a), reason="f_root != reflection_chain")
        _structure(rep, F, a, "f_root")


def suite_snake(Q, opts, rep: Report) -> None:
    S = QuiverDn.subspace(Q.n)
    for s in range(opts.smax + 1):
        G = build_snake(s, Q.n)
        alpha = G.type()
        F = f_defect1(S, classify_root(S, alpha))
        rep.check(F == snake_recursion(s, Q.n), s=s, n=Q.n, reason="f_defect1 != snake_recursion")
        rep.check(F == gen_function(G), s=s, n=Q.n, reason="f_defect1 != gen_function")


def suite_formhom(Q, opts, rep: Report) -> None:
    for r in range(1, opts.rmax + 1):
        lhs = f_homog(Q, r + 1) * f_homog(Q, r - 1)
        rhs = f_homog(Q, r) ** 2 - x_dim(delta(Q) * r)
        ok = lhs == rhs and homog_closed_form(Q, r) == f_homog(Q, r)
        rep.check(ok, r=r, reason="recursion or closed form mismatch")


def binolem_part1(m: int, t: int, n: int) -> bool:
    lhs = sum((-1) ** r * comb(m, r) * comb(n - m + r, n - t) for r in range(m + 1))
    return lhs == (-1) ** m * comb(n - m, t)


def binolem_part2(m: int, t: int, n: int) -> bool:
    lhs = sum(
        (-1) ** r * comb(m, r) * Fraction(factorial(n - m + r), factorial(t - m + r)) for r in range(m + 1)
    )
    rhs = Fraction(factorial(n - m) * factorial(t - n + m - 1), factorial(t) * factorial(t - n - 1))
    return lhs == rhs


def suite_binolem(Q, opts, rep: Report) -> None:
    top = 8
    for n in range(top + 1):
        for t in range(n + 1):
            for m in range(t + 1):
                rep.check(binolem_part1(m, t, n), part=1, m=m, t=t, n=n)
        for t in range(n + 1, top + 1):
            for m in range(n + 1):
                rep.check(binolem_part2(m, t, n), part=2, m=m, t=t, n=n)


def bgpeuler_checks(Q, alpha, q, rep: Report, mmax: int = 2) -> int:
    """Compare the reflected Euler table and the onto-stratum table with their binomial predictions."""
    from .oracle import reflect_rep

    sq = simple(q)
    M = rep_from_root(Q, alpha)
    E, S = oracle_table(M), oracle_table(M, q)
    ER = oracle_table(reflect_rep(Q, q, M))
    p = good_primes(M, 1, 3)[0]
    C, CS = count_table(M, p), count_table(M, p, q)
    used = 0
    for e in vectors_below(alpha, Q.vertices):
        if not C.get(e) or C.get(e) != CS.get(e):
            continue  # the onto-stratum hypothesis fails at e
        used += 1
        n = sum(Q.a(u, q) * e[u] for u in Q.vertices) - e[q]
        sig = e + sq * (n - e[q])
        tab = {j: E.get(e + sq * j, 0) for j in range(mmax + 1)}
        for m in range(mmax + 1):
            target = sig - sq * m
            lhs = ER.get(target, 0) if target.is_nonnegative() else 0
            rep.check(lhs == euler_reflect(tab, n, alpha[q] - e[q], m), dim=str(alpha), e=str(e), m=m,
                      reason="reflected Euler characteristic")
            rep.check(S.get(e + sq * m, 0) == euler_strata(tab, alpha[q], e[q], m), dim=str(alpha),
                      e=str(e), m=m, reason="onto-stratum Euler characteristic")
    return used


def suite_bgpeuler(Q, opts, rep: Report) -> None:
    sinks = [q for q in Q.vertices if Q.is_sink(q) and q in Q.inner] or list(Q.sinks())
    q = sinks[0]
    for a in _roots(Q, min(opts.height, 8)):
        if a != simple(q):
            bgpeuler_checks(Q, a, q, rep)
    rng = random.Random(0)
    for _ in range(200):
        aq = rng.randint(0, 6)
        eq = rng.randint(0, aq)
        m = rng.randint(0, aq - eq)
        tab = {i: rng.randint(-20, 20) for i in range(m + 1)}
        strata = {k: euler_strata(tab, aq, eq, k) for k in range(m + 1)}
        rep.check(grassrefl_sum(strata, aq, eq, m) == tab[m], alpha_q=aq, e_q=eq, m=m, reason="inverse pair")


def type_two_checks(B0: DimVec, Q, q: str, rep: Report) -> bool:
    """Point-count and Euler identities for 0 -> S_q -> B -> N -> 0; False if the hypotheses fail."""
    B = rep_from_root(Q, B0)
    S = simple_rep(Q, q)
    if not B0[q] or hom_dim(B, S) != 1 or ext_dim(B, S):
        return False
    N = quotient_by_vector(B, q, socle_vector(B, q))
    p = next(p for p in good_primes(B, 4) if is_good_prime(N, p))
    cB, cN = count_table(B, p), count_table(N, p)
    EB, EN = oracle_table(B), oracle_table(N)
    sq = simple(q)
    for e in vectors_below(B0, Q.vertices):
        shift = cN.get(e - sq, 0) if e[q] else 0
        fibres, clean = 0, True
        for U in subrepresentations(N, e, p):
            if ext_simple_dim(N, U, q, p):
                clean = False
            else:
                fibres += p ** hom_to_simple_dim(N, U, q, p)
        rep.check(cB.get(e, 0) == shift + fibres, dim=str(B0), q=q, e=str(e), p=p, reason="point count")
        if clean:
            chi_shift = EN.get(e - sq, 0) if e[q] else 0
            rep.check(type_two_identity(EB.get(e, 0), chi_shift, EN.get(e, 0)), dim=str(B0), q=q,
                      e=str(e), reason="Euler identity")
    return True


def suite_type_two(Q, opts, rep: Report) -> None:
    for a in _roots(Q, min(opts.height, 7)):
        for q in Q.vertices:
            type_two_checks(a, Q, q, rep)


def suite_duality(Q, opts, rep: Report) -> None:
    Qop = Q.opposite()
    for a in _roots(Q, opts.height):
        F = f_root(Q, a)
        D = dual_fpoly(F, a)
        rep.check(D == f_root(Qop, a), dim=str(a), reason="dual != F on opposite quiver")
        rep.check(dual_fpoly(D, a) == F, dim=str(a), reason="duality is not an involution")
        _structure(rep, D, a, "dual")


def suite_oracle(Q, opts, rep: Report) -> None:
    reps = {}
    for a in _roots(Q, min(opts.height, 10)):
        M = rep_from_root(Q, a)
        reps[a] = M
        F = fpoly_oracle(M, held_out=opts.primes)
        ok = F == f_root(Q, a)
        rep.items.append({"dim": _root_json(a, Q), "equal": ok})
        rep.check(ok, dim=str(a), reason="oracle != f_root")
        _structure(rep, F, a, "oracle")
    if Q == QuiverDn.subspace(4):
        for lam in (2, 3):
            ok = fpoly_oracle(homogeneous_rep(Q, 1, lam), held_out=opts.primes) == f_delta(Q)
            rep.items.append({"homogeneous": lam, "equal": ok})
            rep.check(ok, lam=lam, reason="homogeneous oracle != f_delta")
        G = build_snake(0, 4)
        rep.check(fpoly_oracle(tree_module(G, Q)) == gen_function(G), reason="tree module != gen_function")
    small = sorted((a for a in reps if a.height() <= 3), key=lambda a: (a.height(), str(a)))
    for a, b in zip(small, small[1:]):
        S = direct_sum(reps[a], reps[b])
        rep.check(fpoly_oracle(S) == f_root(Q, a) * f_root(Q, b), dims=[str(a), str(b)],
                  reason="direct sum is not multiplicative")


def cc_survivors(Q, roots) -> set:
    """Convention pairs (m', x') under which the factorization matches the direct sum on all roots."""
    alive = {(mc, xc) for mc in CC_CONVENTIONS for xc in CC_CONVENTIONS}
    for a in roots:
        F = f_root(Q, a)
        X = cc_variable(Q, a, euler_table(F))
        for pair in list(alive):
            try:
                ok = cc_factorized(Q, a, F, *pair) == X
            except NotDivisible:
                ok = False
            if not ok:
                alive.discard(pair)
    return alive


def suite_cc(Q, opts, rep: Report) -> None:
    roots = _roots(Q, min(opts.height, 8))
    alive = cc_survivors(Q, roots)
    rep.items.append({"conventions": sorted("/".join(p) for p in alive)})
    rep.check(len(alive) == 1, surviving=sorted("/".join(p) for p in alive), reason="expected one convention")


SUITE_FUNCS = {
    "cross-pipeline": suite_cross_pipeline,
    "snake": suite_snake,
    "formhom": suite_formhom,
    "binolem": suite_binolem,
    "bgpeuler": suite_bgpeuler,
    "type-two": suite_type_two,
    "duality": suite_duality,
    "oracle": suite_oracle,
    "cc": suite_cc,
}


def run_suite(name: str, Q, opts) -> Report:
    rep = Report(name)
    try:
        SUITE_FUNCS[name](Q, opts, rep)
    except (NotDivisible, NonIntegralResult, NonIntegralInterpolation, NoSplitting, BadReduction, NotARoot) as exc:
        rep.check(False, error=type(exc).__name__, message=str(exc))
    return rep


def cmd_verify(args, out) -> int:
    Q = _quiver(args)
    if args.rmax < 1 or args.height < 1 or args.primes < 1 or args.smax < 0:
        raise InputError("--rmax, --height and --primes must be positive")
    names = SUITES if args.suite == "all" else (args.suite,)
    all_ok = True
    for name in names:
        t0 = time.perf_counter()
        rep = run_suite(name, Q, args)
        secs = time.perf_counter() - t0
        all_ok &= rep.passed
        rec = {
            "suite": name,
            "status": "pass" if rep.passed else "fail",
            "checks": rep.checks,
            "failures": len(rep.failures),
            "counterexamples": rep.failures[:5],
        }
        if rep.items:
            rec["results"] = rep.items
        if args.format == "json":
            print(json.dumps(rec, sort_keys=True), file=out)
        else:
            print(f"{name}: {rec['status'].upper()} ({rep.checks} checks, {secs:.1f} s)", file=out)
            for item in rep.items:
                print(f"  {json.dumps(item, sort_keys=True)}", file=out)
            for f in rep.failures[:5]:
                print(f"  counterexample: {json.dumps(f, sort_keys=True)}", file=out)
    return EXIT_OK if all_ok else EXIT_FAIL


# ---------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dtilde", description="F-polynomials for affine type D quivers.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--n", type=int, default=4, help="the quiver is D~n (n >= 4)")
        p.add_argument("--orient", default=None, help="edge:fwd|rev list, e.g. a:rev,v0:fwd")
        p.add_argument("--format", choices=("text", "json"), default="text")

    def target(p):
        p.add_argument("--root", action="append", default=[], help="vertex=count, repeatable or comma separated")
        p.add_argument("--tube", choices=("2a", "2b", "big"))
        p.add_argument("--l", type=int)
        p.add_argument("--r", type=int)
        p.add_argument("--socle", type=int, default=0)
        p.add_argument("--snake", type=int, help="dimension vector of the snake Q(s, n)")

    p = sub.add_parser("fpoly", help="print an F-polynomial")
    common(p)
    target(p)
    p = sub.add_parser("cc", help="print a Caldero-Chapoton cluster variable")
    common(p)
    target(p)
    p.add_argument("--allow-imaginary", action="store_true")
    p = sub.add_parser("verify", help="run identity suites")
    common(p)
    p.add_argument("--suite", choices=("all",) + SUITES, default="all")
    p.add_argument("--rmax", type=int, default=4)
    p.add_argument("--height", type=int, default=10)
    p.add_argument("--primes", type=int, default=2, help="held-out primes per interpolation")
    p.add_argument("--smax", type=int, default=2, help="largest snake parameter s")
    return ap


COMMANDS = {"fpoly": cmd_fpoly, "cc": cmd_cc, "verify": cmd_verify}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args, out)
    except (InputError, NotARoot) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ArithmeticError, NoSplitting) as exc:
        print(f"internal identity failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
