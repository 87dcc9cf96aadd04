"""F-polynomials of indecomposable D~n representations and the Caldero-Chapoton map."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Mapping

from .laurent import (
    ONE,
    ZERO,
    H,
    LaurentPoly,
    RationalFunction,
    divide_exact,
    gen_binomial,
    make_monomial,
    substitute,
    to_polynomial,
    x,
    xpow,
)
from .quiver import (
    DimVec,
    NotARoot,
    QuiverDn,
    RootInfo,
    RootKind,
    bfs_reduction,
    chain_partial_sum,
    classify_root,
    coxeter_reduction,
    defect,
    delta,
    euler_form,
    find_quasi_simple_orbits,
    orientation_path,
    reflect_dim,
    regular_position,
    simple,
    subspace_tube_seeds,
    tau_dim,
    tits_form,
    tube_quasi_simples,
)


class NonIntegralResult(ArithmeticError):
    pass


class NoSplitting(ValueError):
    pass


# lru_cache is safe under concurrent use: a race only recomputes a pure value.
_memo = lru_cache(maxsize=None)


def x_dim(m: DimVec) -> LaurentPoly:
    return xpow(dict(m.items()))


# ------------------------------------------------------------ reflections


def reflect_fpoly(Q, q: str, F: LaurentPoly, m: DimVec, direction: str) -> LaurentPoly:
    """F-polynomial of sigma_q M on sigma_q Q, from F = F_M with dim M = m.

    Sink case:   (1 + x_q^-1)^(-m_q) F(x'),  x'_q = 1/x_q,
                 x'_i = x_i x_q^a(i,q) (1 + 1/x_q)^a(i,q).
    Source case: (1 + x_q)^((sigma_q m)_q) F(x'),  x'_q = 1/x_q,
                 x'_i = x_i x_q^a(q,i) (1 + x_q)^(-a(q,i)).
    """
    if direction == "sink":
        if not Q.is_sink(q):
            raise ValueError(f"{q} is not a sink")
    elif direction == "source":
        if not Q.is_source(q):
            raise ValueError(f"{q} is not a source")
    else:
        raise ValueError("direction must be 'sink' or 'source'")
    xq = x(q)
    if m == simple(q):
        if F != ONE + xq:
            raise ValueError("dimension s_q requires F = 1 + x_q")
        return ONE
    if not m:
        return F
    assign: dict[str, object] = {q: x(q, -1)}
    if direction == "sink":
        shift = ONE + x(q, -1)
        for p in Q.vertices:
            k = Q.a(p, q)
            if k:
                assign[p] = x(p) * xq ** k * shift ** k
        pref = RationalFunction(ONE, [(shift, m[q])])
    else:
        shift = ONE + xq
        for p in Q.vertices:
            k = Q.a(q, p)
            if k:
                assign[p] = RationalFunction(x(p) * xq ** k, [(shift, k)])
        k = reflect_dim(Q, q, m)[q]
        pref = RationalFunction(shift ** k) if k >= 0 else RationalFunction(ONE, [(shift, -k)])
    return to_polynomial(substitute(F, assign) * pref)


def dual_fpoly(F: LaurentPoly, m: DimVec) -> LaurentPoly:
    """x^m F(1/x)."""
    md = dict(m.items())

    def flip(mono):
        d = dict(mono)
        return make_monomial({v: md.get(v, 0) - d.get(v, 0) for v in set(md) | set(d)})

    return F.map_monomials(flip)


def thin_fpoly(Q, alpha: DimVec) -> LaurentPoly:
    """F of the thin tree module: sum of x^S over arrow-closed subsets S of the support."""
    supp = alpha.support()
    arrows = [(t, h) for _, t, h in Q.arrows if t in supp and h in supp]
    out: dict = {}
    for mask in range(1 << len(supp)):
        chosen = {supp[i] for i in range(len(supp)) if mask >> i & 1}
        if all(h in chosen for t, h in arrows if t in chosen):
            mono = make_monomial({v: 1 for v in chosen})
            out[mono] = out.get(mono, 0) + 1
    return LaurentPoly(out)


def transport(steps, base: LaurentPoly) -> LaurentPoly:
    """Pull a base F-polynomial back along a word from quiver.coxeter_reduction/bfs_reduction."""
    F = base
    for st in reversed(steps):
        reflected = st.quiver.reflect(st.vertex)
        m = reflect_dim(st.quiver, st.vertex, st.dim)
        back = "source" if st.kind == "sink" else "sink"
        F = reflect_fpoly(reflected, st.vertex, F, m, back)
    return F


@_memo
def _orbits(Q: QuiverDn):
    return tuple(find_quasi_simple_orbits(Q))


@_memo
def reflection_chain(Q: QuiverDn, alpha: DimVec) -> LaurentPoly:
    """F-polynomial of the indecomposable of real-root dimension alpha, by reflection functors.

    Pre/postprojective roots follow the Coxeter sequence down to a simple.
    Regular roots: quasi-simples are reduced by breadth-first search over
    sink/source reflections to a thin root, whose module is the thin tree
    module with F = sum over arrow-closed subsets of the support. Longer
    tube modules come from the almost split sequences of the tube:
        F(X_{j,L+1}) F(X_{j+1,L-1}) = F(X_{j,L}) F(X_{j+1,L}) - x^dim X_{j+1,L}.
    """
    if not alpha.is_nonnegative() or not alpha or tits_form(Q, alpha) != 1:
        raise NotARoot(f"{alpha} is not a positive real root")
    df = defect(Q, alpha)
    if df < 0:
        steps, _, q = coxeter_reduction(Q, alpha, "sink")
        return transport(steps, ONE + x(q))
    if df > 0:
        steps, _, q = coxeter_reduction(Q, alpha, "source")
        return transport(steps, ONE + x(q))
    pos = regular_position(_orbits(Q), alpha, delta(Q))
    if pos is None:
        raise NotARoot(f"{alpha} lies in no exceptional tube")
    orbit, j, L = pos
    return tube_chain_fpoly(Q, orbit, j, L)


def tube_chain_fpoly(Q: QuiverDn, orbit: tuple, j: int, L: int) -> LaurentPoly:
    """F of the tube module with quasi-socle orbit[j] and quasi-length L, via mesh relations."""
    t = len(orbit)
    memo: dict[tuple[int, int], LaurentPoly] = {}

    def X(i: int, k: int) -> LaurentPoly:
        i %= t
        if k == 0:
            return ONE
        if (i, k) in memo:
            return memo[(i, k)]
        if k == 1:
            steps, last, thin = bfs_reduction(Q, orbit[i])
            val = transport(steps, thin_fpoly(last, thin))
        else:
            num = X(i, k - 1) * X(i + 1, k - 1) - x_dim(chain_partial_sum(orbit, i + 1, k - 1))
            val = divide_exact(num, X(i + 1, k - 2))
        memo[(i, k)] = val
        return val

    return X(j, L)


# ------------------------------------------------------ homogeneous tubes


@_memo
def f_delta(Q: QuiverDn) -> LaurentPoly:
    """F-polynomial of a homogeneous module of dimension delta."""
    S = QuiverDn.subspace(Q.n)
    if Q == S:
        if Q.n == 4:
            t1, t2 = subspace_tube_seeds(4)["2a"], tau_dim(S, subspace_tube_seeds(4)["2a"], "inverse")
            return H("0", "a", "c") * H("0", "b", "d") - x_dim(t1) - x_dim(t2)
        return reduce_type_one(f_delta(QuiverDn.subspace(Q.n - 1)), Q.n - 5, Q.n - 1)
    F, cur = f_delta(S), S
    d = delta(Q)
    for q in orientation_path(S, Q):
        F = reflect_fpoly(cur, q, F, d, "sink" if cur.is_sink(q) else "source")
        cur = cur.reflect(q)
    return F


@_memo
def f_homog(Q: QuiverDn, r: int) -> LaurentPoly:
    """F_{r delta} = F_delta F_{(r-1) delta} - x^delta F_{(r-2) delta}, F_0 = 1, F_{-delta} = 0."""
    if r < 0:
        return ZERO
    if r == 0:
        return ONE
    return f_delta(Q) * f_homog(Q, r - 1) - x_dim(delta(Q)) * f_homog(Q, r - 2)


def homog_closed_form(Q: QuiverDn, r: int) -> LaurentPoly:
    """Odd-part expansion of (lambda_+^(r+1) - lambda_-^(r+1)) / (2z), without square roots."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    F = f_delta(Q)
    disc = F * F - x_dim(delta(Q)) * 4
    total = ZERO
    for j in range(1, r + 2, 2):
        total = total + F ** (r + 1 - j) * disc ** ((j - 1) // 2) * comb(r + 1, j)
    out = total * Fraction(1, 2 ** r)
    if not out.is_integral():
        raise NonIntegralResult("closed form produced fractional coefficients")
    return out


# -------------------------------------------------------- exceptional tubes


def f_small(Q: QuiverDn, alpha: DimVec) -> LaurentPoly:
    if not alpha:
        return ONE
    return reflection_chain(Q, alpha)


def _f_nonneg(Q: QuiverDn, alpha: DimVec) -> LaurentPoly:
    """F_alpha with the convention F = 0 on vectors with a negative entry."""
    if not alpha.is_nonnegative():
        return ZERO
    return f_small(Q, alpha)


def f_tube(Q: QuiverDn, info: RootInfo) -> LaurentPoly:
    """Exceptional-tube modules m_l(r) = r delta + m_l(0) with quasi-socle E_j.

    F = F_{m_l(0)} F_{r delta} + x^{m_{l+1}(0)} F_{m_{t-1}(0) - m_{l+1}(0)} F_{(r-1) delta},
    where m_t(0) = delta; l = 0 gives the non-homogeneous module of dimension r delta.
    """
    orbit = tube_quasi_simples(Q)[info.tube]
    t, j, l, r = len(orbit), info.socle, info.l, info.r
    if l == 0 and r == 0:
        raise ValueError("l = 0 needs r >= 1")

    def m(k: int) -> DimVec:
        return chain_partial_sum(orbit, j, k)

    first = (ONE if l == 0 else f_small(Q, m(l))) * f_homog(Q, r)
    if r == 0 or l + 1 > t - 1:
        return first
    return first + x_dim(m(l + 1)) * _f_nonneg(Q, m(t - 1) - m(l + 1)) * f_homog(Q, r - 1)


def tube_info(Q: QuiverDn, tube: str, l: int, r: int, socle: int = 0) -> RootInfo:
    orbit = tube_quasi_simples(Q)[tube]
    t = len(orbit)
    if not 0 <= socle < t:
        raise ValueError(f"socle must be in 0..{t - 1}")
    if not 0 <= l < t:
        raise ValueError(f"l must be in 0..{t - 1}")
    base = chain_partial_sum(orbit, socle, l)
    kind = RootKind.RealRegular if l else (
        RootKind.ImaginaryMultipleOfDelta if r == 1 else RootKind.ImaginaryRegularNonSchur
    )
    return RootInfo(kind, 0, r=r, base=base, tube=tube, socle=socle, l=l, rank=t)


# ------------------------------------------------------------ defect -1, -2


def f_defect1(Q: QuiverDn, info: RootInfo) -> LaurentPoly:
    t, r = info.base, info.r
    Ft = f_small(Q, t)
    if r == 0:
        return Ft
    d = delta(Q)
    if info.boundary:
        return Ft * f_homog(Q, r) - x_dim(d) * f_homog(Q, r - 1)
    u = tau_dim(Q, t, "inverse")
    return Ft * f_homog(Q, r) - x_dim(u) * _f_nonneg(Q, d - u) * f_homog(Q, r - 1)


def f_defect2(Q: QuiverDn, info: RootInfo) -> LaurentPoly:
    """F_B = F_N F_M - x^{tau^-1 m} F_{n - tau^-1 m}."""
    if not info.splitting:
        raise NoSplitting("no (M, N) splitting recorded")
    M, N = info.splitting
    u = tau_dim(Q, M, "inverse")
    return f_root(Q, N) * f_root(Q, M) - x_dim(u) * _f_nonneg(Q, N - u)


@_memo
def f_root(Q: QuiverDn, alpha: DimVec) -> LaurentPoly:
    info = classify_root(Q, alpha)
    k = info.kind
    if k in (RootKind.ImaginaryMultipleOfDelta, RootKind.ImaginaryRegularNonSchur):
        return f_homog(Q, info.r)
    if k is RootKind.RealRegular:
        return f_tube(Q, info)
    if k is RootKind.RealPreinjective:
        return dual_fpoly(f_root(Q.opposite(), alpha), alpha)
    if info.defect == -1:
        return f_defect1(Q, info)
    if info.splitting:
        return f_defect2(Q, info)
    if info.r == 0:
        return f_small(Q, alpha)
    raise NoSplitting(f"defect -2 root {alpha} has no splitting")


def formula_route(Q: QuiverDn, alpha: DimVec) -> str:
    """Name of the branch f_root takes; useful for coverage reports."""
    info = classify_root(Q, alpha)
    k = info.kind
    if k is RootKind.RealPreinjective:
        return "dual:" + formula_route(Q.opposite(), alpha)
    if k is RootKind.RealRegular:
        return f"tube:{info.tube}"
    if k is RootKind.RealPreprojective:
        if info.defect == -1:
            return "defect1:small" if info.r == 0 else ("defect1:inj" if info.boundary else "defect1:tau")
        return "defect2:split" if info.splitting else "defect2:small"
    return "homog"


# ------------------------------------------------------------ reductions


def type_one_lift(n_hat: int, i: int):
    """Renaming and substitution lifting F from D~{n_hat} to D~{n_hat+1}.

    A new chain vertex i+1 is inserted after chain vertex i.  At the end of
    the chain (i = n_hat - 4) the sources c, d hang off the new vertex;
    otherwise later chain vertices shift up by one.
    """
    if not 0 <= i <= n_hat - 4:
        raise ValueError(f"chain position must be in 0..{n_hat - 4}")
    new = str(i + 1)
    if i == n_hat - 4:
        rename: dict[str, str] = {}
        after = ["c", "d"]
    else:
        rename = {str(j): str(j + 1) for j in range(i + 1, n_hat - 3)}
        after = [str(i + 2)]
    xn = x(new)
    assign: dict[str, object] = {str(i): x(str(i)) * (ONE + xn)}
    for s in after:
        assign[s] = RationalFunction(x(s) * xn, [(ONE + xn, 1)])
    return rename, assign


def reduce_type_one(F_hat: LaurentPoly, i: int, n_hat: int) -> LaurentPoly:
    rename, assign = type_one_lift(n_hat, i)
    return to_polynomial(substitute(F_hat.rename(rename), assign))


# ---------------------------------------------------------------- CC map


def cc_variable(Q, m: DimVec, table: Mapping[DimVec, int]) -> LaurentPoly:
    """Sum over e of chi_e * prod_q x_q^(-<e,s_q> - <s_q, m-e>)."""
    out: dict = {}
    for e, chi in table.items():
        if not chi:
            continue
        exps = {
            q: -euler_form(Q, e, simple(q)) - euler_form(Q, simple(q), m - e) for q in Q.vertices
        }
        mono = make_monomial(exps)
        out[mono] = out.get(mono, 0) + chi
    return LaurentPoly(out)


def euler_table(F: LaurentPoly) -> dict[DimVec, int]:
    return {DimVec(dict(mono)): c for mono, c in F.items()}


CC_CONVENTIONS = ("outgoing", "incoming")


def cc_factorized(Q, m: DimVec, F: LaurentPoly, m_conv: str, x_conv: str) -> LaurentPoly:
    """x^{m'} F(x') under a choice of index convention.

    m_conv 'outgoing': m'_q = sum_p a(q,p) m_p - m_q; 'incoming' uses a(p,q).
    x_conv 'outgoing': x'_q = prod_p x_p^(a(q,p) - a(p,q)); 'incoming' swaps the roles.
    """
    for c in (m_conv, x_conv):
        if c not in CC_CONVENTIONS:
            raise ValueError(f"unknown convention {c!r}")

    def arr(p, q, conv):
        return Q.a(q, p) if conv == "outgoing" else Q.a(p, q)

    mp = {q: sum(arr(p, q, m_conv) * m[p] for p in Q.vertices) - m[q] for q in Q.vertices}
    assign = {}
    for q in Q.vertices:
        assign[q] = xpow({p: arr(p, q, x_conv) - arr(q, p, x_conv) for p in Q.vertices})
    return xpow(mp) * to_polynomial(substitute(F, assign))


# --------------------------------------------------- Euler characteristics


def euler_reflect(table: Mapping[int, int], n: int, t: int, m: int) -> int:
    """chi(Gr_{sigma e - m s_q}(sigma M)) = sum_j chi(Gr_{e + j s_q}(M)) C(n - t, m - j)."""
    return sum(table.get(j, 0) * gen_binomial(n - t, m - j) for j in range(m + 1))


def euler_strata(table: Mapping[int, int], alpha_q: int, e_q: int, m: int) -> int:
    """Euler characteristic of the stratum where the map into q is onto."""
    return sum(
        (-1) ** (m - i) * gen_binomial(alpha_q - e_q - i, m - i) * table.get(i, 0)
        for i in range(m + 1)
    )


def grassrefl_sum(strata: Mapping[int, int], alpha_q: int, e_q: int, m: int) -> int:
    """Fibration count recovering chi(Gr_{e + m s_q}(M)) from the strata values."""
    return sum(gen_binomial(alpha_q - e_q - (m - i), i) * strata.get(m - i, 0) for i in range(m + 1))


def type_two_identity(chi_B: int, chi_N_shift: int, chi_N: int) -> bool:
    return chi_B == chi_N_shift + chi_N


# ------------------------------------------------------------- sanity


def structure_problems(F: LaurentPoly, m: DimVec) -> list[str]:
    """Empty list iff F is integral, nonnegative, has constant term 1 and unique top x^m."""
    probs = []
    if not F.is_integral():
        probs.append("non-integral coefficient")
    if any(c < 0 for _, c in F.items()):
        probs.append("negative coefficient")
    if F.constant_term() != 1:
        probs.append(f"constant term {F.constant_term()}")
    if F.coefficient(dict(m.items())) != 1:
        probs.append("top coefficient is not 1")
    for mono, _ in F.items():
        e = DimVec(dict(mono))
        if not (e.is_nonnegative() and e <= m):
            probs.append(f"exponent {e} outside [0, {m}]")
            break
    return probs
