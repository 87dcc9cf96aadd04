"""Ground truth from explicit matrices.

Representations carry integer matrices.  Reflection functors use exact
rational kernels and cokernels (sympy), cleared back to integer bases.
Quiver Grassmannians are counted over small prime fields and the counts
are interpolated to a polynomial whose value at 1 is the Euler
characteristic.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import combinations, product
from math import gcd
from typing import Iterator, Mapping, Optional

import sympy

from .laurent import LaurentPoly, make_monomial
from .quiver import (
    DimVec,
    NotARoot,
    QuiverDn,
    bfs_reduction,
    coxeter_reduction,
    defect,
    delta,
    find_quasi_simple_orbits,
    regular_position,
    tits_form,
    vectors_below,
)


class BadReduction(ValueError):
    pass


class NonIntegralInterpolation(ArithmeticError):
    pass


class InconsistentLabels(ValueError):
    pass


class BadParameter(ValueError):
    pass


Rows = tuple  # tuple of row tuples


@dataclass(frozen=True)
class MatrixRep:
    quiver: object
    dims: DimVec
    maps: tuple  # ((edge, rows), ...) in quiver arrow order; rows has shape dim(head) x dim(tail)

    def __post_init__(self):
        edges = [e for e, _, _ in self.quiver.arrows]
        if [e for e, _ in self.maps] != edges:
            raise ValueError("maps must list every arrow in quiver order")
        for (e, rows), (_, t, h) in zip(self.maps, self.quiver.arrows):
            if len(rows) != self.dims[h] or any(len(r) != self.dims[t] for r in rows):
                raise ValueError(f"matrix for {e} has the wrong shape")

    def rows(self, edge: str) -> Rows:
        for e, r in self.maps:
            if e == edge:
                return r
        raise KeyError(edge)

    def matrix(self, edge: str) -> sympy.Matrix:
        t, h = self.quiver.arrow(edge)
        r = self.rows(edge)
        return sympy.Matrix(self.dims[h], self.dims[t], [v for row in r for v in row])

    def dim(self, q: str) -> int:
        return self.dims[q]

    def total_dim(self) -> int:
        return self.dims.height()

    def to_json(self) -> str:
        return json.dumps(
            {
                "dims": {q: self.dims[q] for q in self.quiver.vertices},
                "maps": {e: [list(r) for r in rows] for e, rows in self.maps},
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, Q, text: str) -> "MatrixRep":
        d = json.loads(text)
        dims = DimVec(d["dims"])
        maps = tuple((e, tuple(tuple(r) for r in d["maps"][e])) for e, _, _ in Q.arrows)
        return cls(Q, dims, maps)


def _rows_of(M: sympy.Matrix) -> Rows:
    return tuple(tuple(int(v) for v in M.row(i)) for i in range(M.rows))


def _zero_rows(r: int, c: int) -> Rows:
    return tuple(tuple(0 for _ in range(c)) for _ in range(r))


def make_rep(Q, dims: DimVec, matrices: Mapping[str, object]) -> MatrixRep:
    """Build from sympy matrices or nested lists; missing edges default to zero maps."""
    maps = []
    for e, t, h in Q.arrows:
        if e in matrices:
            m = sympy.Matrix(matrices[e]) if not isinstance(matrices[e], sympy.Matrix) else matrices[e]
            if m.rows == 0 or m.cols == 0:
                rows = _zero_rows(dims[h], dims[t])
            else:
                rows = _rows_of(m)
        else:
            rows = _zero_rows(dims[h], dims[t])
        maps.append((e, rows))
    return MatrixRep(Q, dims, tuple(maps))


def simple_rep(Q, q: str) -> MatrixRep:
    return make_rep(Q, DimVec.unit(q), {})


def thin_rep(Q, alpha: DimVec) -> MatrixRep:
    """All arrows inside the support act by 1."""
    mats = {e: [[1]] for e, t, h in Q.arrows if alpha[t] and alpha[h]}
    return make_rep(Q, alpha, mats)


def direct_sum(M: MatrixRep, N: MatrixRep) -> MatrixRep:
    Q = M.quiver
    mats = {}
    for e, _, _ in Q.arrows:
        mats[e] = sympy.diag(M.matrix(e), N.matrix(e))
    return make_rep(Q, M.dims + N.dims, mats)


def _primitive_int_columns(K: sympy.Matrix) -> sympy.Matrix:
    cols = []
    for j in range(K.cols):
        col = [sympy.Rational(v) for v in K.col(j)]
        den = reduce(lambda a, b: a * b // gcd(a, b), (int(v.q) for v in col), 1)
        ints = [int(v * den) for v in col]
        g = reduce(gcd, (abs(v) for v in ints), 0) or 1
        cols.append([v // g for v in ints])
    if not cols:
        return sympy.zeros(K.rows, 0)
    return sympy.Matrix(cols).T


# ---------------------------------------------------------- reflections


def reflect_rep(Q, q: str, M: MatrixRep) -> MatrixRep:
    """BGP reflection at a sink (kernel) or source (cokernel) q."""
    if M.quiver != Q:
        raise ValueError("representation lives on a different quiver")
    R = Q.reflect(q)
    if Q.is_sink(q):
        inc = [(e, t) for e, t, h in Q.arrows if h == q]
        blocks = [M.matrix(e) for e, _ in inc]
        total = sum(M.dims[t] for _, t in inc)
        phi = sympy.Matrix.hstack(*blocks) if blocks else sympy.zeros(M.dims[q], 0)
        if phi.cols == 0:
            K = sympy.zeros(0, 0)
        else:
            K = _primitive_int_columns(sympy.Matrix.hstack(*phi.nullspace()) if phi.nullspace() else sympy.zeros(total, 0))
        k = K.cols
        new_dims = M.dims + DimVec.unit(q, k - M.dims[q])
        mats = {e: M.matrix(e) for e, t, h in Q.arrows if q not in (t, h)}
        row = 0
        for e, t in inc:
            mats[e] = K[row : row + M.dims[t], :] if k else sympy.zeros(M.dims[t], 0)
            row += M.dims[t]
        return make_rep(R, new_dims, mats)
    if Q.is_source(q):
        out = [(e, h) for e, t, h in Q.arrows if t == q]
        blocks = [M.matrix(e) for e, _ in out]
        total = sum(M.dims[h] for _, h in out)
        psi = sympy.Matrix.vstack(*blocks) if blocks else sympy.zeros(0, M.dims[q])
        if psi.rows == 0:
            Y = sympy.zeros(0, 0)
        else:
            left = psi.T.nullspace()
            Y = _primitive_int_columns(sympy.Matrix.hstack(*left)).T if left else sympy.zeros(0, total)
        k = Y.rows
        new_dims = M.dims + DimVec.unit(q, k - M.dims[q])
        mats = {e: M.matrix(e) for e, t, h in Q.arrows if q not in (t, h)}
        col = 0
        for e, h in out:
            mats[e] = Y[:, col : col + M.dims[h]] if k else sympy.zeros(0, M.dims[h])
            col += M.dims[h]
        return make_rep(R, new_dims, mats)
    raise ValueError(f"{q} is neither a sink nor a source")


# ---------------------------------------------------------- extensions


def _hom_unknowns(M: MatrixRep, N: MatrixRep) -> dict:
    """Index the entries of (f_q: N_q -> M_q)."""
    idx = {}
    for q in M.quiver.vertices:
        for i in range(M.dims[q]):
            for j in range(N.dims[q]):
                idx[(q, i, j)] = len(idx)
    return idx


def _differential(M: MatrixRep, N: MatrixRep) -> tuple[sympy.Matrix, list]:
    """Matrix of d: (f_q) -> (M_v f_p - f_q N_v)_v, with the list of target coordinates."""
    Q = M.quiver
    idx = _hom_unknowns(M, N)
    targets = []
    for e, t, h in Q.arrows:
        for r in range(M.dims[h]):
            for c in range(N.dims[t]):
                targets.append((e, r, c))
    D = sympy.zeros(len(targets), len(idx))
    for row, (e, r, c) in enumerate(targets):
        t, h = Q.arrow(e)
        Mv, Nv = M.rows(e), N.rows(e)
        for k in range(M.dims[t]):
            # (M_v f_t)[r][c] = sum_k M_v[r][k] f_t[k][c]
            if Mv[r][k]:
                D[row, idx[(t, k, c)]] += Mv[r][k]
        for k in range(N.dims[h]):
            # (f_h N_v)[r][c] = sum_k f_h[r][k] N_v[k][c]
            if Nv[k][c]:
                D[row, idx[(h, r, k)]] -= Nv[k][c]
    return D, targets


def hom_dim(M: MatrixRep, N: MatrixRep) -> int:
    """dim Hom(N, M)."""
    D, _ = _differential(M, N)
    return D.cols - (D.rank() if D.rows and D.cols else 0)


def end_dim(M: MatrixRep) -> int:
    return hom_dim(M, M)


def ext_dim(N: MatrixRep, M: MatrixRep) -> int:
    """dim Ext^1(N, M)."""
    D, targets = _differential(M, N)
    return len(targets) - (D.rank() if D.rows and D.cols else 0)


def extension(M: MatrixRep, N: MatrixRep) -> MatrixRep:
    """Middle term of a non-split extension 0 -> M -> E -> N -> 0."""
    Q = M.quiver
    D, targets = _differential(M, N)
    base = D.rank() if D.rows and D.cols else 0
    pick = None
    for i in range(len(targets)):
        unit = sympy.zeros(len(targets), 1)
        unit[i] = 1
        test = sympy.Matrix.hstack(D, unit) if D.cols else unit
        if test.rank() > base:
            pick = targets[i]
            break
    if pick is None:
        raise ValueError("Ext^1(N, M) = 0: no non-split extension")
    mats = {}
    for e, t, h in Q.arrows:
        G = sympy.zeros(M.dims[h], N.dims[t])
        if pick[0] == e:
            G[pick[1], pick[2]] = 1
        top = sympy.Matrix.hstack(M.matrix(e), G)
        bottom = sympy.Matrix.hstack(sympy.zeros(N.dims[h], M.dims[t]), N.matrix(e))
        mats[e] = sympy.Matrix.vstack(top, bottom)
    return make_rep(Q, M.dims + N.dims, mats)


# ------------------------------------------------------ constructions


def _reflect_back(steps, base: MatrixRep) -> MatrixRep:
    M = base
    for st in reversed(steps):
        M = reflect_rep(M.quiver, st.vertex, M)
        if M.dims != st.dim:
            raise AssertionError(f"reflection produced {M.dims}, expected {st.dim}")
    return M


@lru_cache(maxsize=None)
def rep_from_root(Q, alpha: DimVec) -> MatrixRep:
    """An indecomposable representation of real-root dimension alpha (End-dimension checked)."""
    M = _build_from_root(Q, alpha)
    if M.dims != alpha or end_dim(M) != expected_end_dim(Q, alpha):
        raise AssertionError(f"construction for {alpha} has the wrong endomorphism ring")
    return M


def expected_end_dim(Q, alpha: DimVec) -> int:
    """1 off the tubes; floor((L-1)/t) + 1 for quasi-length L in a tube of rank t."""
    if defect(Q, alpha):
        return 1
    pos = regular_position(find_quasi_simple_orbits(Q), alpha, delta(Q))
    if pos is None:
        return 1
    orbit, _, L = pos
    return (L - 1) // len(orbit) + 1


def _build_from_root(Q, alpha: DimVec) -> MatrixRep:
    if not alpha.is_nonnegative() or not alpha or tits_form(Q, alpha) != 1:
        raise NotARoot(f"{alpha} is not a positive real root")
    df = defect(Q, alpha)
    if df:
        steps, last, q = coxeter_reduction(Q, alpha, "sink" if df < 0 else "source")
        return _reflect_back(steps, simple_rep(last, q))
    pos = regular_position(find_quasi_simple_orbits(Q), alpha, delta(Q))
    if pos is None:
        raise NotARoot(f"{alpha} lies in no exceptional tube")
    orbit, j, L = pos
    if L == 1:
        steps, last, thin = bfs_reduction(Q, alpha)
        return _reflect_back(steps, thin_rep(last, thin))
    t = len(orbit)
    X = rep_from_root(Q, orbit[j % t])
    for k in range(1, L):
        X = extension(X, rep_from_root(Q, orbit[(j + k) % t]))
    return X


def homogeneous_rep(Q: QuiverDn, r: int, lam) -> MatrixRep:
    """Four-subspace realisation of a homogeneous module of dimension r*delta (D~4 subspace)."""
    if Q != QuiverDn.subspace(4):
        raise ValueError("homogeneous_rep needs D~4 in subspace orientation")
    lam = Fraction(lam)
    if lam in (0, 1):
        raise BadParameter("lambda must avoid 0 and 1")
    num, den = lam.numerator, lam.denominator
    if r == 1:
        mats = {"a": [[1], [0]], "b": [[0], [1]], "c": [[1], [1]], "d": [[den], [num]]}
    elif r == 2:
        mats = {
            "a": [[1, 0], [0, 1], [0, 0], [0, 0]],
            "b": [[0, 0], [0, 0], [1, 0], [0, 1]],
            "c": [[1, 0], [0, 1], [1, 0], [0, 1]],
            "d": [[den, 0], [0, den], [num, den], [0, num]],
        }
    else:
        raise BadParameter("r must be 1 or 2")
    return make_rep(Q, delta(Q) * r, mats)


def tree_module(G, Q) -> MatrixRep:
    """Representation whose coefficient quiver is G: each arrow is a single 1-entry."""
    lab = G.labels
    index: dict[int, int] = {}
    counts: dict[str, int] = {}
    for i, l in sorted(lab.items()):
        if l not in Q.vertices:
            raise InconsistentLabels(f"label {l!r} is not a vertex")
        index[i] = counts.get(l, 0)
        counts[l] = counts.get(l, 0) + 1
    dims = DimVec(counts)
    mats = {e: sympy.zeros(dims[h], dims[t]) for e, t, h in Q.arrows}
    for s, t, e, _ in G.arrows:
        try:
            tail, head = Q.arrow(e)
        except KeyError:
            raise InconsistentLabels(f"unknown edge {e!r}") from None
        if (lab[s], lab[t]) != (tail, head):
            raise InconsistentLabels(f"arrow {s}->{t} labelled {e} does not match {tail}->{head}")
        mats[e][index[t], index[s]] = 1
    return make_rep(Q, dims, mats)


def _unimodular_to_e1(v: list[int]) -> sympy.Matrix:
    """Integer matrix U with det +-1 and U v = e_1, for a primitive integer vector v."""
    m = len(v)
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    w = list(v)
    while sum(1 for c in w if c) > 1:
        i = min((k for k in range(m) if w[k]), key=lambda k: abs(w[k]))
        for j in range(m):
            if j != i and w[j]:
                f = w[j] // w[i]
                w[j] -= f * w[i]
                U[j] = [a - f * b for a, b in zip(U[j], U[i])]
    i = next(k for k in range(m) if w[k])
    if abs(w[i]) != 1:
        raise ValueError("vector is not primitive")
    U[0], U[i] = U[i], U[0]
    if w[i] < 0:
        U[0] = [-a for a in U[0]]
    return sympy.Matrix(U)


def quotient_by_vector(M: MatrixRep, q: str, vec) -> MatrixRep:
    """M / <vec> for a vector vec in M_q spanning a subrepresentation (killed by all maps out of q)."""
    Q = M.quiver
    v = [int(c) for c in vec]
    g = reduce(gcd, (abs(c) for c in v), 0)
    if not g:
        raise ValueError("zero vector")
    v = [c // g for c in v]
    col = sympy.Matrix(v)
    for e, t, h in Q.arrows:
        if t == q and any(M.matrix(e) * col):
            raise ValueError("vector does not span a subrepresentation")
    U = _unimodular_to_e1(v)
    Uinv = U.inv()
    P, Pinv = U[1:, :], Uinv[:, 1:]
    mats = {}
    for e, t, h in Q.arrows:
        A = M.matrix(e)
        if h == q:
            A = P * A
        if t == q:
            A = A * Pinv
        mats[e] = A
    return make_rep(Q, M.dims - DimVec.unit(q), mats)


def socle_vector(M: MatrixRep, q: str) -> list[int]:
    """Integer basis vector of the common kernel of the maps out of q, when it is a line."""
    Q = M.quiver
    outs = [M.matrix(e) for e, t, h in Q.arrows if t == q]
    A = sympy.Matrix.vstack(*outs) if outs else sympy.zeros(0, M.dims[q])
    K = A.nullspace() if A.rows else [sympy.eye(M.dims[q])[:, i] for i in range(M.dims[q])]
    if len(K) != 1:
        raise ValueError(f"Hom(S_{q}, M) has dimension {len(K)}, not 1")
    return [int(c) for c in _primitive_int_columns(K[0])]


def hom_to_simple_dim(M: MatrixRep, U: dict, q: str, p: int) -> int:
    """dim Hom(V, S_q) for the subrepresentation V with bases U: codimension of incoming images in V_q."""
    Q = M.quiver
    imgs = [_apply(M.rows(e), u) for e, t, h in Q.arrows if h == q for u in U[t]]
    return len(U[q]) - (_rank_mod(imgs, p) if imgs else 0)


# ------------------------------------------------------- finite fields


def _rank_mod(vectors: list, p: int) -> int:
    rows = [[x % p for x in v] for v in vectors]
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for c in range(ncols):
        piv = None
        for i in range(rank, len(rows)):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], p - 2, p)
        pr = [(x * inv) % p for x in rows[rank]]
        rows[rank] = pr
        for i in range(rank + 1, len(rows)):
            f = rows[i][c]
            if f:
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], pr)]
        rank += 1
        if rank == len(rows):
            break
    return rank


@lru_cache(maxsize=None)
def subspaces(m: int, k: int, p: int) -> tuple:
    """All k-dimensional subspaces of F_p^m as reduced row-echelon bases."""
    out = []
    for pivots in combinations(range(m), k):
        free = [(i, c) for i, pc in enumerate(pivots) for c in range(pc + 1, m) if c not in pivots]
        for vals in product(range(p), repeat=len(free)):
            rows = [[0] * m for _ in range(k)]
            for i, pc in enumerate(pivots):
                rows[i][pc] = 1
            for (i, c), v in zip(free, vals):
                rows[i][c] = v
            out.append(tuple(tuple(r) for r in rows))
    return tuple(out)


def gaussian_binomial(n: int, k: int, p: int) -> int:
    if k < 0 or k > n:
        return 0
    num, den = 1, 1
    for i in range(k):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def _apply(rows: Rows, vec) -> list:
    return [sum(a * b for a, b in zip(r, vec)) for r in rows]


def _columns(rows: Rows, ncols: int) -> list:
    return [[r[j] for r in rows] for j in range(ncols)]


@lru_cache(maxsize=None)
def _structure(M: MatrixRep):
    """Core (non-leaf) vertices in BFS order and leaves with their attaching arrow."""
    Q = M.quiver
    deg = {q: 0 for q in Q.vertices}
    for _, t, h in Q.arrows:
        deg[t] += 1
        deg[h] += 1
    core = [q for q in Q.vertices if deg[q] >= 2]
    if not core:
        core = [Q.vertices[0]]
    start = core[0]
    order, seen = [start], {start}
    while len(order) < len(core):
        for e, t, h in Q.arrows:
            for a, b in ((t, h), (h, t)):
                if a in seen and b in core and b not in seen:
                    seen.add(b)
                    order.append(b)
    leaves = []
    for q in Q.vertices:
        if q in seen:
            continue
        (e, t, h), = [(e, t, h) for e, t, h in Q.arrows if q in (t, h)]
        leaves.append((q, e, "out" if t == q else "in"))  # 'out': leaf -> core
    return order, leaves


def count_table(M: MatrixRep, p: int, stratum: Optional[str] = None) -> dict:
    """Point counts of Gr_e(M) over F_p for every e (keys DimVec, zero counts omitted).

    With ``stratum=q`` (q a sink) only subrepresentations whose incoming maps
    span U_q are counted.
    """
    return dict(_count_table(M, p, stratum))


@lru_cache(maxsize=None)
def _count_table(M: MatrixRep, p: int, stratum: Optional[str]):
    Q = M.quiver
    check_good_reduction(M, p)
    if stratum is not None and not Q.is_sink(stratum):
        raise ValueError("stratum vertex must be a sink")
    core, leaves = _structure(M)
    dims = M.dims
    table: dict = {}
    core_arrows = [(e, t, h) for e, t, h in Q.arrows if t in core and h in core]

    def closed(assign: dict, q: str) -> bool:
        for e, t, h in core_arrows:
            if q not in (t, h) or t not in assign or h not in assign:
                continue
            U_t, U_h = assign[t], assign[h]
            imgs = [_apply(M.rows(e), u) for u in U_t]
            if _rank_mod(list(U_h) + imgs, p) != len(U_h):
                return False
        return True

    def leaf_vector(leaf, U_core) -> list:
        q, e, kind = leaf
        m = dims[q]
        rows = M.rows(e)
        if kind == "out":  # q -> u
            k = m + len(U_core) - _rank_mod(_columns(rows, m) + list(U_core), p)
            return [gaussian_binomial(k, j, p) for j in range(m + 1)]
        w = _rank_mod([_apply(rows, v) for v in U_core], p)
        if stratum == q:
            return [1 if j == w else 0 for j in range(m + 1)]
        return [gaussian_binomial(m - w, j - w, p) if j >= w else 0 for j in range(m + 1)]

    def finish(assign: dict):
        vecs = []
        strat_core = stratum is not None and stratum in assign
        for leaf in leaves:
            q, e, kind = leaf
            u = Q.arrow(e)[1] if kind == "out" else Q.arrow(e)[0]
            if strat_core and kind == "out" and u == stratum:
                vecs.append(None)  # handled by the Moebius sum below
            else:
                vecs.append(leaf_vector(leaf, assign[u]))
        base = {q: len(assign[q]) for q in core}
        if strat_core:
            combos = _stratum_leaf_counts(assign, leaves, vecs)
        else:
            combos = [(1, vecs)]
        for sign_weight, vlist in combos:
            for choice in product(*(range(len(v)) for v in vlist)):
                w = sign_weight
                for v, c in zip(vlist, choice):
                    w *= v[c]
                    if not w:
                        break
                if not w:
                    continue
                e = dict(base)
                for (q, _, _), c in zip(leaves, choice):
                    e[q] = c
                key = DimVec(e)
                table[key] = table.get(key, 0) + w

    def _stratum_leaf_counts(assign, leaves_, vecs):
        """Moebius inversion over C <= W <= U_q where C is the image of core arrows."""
        q = stratum
        U = assign[q]
        C = []
        for e, t, h in core_arrows:
            if h == q:
                C += [_apply(M.rows(e), u) for u in assign[t]]
        rC = _rank_mod(C, p) if C else 0
        d = len(U)
        out = []
        for k in range(d + 1):
            for Wc in subspaces(d, k, p):
                W = [[sum(c * U[i][j] for i, c in enumerate(row)) % p for j in range(dims[q])] for row in Wc]
                if rC and _rank_mod(W + C, p) != k:
                    continue
                mu = (-1) ** (d - k) * p ** ((d - k) * (d - k - 1) // 2)
                vlist = []
                for leaf, v in zip(leaves_, vecs):
                    if v is not None:
                        vlist.append(v)
                    else:
                        lq, e, _ = leaf
                        m = dims[lq]
                        kk = m + len(W) - _rank_mod(_columns(M.rows(e), m) + W, p)
                        vlist.append([gaussian_binomial(kk, j, p) for j in range(m + 1)])
                out.append((mu, vlist))
        return out

    def walk(i: int, assign: dict):
        if i == len(core):
            finish(assign)
            return
        q = core[i]
        for k in range(dims[q] + 1):
            for U in subspaces(dims[q], k, p):
                assign[q] = U
                if closed(assign, q):
                    walk(i + 1, assign)
                del assign[q]

    walk(0, {})
    return tuple(table.items())


def count_points(M: MatrixRep, e: DimVec, p: int) -> int:
    return dict(_count_table(M, p, None)).get(e, 0)


def subrepresentations(M: MatrixRep, e: DimVec, p: int) -> Iterator[dict]:
    """Brute force: every tuple (U_q) with dim e_q closed under all maps."""
    Q = M.quiver
    verts = list(Q.vertices)

    def walk(i, assign):
        if i == len(verts):
            yield dict(assign)
            return
        q = verts[i]
        for U in subspaces(M.dims[q], e[q], p):
            assign[q] = U
            good = True
            for ed, t, h in Q.arrows:
                if q in (t, h) and t in assign and h in assign:
                    imgs = [_apply(M.rows(ed), u) for u in assign[t]]
                    if _rank_mod(list(assign[h]) + imgs, p) != len(assign[h]):
                        good = False
                        break
            if good:
                yield from walk(i + 1, assign)
            del assign[q]

    yield from walk(0, {})


def ext_simple_dim(M: MatrixRep, U: dict, q: str, p: int) -> int:
    """dim Ext(V, S_q) for the subrepresentation V given by bases U: kernel of the incoming map."""
    Q = M.quiver
    src, imgs = 0, []
    for e, t, h in Q.arrows:
        if h == q:
            src += len(U[t])
            imgs += [_apply(M.rows(e), u) for u in U[t]]
    return src - (_rank_mod(imgs, p) if imgs else 0)


# ------------------------------------------------------ good reduction


def _composites(M: MatrixRep) -> list[sympy.Matrix]:
    """Matrices whose ranks must survive reduction mod p."""
    Q = M.quiver
    mats = [M.matrix(e) for e, _, _ in Q.arrows]
    for q in Q.vertices:
        inc = [M.matrix(e) for e, t, h in Q.arrows if h == q]
        out = [M.matrix(e) for e, t, h in Q.arrows if t == q]
        for k in range(2, len(inc) + 1):
            for sub in combinations(inc, k):
                mats.append(sympy.Matrix.hstack(*sub))
        for k in range(2, len(out) + 1):
            for sub in combinations(out, k):
                mats.append(sympy.Matrix.vstack(*sub))
    # compositions along directed paths of length >= 2
    paths = [[e] for e, _, _ in Q.arrows]
    while paths:
        nxt = []
        for path in paths:
            head = Q.arrow(path[-1])[1]
            for e, t, h in Q.arrows:
                if t == head:
                    nxt.append(path + [e])
        for path in nxt:
            A = M.matrix(path[0])
            for e in path[1:]:
                A = M.matrix(e) * A
            mats.append(A)
        paths = nxt
    return [m for m in mats if m.rows and m.cols]


@lru_cache(maxsize=None)
def _rational_ranks(M: MatrixRep) -> tuple:
    return tuple((m, m.rank()) for m in _composites(M))


def is_good_prime(M: MatrixRep, p: int) -> bool:
    for m, r in _rational_ranks(M):
        if _rank_mod([list(m.row(i)) for i in range(m.rows)], p) != r:
            return False
    return True


def check_good_reduction(M: MatrixRep, p: int) -> None:
    if not is_good_prime(M, p):
        raise BadReduction(f"rank drops modulo {p}")


def good_primes(M: MatrixRep, count: int, start: int = 2) -> list[int]:
    out = []
    p = sympy.nextprime(start - 1)
    while len(out) < count:
        if is_good_prime(M, p):
            out.append(int(p))
        p = sympy.nextprime(p)
    return out


# -------------------------------------------------------- interpolation

HELD_OUT = 2


def _degree_bound(M: MatrixRep, e: DimVec) -> int:
    return sum(e[q] * (M.dims[q] - e[q]) for q in M.quiver.vertices)


def counting_polynomial(points: list[tuple[int, int]]) -> list[int]:
    """Integer coefficients (constant first) of the interpolating polynomial."""
    X = sympy.Symbol("X")
    if len({y for _, y in points}) == 1:
        return [points[0][1]]
    poly = sympy.Poly(sympy.interpolate(points, X), X)
    coeffs = poly.all_coeffs()[::-1]
    if any(not c.is_integer for c in coeffs):
        raise NonIntegralInterpolation(f"non-integral counting polynomial from {points}")
    return [int(c) for c in coeffs]


def _eval(coeffs: list[int], v: int) -> int:
    return sum(c * v ** i for i, c in enumerate(coeffs))


@lru_cache(maxsize=None)
def _euler_table(M: MatrixRep, stratum: Optional[str], held_out: int) -> tuple:
    es = [e for e in vectors_below(M.dims, M.quiver.vertices)]
    D = max((_degree_bound(M, e) for e in es), default=0)
    primes = good_primes(M, D + 1 + held_out)
    tables = [dict(_count_table(M, p, stratum)) for p in primes]
    out = {}
    for e in es:
        need = _degree_bound(M, e) + 1
        pts = [(p, t.get(e, 0)) for p, t in zip(primes, tables)]
        coeffs = counting_polynomial(pts[:need])
        for p, c in pts[need : need + held_out]:
            if _eval(coeffs, p) != c:
                raise NonIntegralInterpolation(
                    f"held-out prime {p} disagrees for e={e}: {_eval(coeffs, p)} != {c}"
                )
        chi = _eval(coeffs, 1)
        if stratum is None and chi < 0:
            raise NonIntegralInterpolation(f"negative Euler characteristic at e={e}")
        if chi:
            out[e] = chi
    return tuple(out.items())


def euler_table(M: MatrixRep, stratum: Optional[str] = None, held_out: int = HELD_OUT) -> dict:
    """chi(Gr_e(M)) for all e, or of the stratum where the maps into the sink ``stratum`` are onto."""
    return dict(_euler_table(M, stratum, held_out))


def euler_char(M: MatrixRep, e: DimVec) -> int:
    if not (e.is_nonnegative() and e <= M.dims):
        return 0
    return euler_table(M).get(e, 0)


def fpoly_oracle(M: MatrixRep, max_dim: int = 10, held_out: int = HELD_OUT) -> LaurentPoly:
    if M.total_dim() > max_dim:
        raise ValueError(f"total dimension {M.total_dim()} exceeds the guard {max_dim}")
    table = euler_table(M, held_out=held_out)
    return LaurentPoly({make_monomial(dict(e.items())): c for e, c in table.items()})
