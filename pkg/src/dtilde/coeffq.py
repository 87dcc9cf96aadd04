"""Coefficient quivers: snakes Q(s, n), rank-2 tube chains, admissible subsets."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator

from .laurent import ONE, ZERO, H, LaurentPoly, make_monomial, x, xpow
from .quiver import DimVec


@dataclass(frozen=True)
class CoeffQuiver:
    vertices: tuple  # ((id, label), ...)
    arrows: tuple  # ((source, target, edge, extremal), ...)
    ramifications: tuple = ()  # ((l, l+1, l+2, l+3), ...)

    @property
    def labels(self) -> dict[int, str]:
        return dict(self.vertices)

    def type(self, subset=None) -> DimVec:
        lab = self.labels
        ids = lab if subset is None else subset
        return DimVec((lab[i], 1) for i in ids)

    def is_tree(self) -> bool:
        ids = [i for i, _ in self.vertices]
        if len(self.arrows) != len(ids) - 1:
            return False
        parent = {i: i for i in ids}

        def find(u):
            while parent[u] != u:
                parent[u] = parent[parent[u]]
                u = parent[u]
            return u

        for s, t, _, _ in self.arrows:
            rs, rt = find(s), find(t)
            if rs == rt:
                return False
            parent[rs] = rt
        return True

    def to_json(self) -> str:
        return json.dumps(
            {
                "vertices": [{"id": i, "label": l} for i, l in self.vertices],
                "arrows": [
                    {"source": s, "target": t, "edge": e, "extremal": ex} for s, t, e, ex in self.arrows
                ],
                "ramifications": [list(r) for r in self.ramifications],
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "CoeffQuiver":
        d = json.loads(text)
        return cls(
            tuple((v["id"], v["label"]) for v in d["vertices"]),
            tuple((a["source"], a["target"], a["edge"], a["extremal"]) for a in d["arrows"]),
            tuple(tuple(r) for r in d["ramifications"]),
        )

    def to_dot(self) -> str:
        lines = ["digraph G {"]
        for i, l in self.vertices:
            lines.append(f'  {i} [label="{i}:{l}"];')
        for s, t, e, ex in self.arrows:
            style = "" if ex else ", style=dashed"
            lines.append(f'  {s} -> {t} [label="{e}"{style}];')
        lines.append("}")
        return "\n".join(lines)


def build_snake(s: int, n: int) -> CoeffQuiver:
    """The snake Q(s, n) on vertices 0..s(2n-2)+n.

    Each period of length t = 2n-2 holds a row labelled q_{n-4}..q_0, an a/b
    ramification, a row labelled q_0..q_{n-4} and a c/d ramification; the
    last period stops at the q_0 vertex after its a/b ramification.
    """
    if n < 4 or s < 0:
        raise ValueError("need n >= 4 and s >= 0")
    t = 2 * n - 2
    label = {0: "d"}
    arrows = [(0, 1, "d", True)]
    rams = []
    for k in range(s + 1):
        o = k * t
        for j in range(1, n - 2):
            label[o + j] = str(n - 3 - j)
        for j in range(1, n - 3):
            arrows.append((o + j, o + j + 1, f"v{n - 4 - j}", True))
        l = o + n - 3
        label[l + 1], label[l + 2], label[l + 3] = "a", "b", "0"
        arrows += [(l + 1, l, "a", False), (l + 1, l + 3, "a", True), (l + 2, l + 3, "b", True)]
        rams.append((l, l + 1, l + 2, l + 3))
        if k == s:
            break
        for j in range(n - 3):
            label[o + n + j] = str(j)
        for j in range(n - 4):
            arrows.append((o + n + j + 1, o + n + j, f"v{j}", True))
        l = o + 2 * n - 4
        label[l + 1], label[l + 2] = "c", "d"
        arrows += [(l + 1, l, "c", False), (l + 1, l + 3, "c", True), (l + 2, l + 3, "d", True)]
        rams.append((l, l + 1, l + 2, l + 3))
    verts = tuple(sorted(label.items()))
    assert verts[-1][0] == s * t + n
    return CoeffQuiver(verts, tuple(arrows), tuple(rams))


def build_rank2_chain(k: int) -> CoeffQuiver:
    """k glued blocks for D~4 subspace orientation, alternating T1 (a, c) and T2 (b, d).

    Block i has sources 3i, 3i+1 and centre 3i+2; the first source of block
    i >= 1 also maps to the previous centre.
    """
    if k < 1:
        raise ValueError("need k >= 1")
    label, arrows, rams = {}, [], []
    for i in range(k):
        xs, ys = ("a", "c") if i % 2 == 0 else ("b", "d")
        u, v, c = 3 * i, 3 * i + 1, 3 * i + 2
        label[u], label[v], label[c] = xs, ys, "0"
        arrows += [(u, c, xs, True), (v, c, ys, True)]
        if i:
            arrows.append((u, c - 3, xs, False))
            rams.append((c - 3, u, v, c))
    return CoeffQuiver(tuple(sorted(label.items())), tuple(arrows), tuple(rams))


def _constraints(G: CoeffQuiver):
    """Group constraints by their smallest vertex id (decided last in a descending walk)."""
    by_min: dict[int, list] = {}
    for s, t, _, ext in G.arrows:
        if ext:
            by_min.setdefault(min(s, t), []).append(("arrow", s, t))
    for l, l1, l2, _ in G.ramifications:
        by_min.setdefault(min(l, l1, l2), []).append(("ram", l, l1, l2))
    return by_min


def admissible_subsets(G: CoeffQuiver) -> Iterator[tuple[frozenset, DimVec]]:
    """Subsets closed under extremal arrows and obeying the ramification rule.

    Yields in binary-counting order of the bitmask sum 2^id.
    """
    ids = sorted(i for i, _ in G.vertices)
    cons = _constraints(G)
    chosen: dict[int, bool] = {}

    def ok(v: int) -> bool:
        for c in cons.get(v, ()):
            if c[0] == "arrow":
                _, s, t = c
                if chosen[s] and not chosen[t]:
                    return False
            else:
                _, l, l1, l2 = c
                if chosen[l1] and chosen[l2] and not chosen[l]:
                    return False
        return True

    order = ids[::-1]

    def walk(pos: int):
        if pos == len(order):
            sub = frozenset(i for i in ids if chosen[i])
            yield sub, G.type(sub)
            return
        v = order[pos]
        for val in (False, True):
            chosen[v] = val
            if ok(v):
                yield from walk(pos + 1)
        del chosen[v]

    yield from walk(0)


def gen_function(G: CoeffQuiver) -> LaurentPoly:
    """Sum of x^type over admissible subsets, accumulated without materialising subsets."""
    ids = sorted(i for i, _ in G.vertices)
    lab = G.labels
    cons = _constraints(G)
    order = ids[::-1]
    chosen: dict[int, bool] = {}
    counts: dict[tuple, int] = {}
    cur: dict[str, int] = {}

    def ok(v: int) -> bool:
        for c in cons.get(v, ()):
            if c[0] == "arrow":
                if chosen[c[1]] and not chosen[c[2]]:
                    return False
            elif chosen[c[2]] and chosen[c[3]] and not chosen[c[1]]:
                return False
        return True

    def walk(pos: int):
        if pos == len(order):
            key = tuple(sorted((k, v) for k, v in cur.items() if v))
            counts[key] = counts.get(key, 0) + 1
            return
        v = order[pos]
        chosen[v] = False
        if ok(v):
            walk(pos + 1)
        chosen[v] = True
        cur[lab[v]] = cur.get(lab[v], 0) + 1
        if ok(v):
            walk(pos + 1)
        cur[lab[v]] -= 1
        del chosen[v]

    walk(0)
    return LaurentPoly({make_monomial(dict(k)): c for k, c in counts.items()})


# ------------------------------------------------------------ recursions


def snake_recursion(s: int, n: int) -> LaurentPoly:
    """Generating function of Q(s, n) from the row recursion, never by enumeration.

    F[(i, j)] counts admissible subsets of the part of the snake ending at
    chain vertex j of row i; even rows run q_{n-4} -> q_0, odd rows the
    other way.
    """
    if n < 4 or s < 0:
        raise ValueError("need n >= 4 and s >= 0")
    if n == 4:
        return _snake_recursion_d4(s)
    top = n - 4
    xs = {j: x(str(j)) for j in range(n - 3)}
    xa, xb, xc, xd = x("a"), x("b"), x("c"), x("d")
    F: dict[tuple[int, int], LaurentPoly] = {(-1, top): ONE, (0, top): ONE + xs[top] + xs[top] * xd}
    for i in range(0, 2 * s + 2):
        if i % 2 == 0:
            if i > 0:
                F[(i, top)] = (
                    H(str(top), "c", "d") * F[(i - 1, top)]
                    - xs[top] * xc * xd * F[(i - 1, top - 1)]
                )
            for j in range(top - 1, -1, -1):
                F[(i, j)] = xs[j] * F[(i, j + 1)] + F[(i - 1, top)]
        else:
            F[(i, 0)] = H("0", "a", "b") * F[(i - 1, 0)] - xs[0] * xa * xb * F[(i - 2, top)]
            if top >= 1:
                F[(i, 1)] = (xs[1] + 1) * F[(i, 0)] - xs[1] * F[(i - 1, 0)]
            for j in range(2, top + 1):
                F[(i, j)] = (xs[j] + 1) * F[(i, j - 1)] - xs[j] * F[(i, j - 2)]
    return F[(2 * s + 1, 0)]


def _snake_recursion_d4(s: int) -> LaurentPoly:
    """n = 4: (F_{2m+1}, F_{2m+2}) = C A (F_{2m-1}, F_{2m}) with H-matrices for a/b and c/d."""
    x0 = x("0")
    Hab, Hcd = H("0", "a", "b"), H("0", "c", "d")
    mab, mcd = x0 * x("a") * x("b"), x0 * x("c") * x("d")
    prev, cur = ONE, ONE + x0 + x0 * x("d")
    for m in range(s + 1):
        odd = Hab * cur - mab * prev
        if m == s:
            return odd
        prev, cur = odd, Hcd * odd - mcd * cur
    raise AssertionError("unreachable")


def matrix_chain(variables: list[str]):
    """Product over i of [[1, 0], [1, x_i]], as a 2x2 nested tuple of LaurentPoly."""
    M = ((ONE, ZERO), (ZERO, ONE))
    for v in variables:
        A = ((ONE, ZERO), (ONE, x(v)))
        M = tuple(
            tuple(M[r][0] * A[0][c] + M[r][1] * A[1][c] for c in range(2)) for r in range(2)
        )
    return M


def chain_sum(variables: list[str], m: int) -> LaurentPoly:
    """F_m = sum_{i=-1}^{m} prod_{j<=i} x_{v_j}."""
    total, prod = ONE, ONE
    for i in range(m + 1):
        prod = prod * x(variables[i])
        total = total + prod
    return total


def tube_recursion_rank2(k: int) -> LaurentPoly:
    """f_{2r+1} = F_T1 f_{2r} - x0 xa xc f_{2r-1}, f_{2r+2} = F_T2 f_{2r+1} - x0 xb xd f_{2r}."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    FT1, FT2 = H("0", "a", "c"), H("0", "b", "d")
    m1, m2 = xpow({"0": 1, "a": 1, "c": 1}), xpow({"0": 1, "b": 1, "d": 1})
    prev, cur = ZERO, ONE
    for i in range(1, k + 1):
        if i % 2:
            prev, cur = cur, FT1 * cur - m1 * prev
        else:
            prev, cur = cur, FT2 * cur - m2 * prev
    return cur
