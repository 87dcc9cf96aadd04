"""Sparse multivariate Laurent polynomials with exact coefficients.

Variables are quiver vertex names ("a", "b", "0", "1", ..., "c", "d").
Coefficients are Python ints; Fractions are tolerated for intermediate
work and collapse back to ints whenever the denominator is 1.
"""
from __future__ import annotations

import heapq
import json
import re
from fractions import Fraction
from functools import lru_cache
from math import factorial
from types import MappingProxyType
from typing import Iterable, Mapping, Union

import numpy as np

Coeff = Union[int, Fraction]
Monomial = tuple  # tuple[tuple[str, int], ...], sorted by var_key, no zero exponents


class NotDivisible(ArithmeticError):
    """Raised when an exact division leaves a remainder."""


@lru_cache(maxsize=None)
def var_key(v: str) -> tuple:
    """Sort key giving the canonical order a, b, 0, 1, ..., c, d, then anything else."""
    if v == "a":
        return (0, 0, "")
    if v == "b":
        return (0, 1, "")
    if v.isdigit():
        return (1, int(v), "")
    if v == "c":
        return (2, 0, "")
    if v == "d":
        return (2, 1, "")
    return (3, 0, v)


def _norm(c: Coeff) -> Coeff:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def make_monomial(exps: Mapping[str, int] | Iterable[tuple[str, int]]) -> Monomial:
    items = exps.items() if isinstance(exps, Mapping) else exps
    acc: dict[str, int] = {}
    for v, e in items:
        acc[v] = acc.get(v, 0) + e
    return tuple(sorted(((v, e) for v, e in acc.items() if e), key=lambda t: var_key(t[0])))


def mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    return make_monomial(m1 + m2)


def mono_pow(m: Monomial, k: int) -> Monomial:
    if k == 0:
        return ()
    return tuple((v, e * k) for v, e in m)


_SLOT_BITS = 48  # exponents must stay below 2^46 in absolute value
_NUMPY_MIN_PRODUCTS = 20_000
_CHUNK_PRODUCTS = 1 << 22
_DENSE_KEYS = 1 << 25


def _reduce_sorted(keys, vals):
    order = np.argsort(keys, kind="stable")
    keys, vals = keys[order], vals[order]
    starts = np.flatnonzero(np.concatenate(([True], keys[1:] != keys[:-1])))
    return keys[starts], np.add.reduceat(vals, starts)


def _mul_int64(a: Mapping, b: Mapping):
    """Product of two integer-coefficient term maps in int64, or None when int64 could overflow."""
    if not all(type(c) is int for c in a.values()) or not all(type(c) is int for c in b.values()):
        return None
    bound = max(map(abs, a.values())) * max(map(abs, b.values())) * min(len(a), len(b))
    if bound >= 1 << 62:
        return None
    vs = sorted({v for m in a for v, _ in m} | {v for m in b for v, _ in m}, key=var_key)
    col = {v: i for i, v in enumerate(vs)}

    def exps(t):
        E = np.zeros((len(t), len(vs)), dtype=np.int64)
        for r, m in enumerate(t):
            for v, e in m:
                E[r, col[v]] = e
        return E

    Ea, Eb = exps(a), exps(b)
    lo_a, lo_b = Ea.min(axis=0), Eb.min(axis=0)
    width = (Ea.max(axis=0) - lo_a) + (Eb.max(axis=0) - lo_b) + 1
    # mixed radix: offsets add without carries because each fits its digit
    strides = np.ones(len(vs), dtype=np.int64)
    total = 1
    for i in range(len(vs) - 1, -1, -1):
        strides[i] = total
        total *= int(width[i])
    if total >= 1 << 62:
        return None
    ka, kb = (Ea - lo_a) @ strides, (Eb - lo_b) @ strides
    ca = np.fromiter(a.values(), dtype=np.int64, count=len(a))
    cb = np.fromiter(b.values(), dtype=np.int64, count=len(b))
    rows = max(1, _CHUNK_PRODUCTS // len(b))
    if total <= _DENSE_KEYS and bound < 1 << 53:
        # every partial sum is an integer below 2^53, so float64 accumulation is exact
        acc = np.zeros(total, dtype=np.float64)
        for s in range(0, len(a), rows):
            k = (ka[s : s + rows, None] + kb[None, :]).ravel()
            c = (ca[s : s + rows, None] * cb[None, :]).ravel()
            acc += np.bincount(k, weights=c.astype(np.float64), minlength=total)
        keys = np.flatnonzero(acc)
        vals = acc[keys].astype(np.int64)
    else:
        parts_k, parts_v = [], []
        for s in range(0, len(a), rows):
            k = (ka[s : s + rows, None] + kb[None, :]).ravel()
            c = (ca[s : s + rows, None] * cb[None, :]).ravel()
            k, c = _reduce_sorted(k, c)
            parts_k.append(k)
            parts_v.append(c)
        keys, vals = _reduce_sorted(np.concatenate(parts_k), np.concatenate(parts_v))
    keep = vals != 0
    keys, vals = keys[keep], vals[keep]
    lo = lo_a + lo_b
    digits = (keys[:, None] // strides[None, :]) % width[None, :] + lo[None, :]
    out = {}
    for row, c in zip(digits.tolist(), vals.tolist()):
        out[tuple((v, e) for v, e in zip(vs, row) if e)] = c
    return out


class LaurentPoly:
    """Immutable map monomial -> nonzero coefficient."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Coeff] | None = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                c = _norm(c)
                if c:
                    clean[m] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    # -- constructors
    @classmethod
    def constant(cls, c: Coeff) -> "LaurentPoly":
        return cls({(): c})

    @classmethod
    def var(cls, v: str, power: int = 1) -> "LaurentPoly":
        return cls({make_monomial({v: power}): 1})

    @classmethod
    def monomial(cls, exps: Mapping[str, int], coeff: Coeff = 1) -> "LaurentPoly":
        return cls({make_monomial(exps): coeff})

    @classmethod
    def coerce(cls, x) -> "LaurentPoly":
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.constant(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to LaurentPoly")

    # -- inspection
    @property
    def terms(self) -> Mapping[Monomial, Coeff]:
        return MappingProxyType(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def variables(self) -> list[str]:
        vs = {v for m in self._terms for v, _ in m}
        return sorted(vs, key=var_key)

    def coefficient(self, exps: Mapping[str, int] | Monomial) -> Coeff:
        m = exps if isinstance(exps, tuple) else make_monomial(exps)
        return self._terms.get(m, 0)

    def constant_term(self) -> Coeff:
        return self._terms.get((), 0)

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self._terms.values())

    def exponent_bounds(self) -> tuple[dict[str, int], dict[str, int]]:
        """Per-variable minimum and maximum exponent over the support (absent counts as 0)."""
        vs = self.variables()
        lo = {v: 0 for v in vs}
        hi = {v: 0 for v in vs}
        first = True
        for m in self._terms:
            d = dict(m)
            for v in vs:
                e = d.get(v, 0)
                if first:
                    lo[v] = hi[v] = e
                else:
                    lo[v] = min(lo[v], e)
                    hi[v] = max(hi[v], e)
            first = False
        return lo, hi

    # -- arithmetic
    def __add__(self, other):
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = _norm(s)
            else:
                out.pop(m, None)
        return LaurentPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return LaurentPoly._raw({})
            return LaurentPoly._raw({m: _norm(c * other) for m, c in self._terms.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        a, b = self._terms, other._terms
        if len(a) * len(b) < 64:
            return self._mul_small(a, b)
        if len(a) * len(b) >= _NUMPY_MIN_PRODUCTS:
            fast = _mul_int64(a, b)
            if fast is not None:
                return LaurentPoly._raw(fast)
        # Kronecker packing: biased exponents in fixed-width slots of one int,
        # so a monomial product is a single integer addition.
        vs = sorted({v for m in a for v, _ in m} | {v for m in b for v, _ in m}, key=var_key)
        slot = {v: i for i, v in enumerate(vs)}
        bias = 1 << (_SLOT_BITS - 2)
        base = sum(bias << (_SLOT_BITS * i) for i in range(len(vs)))

        def pack(m):
            k = base
            for v, e in m:
                k += e << (_SLOT_BITS * slot[v])
            return k

        pa = [(pack(m), c) for m, c in a.items()]
        pb = [(pack(m), c) for m, c in b.items()]
        acc: dict = {}
        get = acc.get
        for k2, c2 in pb:
            k2 -= base
            for k1, c1 in pa:
                k = k1 + k2
                acc[k] = get(k, 0) + c1 * c2
        mask = (1 << _SLOT_BITS) - 1
        out = {}
        for k, c in acc.items():
            if not c:
                continue
            mono = []
            for i, v in enumerate(vs):
                e = ((k >> (_SLOT_BITS * i)) & mask) - bias
                if e:
                    mono.append((v, e))
            out[tuple(mono)] = _norm(c)
        return LaurentPoly._raw(out)

    @staticmethod
    def _mul_small(a, b):
        out: dict = {}
        for m2, c2 in b.items():
            for m1, c1 in a.items():
                key = mono_mul(m1, m2)
                out[key] = out.get(key, 0) + c1 * c2
        return LaurentPoly({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if self.is_monomial():
                (m, c), = self._terms.items()
                return LaurentPoly({mono_pow(m, k): Fraction(1, 1) / Fraction(c) ** (-k)})
            raise ValueError("negative power of a non-monomial")
        result = LaurentPoly.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # -- transforms
    def map_monomials(self, fn) -> "LaurentPoly":
        out: dict = {}
        for m, c in self._terms.items():
            k = fn(m)
            out[k] = out.get(k, 0) + c
        return LaurentPoly(out)

    def rename(self, mapping: Mapping[str, str]) -> "LaurentPoly":
        return self.map_monomials(lambda m: make_monomial((mapping.get(v, v), e) for v, e in m))

    def evaluate(self, values: Mapping[str, Coeff]) -> Coeff:
        total: Coeff = 0
        for m, c in self._terms.items():
            t = Fraction(c)
            for v, e in m:
                t *= Fraction(values[v]) ** e
            total += t
        return _norm(Fraction(total))

    def substitute(self, assignment: Mapping[str, object]) -> "RationalFunction":
        return substitute(self, assignment)

    # -- rendering
    def sorted_terms(self) -> list[tuple[Monomial, Coeff]]:
        vs = self.variables()

        def key(item):
            d = dict(item[0])
            vec = tuple(d.get(v, 0) for v in vs)
            return (vec, sum(vec))

        return sorted(self._terms.items(), key=key)

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for i, (m, c) in enumerate(self.sorted_terms()):
            neg = c < 0
            a = -c if neg else c
            body = "*".join(_render_var(v, e) for v, e in m)
            if not body:
                core = str(a)
            elif a == 1:
                core = body
            else:
                core = f"{a}*{body}"
            if i == 0:
                parts.append(("-" if neg else "") + core)
            else:
                parts.append((" - " if neg else " + ") + core)
        return "".join(parts)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"LaurentPoly({self.to_text()!r})"

    def to_json_obj(self) -> list[dict]:
        return [{"exponents": dict(m), "coeff": str(c)} for m, c in self.sorted_terms()]

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @classmethod
    def from_json(cls, data) -> "LaurentPoly":
        if isinstance(data, str):
            data = json.loads(data)
        out: dict = {}
        for term in data:
            m = make_monomial({str(k): int(v) for k, v in term["exponents"].items()})
            c = Fraction(term["coeff"])
            out[m] = out.get(m, 0) + c
        return cls(out)

    @classmethod
    def from_text(cls, text: str) -> "LaurentPoly":
        return parse_laurent(text)


def _render_var(v: str, e: int) -> str:
    return f"x_{v}" if e == 1 else f"x_{v}^{e}"


_TERM_RE = re.compile(
    r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*(?:\*\s*)?)?((?:x_[A-Za-z0-9]+(?:\^-?\d+)?\s*\*?\s*)*)"
)
_VAR_RE = re.compile(r"x_([A-Za-z0-9]+)(?:\^(-?\d+))?")


def parse_laurent(text: str) -> LaurentPoly:
    """Inverse of LaurentPoly.to_text."""
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial text")
    if s == "0":
        return LaurentPoly()
    out: dict = {}
    pos = 0
    first = True
    while pos < len(s):
        mt = _TERM_RE.match(s, pos)
        if not mt or mt.end() == pos:
            raise ValueError(f"cannot parse polynomial at {s[pos:]!r}")
        sign, coeff, body = mt.group(1), mt.group(2), mt.group(3)
        if not first and sign is None:
            raise ValueError(f"missing operator before {s[pos:]!r}")
        if coeff is None and not body.strip():
            raise ValueError(f"empty term at {s[pos:]!r}")
        c = Fraction(coeff) if coeff else Fraction(1)
        if sign == "-":
            c = -c
        exps: dict[str, int] = {}
        body = body.strip().rstrip("*")
        if body:
            for tok in body.split("*"):
                tok = tok.strip()
                mv = _VAR_RE.fullmatch(tok)
                if not mv:
                    raise ValueError(f"bad variable token {tok!r}")
                exps[mv.group(1)] = exps.get(mv.group(1), 0) + int(mv.group(2) or 1)
        m = make_monomial(exps)
        out[m] = out.get(m, 0) + c
        pos = mt.end()
        first = False
    return LaurentPoly(out)


def render_fraction(p: LaurentPoly) -> str:
    """Render with an explicit monomial denominator, e.g. ``(1 + x_0) / x_a``."""
    lo, _ = p.exponent_bounds()
    den = {v: -e for v, e in lo.items() if e < 0}
    if not den:
        return p.to_text()
    num = p * LaurentPoly.monomial(den)
    dtext = "*".join(_render_var(v, e) for v, e in make_monomial(den))
    return f"({num.to_text()}) / {dtext}"


def parse_fraction(text: str) -> LaurentPoly:
    s = text.strip()
    if " / " in s:
        num, den = s.rsplit(" / ", 1)
        num = num.strip()
        if not (num.startswith("(") and num.endswith(")")):
            raise ValueError("numerator must be parenthesised")
        d = parse_laurent(den)
        if not d.is_monomial():
            raise ValueError("denominator must be a monomial")
        return parse_laurent(num[1:-1]) * d ** -1
    return parse_laurent(s)


ONE = LaurentPoly.constant(1)
ZERO = LaurentPoly()


def x(v: str, power: int = 1) -> LaurentPoly:
    return LaurentPoly.var(v, power)


def xpow(exps: Mapping[str, int]) -> LaurentPoly:
    return LaurentPoly.monomial(exps)


def mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p * q


def evaluate_ones(p: LaurentPoly) -> Coeff:
    return _norm(sum((Fraction(c) for c in p._terms.values()), Fraction(0)))


def gen_binomial(n: int, k: int) -> int:
    """n(n-1)...(n-k+1)/k!, valid for negative n."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    num = 1
    for i in range(k):
        num *= n - i
    return num // factorial(k)


# ---------------------------------------------------------------- division


def divide_exact(num: LaurentPoly, den: LaurentPoly) -> LaurentPoly:
    """Exact quotient num/den or NotDivisible."""
    if den.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if num.is_zero():
        return ZERO
    if den.is_monomial():
        (dm, dc), = den.items()
        inv = mono_pow(dm, -1)
        out = {}
        for m, c in num.items():
            out[mono_mul(m, inv)] = _exact_coeff_div(c, dc)
        return LaurentPoly(out)

    vs = sorted(set(num.variables()) | set(den.variables()), key=var_key)

    def vec(m):
        d = dict(m)
        return tuple(d.get(v, 0) for v in vs)

    nterms = {vec(m): c for m, c in num.items()}
    dterms = [(vec(m), c) for m, c in den.items()]
    dlead, dlc = max(dterms)
    nlo = [min(k[i] for k in nterms) for i in range(len(vs))]
    nhi = [max(k[i] for k in nterms) for i in range(len(vs))]
    dlo = [min(k[i] for k, _ in dterms) for i in range(len(vs))]
    dhi = [max(k[i] for k, _ in dterms) for i in range(len(vs))]
    lo = [a - b for a, b in zip(nlo, dlo)]
    hi = [a - b for a, b in zip(nhi, dhi)]
    if any(l > h for l, h in zip(lo, hi)):
        raise NotDivisible("exponent box of the quotient is empty")

    rem = dict(nterms)
    heap = [tuple(-e for e in k) for k in rem]
    heapq.heapify(heap)
    quot = {}
    while rem:
        while True:
            top = tuple(-e for e in heapq.heappop(heap))
            if top in rem:
                break
        c = rem[top]
        qv = tuple(a - b for a, b in zip(top, dlead))
        if any(e < l or e > h for e, l, h in zip(qv, lo, hi)):
            raise NotDivisible("quotient term leaves the admissible exponent box")
        qc = _exact_coeff_div(c, dlc)
        quot[qv] = qc
        for dv, dc in dterms:
            key = tuple(a + b for a, b in zip(qv, dv))
            s = rem.get(key, 0) - qc * dc
            if s:
                if key not in rem:
                    heapq.heappush(heap, tuple(-e for e in key))
                rem[key] = s
            else:
                rem.pop(key, None)
    return LaurentPoly({make_monomial(zip(vs, k)): c for k, c in quot.items()})


def _exact_coeff_div(c: Coeff, d: Coeff) -> Coeff:
    if isinstance(c, int) and isinstance(d, int):
        q, r = divmod(c, d)
        if r:
            raise NotDivisible(f"coefficient {c} not divisible by {d}")
        return q
    return _norm(Fraction(c) / Fraction(d))


# -------------------------------------------------------- rational functions


class RationalFunction:
    """numerator / prod(factor ** power); factors kept unexpanded."""

    __slots__ = ("numerator", "factors")

    def __init__(self, numerator, factors: Iterable[tuple[LaurentPoly, int]] = ()):
        self.numerator = LaurentPoly.coerce(numerator)
        merged: dict[LaurentPoly, int] = {}
        for f, k in factors:
            f = LaurentPoly.coerce(f)
            if f.is_zero():
                raise ZeroDivisionError("zero denominator factor")
            if k:
                merged[f] = merged.get(f, 0) + k
        # monomial factors are units: fold them into the numerator
        num = self.numerator
        rest = []
        for f, k in merged.items():
            if k == 0:
                continue
            if f.is_monomial():
                num = num * f ** (-k)
            elif k < 0:
                num = num * f ** (-k)
            else:
                rest.append((f, k))
        self.numerator = num
        self.factors = tuple(rest)

    @classmethod
    def from_poly(cls, p) -> "RationalFunction":
        return cls(p)

    @property
    def denominator(self) -> LaurentPoly:
        d = ONE
        for f, k in self.factors:
            d = d * f ** k
        return d

    def __mul__(self, other):
        if not isinstance(other, RationalFunction):
            other = RationalFunction(other)
        return RationalFunction(self.numerator * other.numerator, self.factors + other.factors)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k >= 0:
            return RationalFunction(self.numerator ** k, [(f, e * k) for f, e in self.factors])
        if not self.numerator.is_monomial():
            return RationalFunction(ONE, [(self.numerator, -k)]) * RationalFunction(
                self.denominator ** (-k)
            )
        return RationalFunction(self.numerator ** k, [(f, e * k) for f, e in self.factors])

    def __add__(self, other):
        if not isinstance(other, RationalFunction):
            other = RationalFunction(other)
        a, b = dict(self.factors), dict(other.factors)
        common = {f: max(a.get(f, 0), b.get(f, 0)) for f in set(a) | set(b)}

        def lift(num, own):
            out = num
            for f, k in common.items():
                extra = k - own.get(f, 0)
                if extra:
                    out = out * f ** extra
            return out

        return RationalFunction(lift(self.numerator, a) + lift(other.numerator, b), common.items())

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.numerator, self.factors)

    def __sub__(self, other):
        if not isinstance(other, RationalFunction):
            other = RationalFunction(other)
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            other = RationalFunction(other)
        return self.numerator * other.denominator == other.numerator * self.denominator

    __hash__ = None

    def __repr__(self):
        if not self.factors:
            return f"RationalFunction({self.numerator})"
        den = " * ".join(f"({f})^{k}" for f, k in self.factors)
        return f"RationalFunction(({self.numerator}) / {den})"


def to_polynomial(r: RationalFunction) -> LaurentPoly:
    num = r.numerator
    for f, k in r.factors:
        for _ in range(k):
            num = divide_exact(num, f)
    return num


def _as_rational(val) -> RationalFunction:
    if isinstance(val, RationalFunction):
        return val
    return RationalFunction(LaurentPoly.coerce(val))


def substitute(p: LaurentPoly, assignment: Mapping[str, object]) -> RationalFunction:
    """Simultaneous substitution x_v -> assignment[v]; unassigned variables stay put.

    Values may be LaurentPoly, RationalFunction or ints.  The result shares a
    single factored denominator.
    """
    if p.is_zero():
        return RationalFunction(ZERO)
    vals = {v: _as_rational(assignment[v]) for v in p.variables() if v in assignment}
    lo, hi = p.exponent_bounds()
    # common denominator: per variable, F_v^{max(hi,0)} * g_v^{max(-lo,0)} (g_v non-unit)
    den_factors: list[tuple[LaurentPoly, int]] = []
    plan = {}
    for v, r in vals.items():
        A = max(hi[v], 0)
        unit = r.numerator.is_monomial()
        if r.numerator.is_zero():
            if lo[v] < 0:
                raise ZeroDivisionError(f"x_{v} mapped to 0 but appears with negative exponent")
            B = 0
        else:
            B = 0 if unit else max(-lo[v], 0)
        plan[v] = (r, A, B, unit)
        den_factors.extend((f, k * A) for f, k in r.factors)
        if B:
            den_factors.append((r.numerator, B))

    cache: dict[tuple[str, int], LaurentPoly] = {}

    def part(v: str, e: int) -> LaurentPoly:
        key = (v, e)
        if key not in cache:
            r, A, B, unit = plan[v]
            g = r.numerator
            if unit:
                out = g ** e
            else:
                out = g ** (e + B)
            for f, k in r.factors:
                out = out * f ** (k * (A - e))
            cache[key] = out
        return cache[key]

    total: dict = {}
    for m, c in p.items():
        term = LaurentPoly({(): c})
        kept = []
        for v, e in m:
            if v in plan:
                term = term * part(v, e)
            else:
                kept.append((v, e))
        # variables that appear with exponent 0 in this term still need their lift
        present = {v for v, _ in m}
        for v in plan:
            if v not in present:
                term = term * part(v, 0)
        if kept:
            term = term * LaurentPoly({tuple(kept): 1})
        for tm, tc in term.items():
            total[tm] = total.get(tm, 0) + tc
    return RationalFunction(LaurentPoly(total), den_factors)


def H(xv: str, yv: str, zv: str) -> LaurentPoly:
    """1 + x + xy + xz + xyz."""
    X, Y, Z = LaurentPoly.var(xv), LaurentPoly.var(yv), LaurentPoly.var(zv)
    return ONE + X + X * Y + X * Z + X * Y * Z
