"""Cohomology rings H*(G; k) from a free resolution of k.

Cochains on P_n are invariant functionals, stored as their values on the
generators of P_n.  A class has canonical coordinates in an rref basis of
cocycles modulo coboundaries.  Products use lifts: for classes x, y of
degrees n, m, the product x.y is represented by the cochain x o y^_{n+m},
where y^ : P -> S^m P is a chain map covering y.

Classes can also be written as polynomials in the degree-one basis classes,
named x0, x1, ... (aliases x, y, z), with `a` the adjoined root of the field.
Classes outside the subring they generate are given by coordinates.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import linalg
from .complexes import DenseMap, extend
from .errors import (DimensionMismatch, Mismatch, NonHomogeneous, ParseError, TruncationUnderflow,
                     UnknownGenerator)
from .group import invariant_functional
from .resolutions import Resolution

ALIASES = ("x", "y", "z")


class Cohomology:
    """H^n(G; k) for 0 <= n <= top of the resolution."""

    def __init__(self, P: Resolution):
        if P.base.dim != 1:
            raise Mismatch("cohomology ring needs a resolution of k")
        self.P, self.F, self.G = P, P.F, P.G
        self.top = P.top
        self._spaces = {}
        self._lifts = {}

    # -- additive structure ----------------------------------------------

    def space(self, n) -> linalg.QuotientSpace:
        if n < 0 or n > self.top:
            raise TruncationUnderflow(f"degree {n} outside 0..{self.top}")
        if n not in self._spaces:
            F, P = self.F, self.P
            r = P.rank(n)
            Z = linalg.kernel_basis(F, P.coboundary(n)) if n < self.top else None
            if Z is None:
                raise TruncationUnderflow(f"need degree {n + 1} of the resolution for cocycles in degree {n}")
            B = P.coboundary(n - 1).T if n > 0 else np.zeros((0, r), dtype=np.int64)
            self._spaces[n] = linalg.QuotientSpace(F, Z, B, r)
        return self._spaces[n]

    def dim(self, n) -> int:
        return self.space(n).dim

    def dims(self, hi=None):
        hi = self.top - 1 if hi is None else hi
        return [self.dim(n) for n in range(hi + 1)]

    def basis(self, n):
        """Cochain representatives (rows) of the canonical basis."""
        return self.space(n).basis

    def cls(self, n, coords) -> "CohClass":
        return CohClass(self, n, coords)

    def zero(self, n):
        return CohClass(self, n, np.zeros(self.dim(n), dtype=np.int64))

    def one(self):
        return CohClass(self, 0, [1])

    def basis_class(self, n, j):
        c = np.zeros(self.dim(n), dtype=np.int64)
        c[j] = 1
        return CohClass(self, n, c)

    def all_classes(self, n, nonzero=True):
        q, d = self.F.q, self.dim(n)
        for tup in itertools.product(range(q), repeat=d):
            if nonzero and not any(tup):
                continue
            yield CohClass(self, n, tup)

    def from_cochain(self, n, v) -> "CohClass":
        v = np.asarray(v, dtype=np.int64)
        E = self.P.coboundary(n)
        if E.size and np.any(self.F.matmul(E, v[:, None])):
            raise Mismatch("cochain is not a cocycle")
        return CohClass(self, n, self.space(n).coords(v))

    def chain_rep(self, x: "CohClass"):
        return self.F.matmul(x.coords[None, :], self.basis(x.degree))[0] if x.coords.size else \
            np.zeros(self.P.rank(x.degree), dtype=np.int64)

    def functional(self, x: "CohClass"):
        """Full row vector P_n -> k of the representative."""
        return invariant_functional(self.P.cx.module(x.degree), self.chain_rep(x))

    # -- lifts and products ----------------------------------------------

    def _basis_lift(self, n, j):
        key = (n, j)
        if key not in self._lifts:
            vals = self.basis(n)[j][None, :]
            self._lifts[key] = extend(self.P.cx, self.P, -n, None, bottom=vals, hi=self.top)
        return self._lifts[key]

    def lift(self, x: "CohClass") -> DenseMap:
        """Chain map P -> S^n P (a degree -n map) covering the representative of x."""
        F, P, n = self.F, self.P, x.degree
        comps = {}
        terms = [(int(c), self._basis_lift(n, j)) for j, c in enumerate(x.coords) if c]
        for i in range(P.cx.lo, self.top + 1):
            shape = (P.cx.dim(i - n) if i - n >= 0 else 0, P.cx.dim(i))
            comps[i] = F.lincomb([c for c, _ in terms], [m.comps[i] for _, m in terms]) if terms \
                else np.zeros(shape, dtype=np.int64)
        return DenseMap(P.cx, P.cx, -n, comps, self.top)

    def cochain_lift(self, n, v) -> DenseMap:
        """Lift of an arbitrary cocycle given on generators."""
        return extend(self.P.cx, self.P, -n, None, bottom=np.asarray(v)[None, :], hi=self.top)

    def right_mult_matrix(self, y: "CohClass", m: int):
        """Matrix of u -> u.y from H^m to H^{m+|y|} in basis coordinates."""
        n = y.degree
        if m + n > self.top - 1:
            raise TruncationUnderflow(f"product degree {m + n} needs a longer resolution")
        F = self.F
        lift = self.lift(y)
        Pm = self.P.cx.module(m)
        gens = self.P.gens(m + n)
        img = lift.comps[m + n][:, gens]  # P_m x r_{m+n}
        B = self.basis(m)  # d_m x r_m
        cochains = F.matmul(B[:, Pm.orbits[1]], img) if B.size else np.zeros((0, len(gens)), dtype=np.int64)
        qs = self.space(m + n)
        if cochains.shape[0] == 0:
            return np.zeros((qs.dim, 0), dtype=np.int64)
        return qs.coords(cochains).T

    def cup(self, x: "CohClass", y: "CohClass") -> "CohClass":
        M = self.right_mult_matrix(y, x.degree)
        coords = self.F.matmul(M, x.coords[:, None])[:, 0] if M.size else np.zeros(M.shape[0], dtype=np.int64)
        return CohClass(self, x.degree + y.degree, coords)

    def cup_via_diagonal(self, x: "CohClass", y: "CohClass") -> "CohClass":
        """(x (x) y) o Delta on P_{n+m}; agrees with cup up to the sign (-1)^{nm}."""
        F, P = self.F, self.P
        n, m = x.degree, y.degree
        D = P.diagonal()
        cx = D.tgt
        off, a, b = cx.block_lookup(n + m)[(n, m)]
        img = D.on_gens(n + m)[off:off + a * b]
        fx, fy = self.functional(x), self.functional(y)
        w = F.matmul(np.asarray([np.outer(fx, fy).reshape(-1) % F.q if F.m == 1 else
                                 F.mul(fx[:, None], fy[None, :]).reshape(-1)]), img)[0]
        return self.from_cochain(n + m, w)

    # -- ideals ------------------------------------------------------------

    def ideal_member(self, target: "CohClass", z: "CohClass"):
        """(True, u) with u.z = target, or (False, None)."""
        m = target.degree - z.degree
        if m < 0:
            return (not np.any(target.coords), None if np.any(target.coords) else None)
        M = self.right_mult_matrix(z, m)
        if M.shape[1] == 0:
            return (not np.any(target.coords), self.zero(m) if not np.any(target.coords) else None)
        u = linalg.solve(self.F, M, target.coords)
        if u is None:
            return False, None
        return True, CohClass(self, m, u)

    def annihilator_basis(self, z: "CohClass", d: int):
        """Basis (rref) of {u in H^d : u.z = 0}."""
        M = self.right_mult_matrix(z, d)
        if M.shape[1] == 0:
            return []
        K = linalg.kernel_basis(self.F, M)
        return [CohClass(self, d, row) for row in K]

    def ideal_quotient(self, n, z: "CohClass"):
        """QuotientSpace H^n / z.H^{n-|z|} in coordinates."""
        m = n - z.degree
        sub = self.right_mult_matrix(z, m).T if m >= 0 else np.zeros((0, self.dim(n)), dtype=np.int64)
        return linalg.QuotientSpace(self.F, np.eye(self.dim(n), dtype=np.int64), sub, self.dim(n))

    # -- generators and names ------------------------------------------------

    @cached_property
    def generators(self):
        """Canonical basis of H^1; these are the named generators."""
        return [self.basis_class(1, j) for j in range(self.dim(1))] if self.top > 1 else []

    def generator_names(self):
        k = len(self.generators)
        return [ALIASES[i] if k <= len(ALIASES) else f"x{i}" for i in range(k)]

    def monomials(self, n):
        """Exponent tuples of total degree n, in descending lex order."""
        degs = [g.degree for g in self.generators]

        def rec(i, left):
            if i == len(degs):
                if left == 0:
                    yield ()
                return
            for e in range(left // degs[i], -1, -1):
                for rest in rec(i + 1, left - e * degs[i]):
                    yield (e,) + rest

        return list(rec(0, n))

    def monomial_class(self, exps) -> "CohClass":
        out = self.one()
        for g, e in zip(self.generators, exps):
            for _ in range(e):
                out = self.cup(out, g)
        return out

    def monomial_basis(self, n):
        """Greedy canonical basis of H^n by monomials; None if they do not span."""
        if n in getattr(self, "_mono", {}):
            return self._mono[n]
        self.__dict__.setdefault("_mono", {})
        chosen, rows = [], []
        d = self.dim(n)
        for e in self.monomials(n):
            if len(chosen) == d:
                break
            c = self.monomial_class(e)
            trial = np.vstack(rows + [c.coords]) if rows else c.coords[None, :]
            if linalg.rank(self.F, trial) > len(rows):
                rows.append(c.coords)
                chosen.append(e)
        out = (chosen, np.vstack(rows).T) if len(chosen) == d and d else None
        self._mono[n] = out
        return out

    def format(self, x: "CohClass") -> str:
        F = self.F
        if x.is_zero():
            return "0"
        if x.degree == 0:
            return F.format(x.coords[0])
        mb = self.monomial_basis(x.degree)
        if mb is None:
            return self.format_coords(x)
        mons, M = mb
        c = linalg.solve(F, M, x.coords)
        names = self.generator_names()
        terms = []
        for e, coef in zip(mons, c):
            if not coef:
                continue
            factors = []
            for name, k in zip(names, e):
                if k:
                    factors.append(name if k == 1 else f"{name}^{k}")
            mono = "*".join(factors)
            terms.append(mono if coef == 1 else f"{F.format(coef)}*{mono}")
        return "+".join(terms)

    def format_coords(self, x: "CohClass") -> str:
        return f"{x.degree}:" + ",".join(str(int(c)) for c in x.coords)

    def parse(self, text: str, degree=None) -> "CohClass":
        return parse_class(text, self, degree)

    def parse_coords(self, text: str) -> "CohClass":
        return parse_coords(text, self)


class CohClass:
    __slots__ = ("ring", "degree", "coords")

    def __init__(self, ring: Cohomology, degree: int, coords):
        coords = np.asarray(coords, dtype=np.int64).reshape(-1)
        if coords.size != ring.dim(degree):
            raise DimensionMismatch(f"H^{degree} has dimension {ring.dim(degree)}, got {coords.size} coordinates")
        self.ring, self.degree, self.coords = ring, degree, coords

    def is_zero(self):
        return not np.any(self.coords)

    def _same(self, other):
        if other.ring is not self.ring or other.degree != self.degree:
            raise Mismatch("classes of different degrees or rings")

    def __add__(self, other):
        self._same(other)
        return CohClass(self.ring, self.degree, self.ring.F.add(self.coords, other.coords))

    def __sub__(self, other):
        self._same(other)
        return CohClass(self.ring, self.degree, self.ring.F.sub(self.coords, other.coords))

    def __neg__(self):
        return CohClass(self.ring, self.degree, self.ring.F.neg(self.coords))

    def scale(self, c):
        return CohClass(self.ring, self.degree, self.ring.F.scale(c, self.coords))

    def __mul__(self, other):
        if isinstance(other, CohClass):
            return self.ring.cup(self, other)
        return self.scale(other)

    def __eq__(self, other):
        return (isinstance(other, CohClass) and other.ring is self.ring and other.degree == self.degree
                and np.array_equal(other.coords, self.coords))

    def __hash__(self):
        return hash((self.degree, tuple(self.coords.tolist())))

    def __str__(self):
        return self.ring.format(self)

    def __repr__(self):
        return f"CohClass({self.ring.format_coords(self)})"

    def key(self):
        return self.ring.format_coords(self)


def coh_basis(ring: Cohomology, n):
    return [ring.basis_class(n, j) for j in range(ring.dim(n))]


def chain_rep(x: CohClass):
    return x.ring.chain_rep(x)


def cup(x: CohClass, y: CohClass) -> CohClass:
    return x.ring.cup(x, y)


def ideal_member(target: CohClass, z: CohClass):
    return target.ring.ideal_member(target, z)


def annihilator_basis(z: CohClass, d: int):
    return z.ring.annihilator_basis(z, d)


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^()]))")


def _tokenize(text):
    pos, out = 0, []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, ("number", "name", "operator"))
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Poly:
    """Sparse polynomial: exponent tuple -> field code."""

    def __init__(self, F, nv, terms=None):
        self.F, self.nv = F, nv
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def const(cls, F, nv, c):
        return cls(F, nv, {(0,) * nv: int(c)})

    def __add__(self, o):
        t = dict(self.terms)
        for k, v in o.terms.items():
            t[k] = int(self.F.add(t.get(k, 0), v))
        return _Poly(self.F, self.nv, t)

    def __neg__(self):
        return _Poly(self.F, self.nv, {k: int(self.F.neg(v)) for k, v in self.terms.items()})

    def __mul__(self, o):
        t = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in o.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                t[k] = int(self.F.add(t.get(k, 0), self.F.mul(v1, v2)))
        return _Poly(self.F, self.nv, t)

    def power(self, e):
        out = _Poly.const(self.F, self.nv, 1)
        for _ in range(e):
            out = out * self
        return out


class _Parser:
    def __init__(self, text, ring: Cohomology):
        self.text, self.ring = text, ring
        self.toks = _tokenize(text)
        self.i = 0
        self.F = ring.F
        self.names = {}
        k = len(ring.generators)
        for j in range(k):
            self.names[f"x{j}"] = j
        for j, a in enumerate(ALIASES[:k]):
            self.names[a] = j
        self.nv = k

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, value):
        t = self.take()
        if t[1] != value:
            raise ParseError(f"unexpected {t[1] or 'end of input'!r}", t[2], (repr(value),))
        return t

    def parse(self):
        p = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise ParseError(f"unexpected {t[1]!r}", t[2], ("'+'", "'-'", "'*'", "end of input"))
        return p

    def expr(self):
        p = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p + (-q)
        return p

    def term(self):
        if self.peek()[1] == "-":
            self.take()
            return -self.term()
        p = self.factor()
        while self.peek()[1] == "*":
            self.take()
            p = p * self.factor()
        return p

    def factor(self):
        p = self.atom()
        if self.peek()[1] == "^":
            self.take()
            t = self.take()
            if t[0] != "num":
                raise ParseError(f"unexpected {t[1] or 'end of input'!r}", t[2], ("exponent",))
            p = p.power(int(t[1]))
        return p

    def atom(self):
        kind, val, pos = self.take()
        F = self.F
        if kind == "num":
            return _Poly.const(F, self.nv, F.from_int(int(val)))
        if kind == "name":
            if val == "a":
                if F.m == 1:
                    raise UnknownGenerator(f"'a' needs an extension field (position {pos})")
                return _Poly.const(F, self.nv, F.alpha)
            if val not in self.names:
                raise UnknownGenerator(f"unknown generator {val!r} at position {pos}")
            e = [0] * self.nv
            e[self.names[val]] = 1
            return _Poly(F, self.nv, {tuple(e): 1})
        if val == "(":
            p = self.expr()
            self.expect(")")
            return p
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos, ("number", "generator", "'('"))


def parse_class(text: str, ring: Cohomology, degree=None) -> CohClass:
    """Parse a homogeneous polynomial in the ring generators, or "n:c0,c1,..." coordinates."""
    if ":" in text:
        x = parse_coords(text, ring)
        if degree is not None and degree != x.degree:
            raise NonHomogeneous(f"expression has degree {x.degree}, expected {degree}")
        return x
    poly = _Parser(text, ring).parse()
    gdeg = [g.degree for g in ring.generators]
    degs = {sum(e * d for e, d in zip(k, gdeg)) for k in poly.terms}
    if len(degs) > 1:
        raise NonHomogeneous(f"terms of degrees {sorted(degs)}")
    if not degs:
        if degree is None:
            raise NonHomogeneous("the zero expression has no degree; pass one explicitly")
        return ring.zero(degree)
    n = degs.pop()
    if degree is not None and degree != n:
        raise NonHomogeneous(f"expression has degree {n}, expected {degree}")
    out = ring.zero(n)
    for k, c in sorted(poly.terms.items()):
        out = out + ring.monomial_class(k).scale(c)
    return out


def parse_coords(text: str, ring: Cohomology) -> CohClass:
    """Parse "n:c0,c1,..." with field codes as coefficients."""
    m = re.fullmatch(r"\s*(\d+)\s*:\s*([\d,\s]*)", text)
    if not m:
        raise ParseError("coordinates must look like n:c0,c1,...", 0, ("n:c0,...",))
    n = int(m.group(1))
    vals = [int(c) for c in m.group(2).split(",") if c.strip()]
    if any(v >= ring.F.q for v in vals):
        raise ParseError("coefficient outside the field", text.index(":") + 1, (f"codes below {ring.F.q}",))
    return CohClass(ring, n, vals)


@dataclass(frozen=True)
class RingConfig:
    group: str = "C2xC2"
    field: str = "2"
    resolution: str = "minimal"
    cap: int = 6
