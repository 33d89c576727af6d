"""Independent reference computations used by the tests.

Nothing here imports prodcoh: each oracle works from first principles with
plain Python integers so that it can disagree with the library.
"""

from __future__ import annotations

import itertools
from math import comb

# ---------------------------------------------------------------- GF(q), q = p or 4


class SmallField:
    """GF(p) or GF(4) = GF(2)[t]/(t^2+t+1); elements are ints, t is 2 for GF(4)."""

    def __init__(self, q):
        self.q = q
        self.p = 2 if q == 4 else q

    def add(self, a, b):
        return a ^ b if self.p == 2 else (a + b) % self.p

    def neg(self, a):
        return a if self.p == 2 else (-a) % self.p

    def mul(self, a, b):
        if self.q != 4:
            return (a * b) % self.p
        # carry-less product reduced by t^2 = t + 1
        r = 0
        for i in range(2):
            if b >> i & 1:
                r ^= a << i
        if r & 4:
            r ^= 0b111
        return r

    def inv(self, a):
        return next(b for b in range(1, self.q) if self.mul(a, b) == 1)

    def frob(self, a):
        return self.mul(a, a) if self.p == 2 else a


def in_span(F: SmallField, rows, target):
    """Whether target lies in the span of rows (lists over F)."""
    basis = []  # (pivot, row)
    for r in list(rows) + [None]:
        v = list(target) if r is None else list(r)
        for piv, b in basis:
            if v[piv]:
                c = v[piv]
                v = [F.add(x, F.neg(F.mul(c, y))) for x, y in zip(v, b)]
        nz = [i for i, x in enumerate(v) if x]
        if r is None:
            return not nz
        if nz:
            piv = nz[0]
            inv = F.inv(v[piv])
            basis.append((piv, [F.mul(inv, x) for x in v]))
    return True


# ---------------------------------------------------------------- F[x, y] for C2 x C2


def monomials(n):
    """x^(n-j) y^j for j = 0..n."""
    return [(n - j, j) for j in range(n + 1)]


def poly_mul(F, f, g):
    out = {}
    for (a, b), c in f.items():
        for (a2, b2), c2 in g.items():
            k = (a + a2, b + b2)
            out[k] = F.add(out.get(k, 0), F.mul(c, c2))
    return {k: v for k, v in out.items() if v}


def sq_monomial(a, b, k):
    """Sq^k(x^a y^b) over GF(2) by the Cartan formula."""
    out = {}
    for i in range(k + 1):
        j = k - i
        if comb(a, i) % 2 and comb(b, j) % 2:
            key = (a + i, b + j)
            out[key] = out.get(key, 0) ^ 1
    return {k: v for k, v in out.items() if v}


def top_square(F, f, n):
    """Semilinear Sq^{n-1} of a degree-n polynomial f (dict monomial -> coefficient)."""
    out = {}
    for (a, b), c in f.items():
        c2 = F.frob(c)
        for key, v in sq_monomial(a, b, n - 1).items():
            out[key] = F.add(out.get(key, 0), F.mul(c2, v))
    return {k: v for k, v in out.items() if v}


def divides(F, f, t, n, m):
    """Whether t (degree m) is f (degree n) times some polynomial."""
    rows = []
    for mono in monomials(m - n):
        prod = poly_mul(F, f, {mono: 1})
        rows.append([prod.get(k, 0) for k in monomials(m)])
    return in_span(F, rows, [t.get(k, 0) for k in monomials(m)])


def c2xc2_productive(F, f, n):
    """Productivity of f in F[x, y] = H*(C2 x C2; F) via the square criterion."""
    return divides(F, f, top_square(F, f, n), n, 2 * n - 1)


def poly_from_coeffs(n, coeffs):
    return {m: c for m, c in zip(monomials(n), coeffs) if c}


# ---------------------------------------------------------------- cyclic p-groups


class TruncatedPoly:
    """A = GF(p)[s]/s^N, the group algebra of a cyclic group of order N = p^k."""

    def __init__(self, p, N):
        self.p, self.N = p, N
        self.elements = list(itertools.product(range(p), repeat=N))

    def mul(self, a, b):
        out = [0] * self.N
        for i, x in enumerate(a):
            if x:
                for j in range(self.N - i):
                    out[i + j] = (out[i + j] + x * b[j]) % self.p
        return tuple(out)

    def add(self, a, b, c=1):
        return tuple((x + c * y) % self.p for x, y in zip(a, b))

    def power(self, k):
        out = [0] * self.N
        out[k] = 1
        return tuple(out)

    def zero(self):
        return (0,) * self.N


class CyclicMasseyOracle:
    """Endomorphism-model Massey products for a cyclic p-group.

    The minimal resolution is P_i = A with d alternating s, s^(N-1).  A degree
    -d map is a list of multipliers f[i]: P_i -> P_{i-d}.  All defining systems
    for <x, x, x> with x the degree-one generator are enumerated through `window`.
    """

    def __init__(self, p, N, window=4):
        self.A = TruncatedPoly(p, N)
        self.p, self.N, self.W = p, N, window

    def d(self, i):
        if i <= 0:
            return None
        return self.A.power(1) if i % 2 else self.A.power(self.N - 1)

    def _D(self, f, deg, i):
        """Component i of D(f) = d f - (-1)^deg f d for f of degree -deg."""
        A = self.A
        out = A.zero()
        j = i - deg
        if j >= 1 and i in f:
            out = A.add(out, A.mul(self.d(j), f[i]))
        if i - 1 in f and i >= 1:
            c = 1 if deg % 2 else -1
            out = A.add(out, A.mul(f[i - 1], self.d(i)), c)
        return out

    def _solutions(self, deg, rhs, lo, fixed=None):
        """All f of degree -deg with D(f) = rhs in degrees <= W, components lo..W."""
        sols = [dict(fixed or {})]
        for i in range(lo, self.W + 1):
            nxt = []
            for f in sols:
                for a in self.A.elements:
                    if i == lo and fixed and i in fixed and a != fixed[i]:
                        continue
                    g = dict(f)
                    g[i] = a
                    want = rhs(i) if i - deg - 1 >= 0 else None
                    if want is None or self._D(g, deg, i) == want:
                        nxt.append(g)
            sols = nxt
        return sols

    def lifts(self):
        """Chain maps P -> P of degree -1 with constant term 1 in degree 1."""
        sols = [f for f in self._solutions(1, lambda i: self.A.zero(), 1) if f[1][0] == 1]
        return sols

    def compose(self, f, df, g, dg):
        """(f o g)_i = f_{i - dg} g_i."""
        out = {}
        for i in range(self.W + 1):
            if i in g and (i - dg) in f:
                out[i] = self.A.mul(f[i - dg], g[i])
        return out

    def triple_values(self, max_lifts=1):
        """Set of degree-2 values over all defining systems of <x, x, x>.

        The cocycle representing x is unique here (the cochain differential is
        zero), so the defining systems are the choices of the two homotopies;
        `max_lifts` > 1 also varies the chain lift of x in each slot.
        """
        L = self.lifts()[:max_lifts]
        values = set()
        cache = {}

        def homotopies(i1, i2):
            key = (i1, i2)
            if key not in cache:
                prod = self.compose(L[i1], 1, L[i2], 1)
                hs = self._solutions(1, lambda i: prod.get(i, self.A.zero()), 1)
                cache[key] = {(h[1], h[2]) for h in hs}
            return cache[key]

        for a, b, c in itertools.product(range(len(L)), repeat=3):
            w2 = L[c][2]
            for h1, _ in homotopies(a, b):
                first = self.A.mul(h1, w2)[0]
                for _, k2 in homotopies(b, c):
                    # u is the degree-one generator: u(a) = constant term of a
                    values.add((first + k2[0]) % self.p)
        return values


# ---------------------------------------------------------------- dimensions


def c2xc2_dim(n):
    return n + 1


def q8_dims(hi):
    pattern = [1, 2, 2, 1]
    return [pattern[i % 4] for i in range(hi + 1)]


def elementary_abelian_dim(rank, n):
    """dim H^n((C2)^rank; GF(2)) = number of monomials of degree n in rank variables."""
    return comb(n + rank - 1, rank - 1)
