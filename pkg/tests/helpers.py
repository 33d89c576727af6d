"""Conversions between library classes and the polynomial oracle on C2 x C2."""

import numpy as np

from prodcoh import linalg
from prodcoh.acceptance import ring_for

from oracles import SmallField, monomials

GF4 = "2^2:1,1,1"


def oracle_field(F):
    return SmallField(F.q)


def to_code(F, c):
    """Library field code -> oracle code (GF(4): alpha -> 2)."""
    if F.m == 1:
        return int(c)
    return int(F.digits[c][0]) + 2 * int(F.digits[c][1])


def from_code(F, c):
    for v in range(F.q):
        if to_code(F, v) == c:
            return v
    raise ValueError(c)


def to_poly(x):
    """Class of H^n(C2 x C2) -> {(a, b): coefficient} in the oracle's encoding."""
    R, F, n = x.ring, x.ring.F, x.degree
    if n == 0:
        return {(0, 0): to_code(F, x.coords[0])} if x.coords[0] else {}
    mons, M = R.monomial_basis(n)
    assert [tuple(m) for m in mons] == monomials(n)
    c = linalg.solve(F, M, x.coords)
    return {m: to_code(F, v) for m, v in zip(monomials(n), c) if v}


def from_poly(R, f, n):
    F = R.F
    out = R.zero(n)
    for (a, b), c in f.items():
        out = out + R.monomial_class((a, b)).scale(from_code(F, c))
    return out


def c2xc2(field="2", degree=9):
    return ring_for("C2xC2", field, degree)


def as_array(v):
    return np.asarray(v, dtype=np.int64)
