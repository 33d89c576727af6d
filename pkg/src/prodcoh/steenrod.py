"""Cup-one homotopy, the top Steenrod square, Massey triple products and the
productivity classifiers built from them."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import linalg
from .cohomology import CohClass, Cohomology
from .complexes import Composite, TensorContracted, Transposition, extend
from .errors import PreconditionViolated, ProductsNonzero, TruncationUnderflow, WrongCharacteristic, ZeroClass
from .group import kron


@dataclass
class Verdict:
    status: str  # "Yes", "No", "YesUpToDegree", "Undetermined"
    degree: int | None = None
    witness: Any = None
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in ("Yes", "No", "YesUpToDegree", "Undetermined"):
            raise ValueError(f"bad status {self.status!r}")
        if self.status in ("YesUpToDegree", "Undetermined") and self.degree is None:
            raise ValueError("bounded verdicts need a degree")

    @property
    def positive(self):
        return self.status in ("Yes", "YesUpToDegree")

    def label(self):
        return f"{self.status}({self.degree})" if self.status in ("YesUpToDegree", "Undetermined") else self.status


def normalize_last(x: CohClass) -> CohClass:
    """Scale x so that its last nonzero coordinate is 1."""
    nz = np.flatnonzero(x.coords)
    if nz.size == 0:
        return x
    c = int(x.coords[nz[-1]])
    return x if c == 1 else x.scale(int(x.ring.F.inv(c)))


# ---------------------------------------------------------------- cup-one


def cup1_homotopy(ring: Cohomology):
    """H: P -> P (x) P of degree 1 with dH + Hd = Delta - T Delta (cached on the resolution)."""
    P = ring.P
    if getattr(P, "_cup1", None) is None:
        D = P.diagonal()
        T = Transposition(P.cx, P.cx)
        rhs = D - Composite(T, D)
        contracted = TensorContracted(P, P)
        P._cup1 = extend(P.cx, contracted, 1, rhs, bottom="zero", hi=P.top - 1)
    return P._cup1


def square_form(ring: Cohomology, z: CohClass):
    """Row vector (z (x) z) on the (n, n) block of (P (x) P)_{2n}."""
    F = ring.F
    fz = ring.functional(z)
    return kron(F, fz[None, :], fz[None, :])[0]


def sq_cochain(ring: Cohomology, z: CohClass, H=None):
    """Cocycle p -> (z (x) z)(H(p)) on generators of P_{2n-1}."""
    if ring.F.p != 2:
        raise WrongCharacteristic("the top square is implemented in characteristic 2")
    n = z.degree
    if n < 1:
        raise PreconditionViolated("degree must be at least 1")
    if 2 * n > ring.top:
        raise TruncationUnderflow(f"need resolution degree {2 * n}")
    H = cup1_homotopy(ring) if H is None else H
    cx = H.tgt
    off, a, b = cx.block_lookup(2 * n)[(n, n)]
    img = H.on_gens(2 * n - 1)[off:off + a * b]
    return ring.F.matmul(square_form(ring, z)[None, :], img)[0]


def sq_top_minus_one(z: CohClass, H=None) -> CohClass:
    """The semilinear top square Sq^{n-1} z, a class of degree 2n - 1."""
    ring = z.ring
    return ring.from_cochain(2 * z.degree - 1, sq_cochain(ring, z, H))


def residue(target: CohClass, z: CohClass) -> CohClass:
    """Canonical representative of target modulo z.H*."""
    ring = target.ring
    qs = ring.ideal_quotient(target.degree, z)
    return CohClass(ring, target.degree, qs.reduce(target.coords))


# ---------------------------------------------------------------- classifiers


def is_productive(z: CohClass, cap: int | None = None, oracle=None) -> Verdict:
    ring = z.ring
    if z.is_zero():
        raise ZeroClass("the zero class is not a valid input")
    n, p = z.degree, ring.F.p
    if p == 2:
        t = sq_top_minus_one(z)
        ok, u = ring.ideal_member(t, z)
        if ok:
            return Verdict("Yes", witness=u, detail={"square": t})
        return Verdict("No", witness=residue(t, z), detail={"square": t})
    if n % 2 == 0:
        return Verdict("Yes", witness="odd characteristic and even degree")
    if oracle is None:
        from .oracle import oracle_productive

        return oracle_productive(z, cap)
    return oracle(z, cap)


def is_semiproductive(z: CohClass, cap: int) -> Verdict:
    ring = z.ring
    if ring.F.p != 2:
        raise WrongCharacteristic("semi-productivity criterion is implemented in characteristic 2")
    if z.is_zero():
        raise ZeroClass("the zero class is not a valid input")
    n = z.degree
    t = sq_top_minus_one(z)
    checked = []
    for d in range(cap + 1):
        if d + 2 * n - 1 > ring.top - 1:
            raise TruncationUnderflow(f"cap {cap} needs resolution degree {d + 2 * n}")
        for v in ring.annihilator_basis(z, d):
            ok, _ = ring.ideal_member(ring.cup(v, t), z)
            if not ok:
                v = normalize_last(v)
                return Verdict("No", witness=v, detail={"product": ring.cup(v, t), "square": t})
            checked.append(v)
    return Verdict("YesUpToDegree", degree=cap, witness=checked, detail={"square": t})


# ---------------------------------------------------------------- Massey products


def _null_homotopy(ring: Cohomology, f, deg):
    """H with D(H) = f, for f a chain map P -> P of degree deg whose class vanishes."""
    H = extend(ring.P.cx, ring.P, deg + 1, f, bottom="solve", hi=ring.top)
    if H is None:
        raise ProductsNonzero("product class is nonzero")
    return H


def massey_triple(u: CohClass, v: CohClass, w: CohClass, lifts=None):
    """(representative, J basis) of <u, v, w>; J rows are coordinates in H^{r+s+t-1}."""
    ring = u.ring
    F = ring.F
    r, s, t = u.degree, v.degree, w.degree
    N = r + s + t - 1
    if N > ring.top - 1:
        raise TruncationUnderflow(f"need resolution degree {N + 1}")
    if not ring.cup(u, v).is_zero() or not ring.cup(v, w).is_zero():
        raise ProductsNonzero("u.v and v.w must vanish")
    uh, vh, wh = lifts if lifts is not None else (ring.lift(u), ring.lift(v), ring.lift(w))
    H = _null_homotopy(ring, Composite(uh, vh), -(r + s))
    K = _null_homotopy(ring, Composite(vh, wh), -(s + t))
    cx = ring.P.cx
    gens = gen_cols(cx, N)
    first = F.matmul(ring.P.aug, Composite(H, wh).apply(N, gens))
    uf = ring.functional(u)
    second = F.matmul(uf[None, :], K.apply(N, gens))
    cochain = F.sub(first, second) if r % 2 == 0 else F.add(first, second)
    rep = ring.from_cochain(N, cochain[0])
    return rep, indeterminacy(u, w, s)


def gen_cols(cx, i):
    from .complexes import gen_indicator

    return gen_indicator(cx.module(i))


def indeterminacy(u: CohClass, w: CohClass, s: int):
    """Rref basis (rows) of u.H^{s+t-1} + H^{r+s-1}.w."""
    ring = u.ring
    r, t = u.degree, w.degree
    N = r + s + t - 1
    rows = []
    for j in range(ring.dim(s + t - 1)):
        rows.append(ring.cup(u, ring.basis_class(s + t - 1, j)).coords)
    M = ring.right_mult_matrix(w, r + s - 1)
    rows.extend(M.T)
    if not rows:
        return np.zeros((0, ring.dim(N)), dtype=np.int64)
    B, _ = linalg.row_basis(ring.F, np.vstack(rows))
    return B


def massey_mu(z: CohClass, v: CohClass) -> CohClass:
    """Residue of <z, v, z> modulo z.H*."""
    ring = z.ring
    if not ring.cup(v, z).is_zero() or not ring.cup(z, v).is_zero():
        raise PreconditionViolated("v must annihilate z")
    rep, _ = massey_triple(z, v, z)
    return residue(rep, z)


def hirsch_residue(z: CohClass, v: CohClass) -> CohClass:
    """Residue of v.Sq^{n-1} z modulo z.H*."""
    return residue(z.ring.cup(v, sq_top_minus_one(z)), z)
