"""Free resolutions with explicit contractions, and diagonal approximations.

A `Resolution` is a `DenseContracted` complex P_0 <- P_1 <- ... <- P_D of free
kG-modules over a base module M, together with maps aug: P_0 -> M,
sect: M -> P_0 and k-linear s_j: P_j -> P_{j+1} (j < D) satisfying
ds + sd = 1 - sect.aug.  Minimal resolutions are built so that s vanishes on
generators, which makes counit identities hold on the nose.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import linalg
from .complexes import DenseComplex, DenseContracted, TensorContracted, extend, gen_indicator
from .errors import BudgetExceeded, Mismatch, UnsupportedGroup
from .field import Field
from .group import Group, PermModule, RepModule, as_rep, expand


@dataclass(frozen=True)
class ResolutionConfig:
    kind: str = "minimal"  # or "bar"
    degree: int = 6
    seed: int | None = None  # perturbs generator lifts and complements
    budget: int = 3000  # largest allowed module dimension


class Resolution(DenseContracted):
    def __init__(self, kind, G, F, cx, base, aug, sect, s):
        super().__init__(cx, 0, base, aug, sect, s)
        self.kind, self.G, self.top = kind, G, cx.hi
        self._diag = None

    def rank(self, i) -> int:
        return self.cx.module(i).rank if self.cx.dim(i) else 0

    @property
    def ranks(self):
        return [self.rank(i) for i in range(self.top + 1)]

    def d(self, i):
        return self.cx.d(i)

    def gens(self, i):
        return self.cx.module(i).gens

    def coboundary(self, n):
        """Matrix E (r_{n+1} x r_n) with (phi o d_{n+1})(gen_t) = sum_t' E[t, t'] phi(gen_t')
        for an invariant cochain phi on P_n, k coefficients."""
        F = self.F
        r0, r1 = self.rank(n), self.rank(n + 1)
        E = np.zeros((r1, r0), dtype=np.int64)
        if r0 == 0 or r1 == 0:
            return E
        og = self.cx.module(n).orbits[1]
        D = self.cx.d(n + 1)[:, self.gens(n + 1)]
        for t2 in range(r0):
            rows = np.flatnonzero(og == t2)
            E[:, t2] = np.sum(D[rows], axis=0) % F.p if F.m == 1 else _fsum(F, D[rows])
        return E

    def diagonal(self):
        """Chain map P -> P (x) P lifting k -> k (x) k, cached."""
        if self._diag is None:
            self._diag = diagonal(self)
        return self._diag


def _fsum(F, rows):
    out = np.zeros(rows.shape[1], dtype=np.int64)
    for r in rows:
        out = F.add(out, r)
    return out


# ---------------------------------------------------------------- minimal


def _radical(F, M: RepModule, K):
    """Column span of (g - 1) K over all g."""
    cols = []
    for g in range(1, M.G.order):
        cols.append(F.sub(F.matmul(M.mats[g], K), K))
    if not cols:
        return np.zeros((M.dim, 0), dtype=np.int64)
    return np.hstack(cols)


def _complement(F, K_rows, G_rows, ambient, rng):
    """Rows W with span(K) + span(W) = everything, W containing G_rows."""
    stacked = np.vstack([K_rows, G_rows]) if K_rows.size else G_rows
    _, piv = linalg.rref(F, stacked) if stacked.shape[0] else (None, [])
    extra = [c for c in range(ambient) if c not in set(piv)]
    E = np.zeros((len(extra), ambient), dtype=np.int64)
    E[np.arange(len(extra)), extra] = 1
    if rng is not None and K_rows.shape[0] and len(extra):
        coeffs = rng.integers(0, F.q, size=(len(extra), K_rows.shape[0]))
        E = F.add(E, F.matmul(coeffs, K_rows))
    return np.vstack([G_rows, E]) if G_rows.size else E


def _left_inverse(F, A):
    """L with L A = 1 for A of full column rank."""
    w = A.shape[1]
    if w == 0:
        return np.zeros((0, A.shape[0]), dtype=np.int64)
    X, ok = linalg.solve_many(F, A.T, np.eye(w, dtype=np.int64))
    if not ok.all():
        raise Mismatch("matrix is not injective")
    return X.T


def _projector(F, K_cols, W_cols):
    """Projection onto span(K) along span(W)."""
    B = np.hstack([K_cols, W_cols])
    n = B.shape[0]
    Binv, ok = linalg.solve_many(F, B, np.eye(n, dtype=np.int64))
    if not ok.all():
        raise Mismatch("kernel and complement do not span")
    k = K_cols.shape[1]
    return F.matmul(K_cols, Binv[:k])


def minimal_resolution(G: Group, F: Field, degree: int, M=None, seed=None) -> Resolution:
    """Minimal free resolution of M (default the trivial module) through `degree`."""
    if not G.is_p_group(F.p):
        raise UnsupportedGroup(f"{G.name or 'group'} of order {G.order} is not a {F.p}-group")
    M = RepModule.trivial(G, F) if M is None else as_rep(M, F)
    rng = np.random.default_rng(seed) if seed is not None else None
    mods, diffs, fmaps = {}, {}, {}
    top = degree + 1  # one extra degree so that s_degree is known
    for i in range(top + 1):
        # K = kernel of the previous map (all of M at i = 0)
        if i == 0:
            K = np.eye(M.dim, dtype=np.int64)
            XM = M
        else:
            Pp = mods[i - 1]
            K = linalg.kernel_basis(F, fmaps[i - 1]).T
            XM = RepModule.from_perm(Pp, F)
        if K.shape[1] == 0:
            lifts = np.zeros((XM.dim, 0), dtype=np.int64)
        else:
            rad = _radical(F, XM, K)
            qs = linalg.QuotientSpace(F, K.T, rad.T, XM.dim)
            lifts = qs.basis.T.copy()
            if rng is not None and qs.sub.shape[0]:
                c = rng.integers(0, F.q, size=(qs.sub.shape[0], lifts.shape[1]))
                lifts = F.add(lifts, F.matmul(qs.sub.T, c))
        r = lifts.shape[1]
        P = PermModule.free(G, r)
        mods[i] = P
        fmap = expand(F, P, XM, lifts)
        fmaps[i] = fmap
        if i > 0:
            diffs[i] = fmap
    # contraction from complements of the kernels
    R, proj = {}, {}
    for i in range(top + 1):
        P = mods[i]
        Kc = linalg.kernel_basis(F, fmaps[i])
        gens_rows = gen_indicator(P).T
        W = _complement(F, Kc, gens_rows, P.dim, rng)
        Wc = W.T
        R[i] = F.matmul(Wc, _left_inverse(F, F.matmul(fmaps[i], Wc)))
        proj[i] = _projector(F, Kc.T if Kc.size else np.zeros((P.dim, 0), dtype=np.int64), Wc)
    cx = DenseComplex(F, G, {i: mods[i] for i in range(degree + 1)},
                      {i: diffs[i] for i in range(1, degree + 1)}, 0, degree, check=False)
    s = {i: F.matmul(R[i + 1], proj[i]) for i in range(degree)}
    aug = fmaps[0]
    sect = R[0]
    return Resolution("minimal", G, F, cx, M, aug, sect, s)


# ---------------------------------------------------------------- bar


def bar_resolution(G: Group, F: Field, degree: int, budget: int = 3000) -> Resolution:
    """Normalized bar resolution; basis h[g1|...|gk] with all g_i != 1."""
    n = G.order
    for k in range(degree + 1):
        if (n - 1) ** k * n > budget:
            raise BudgetExceeded(f"bar degree {k} has dimension {(n - 1) ** k * n} > {budget}")
    cells = {k: list(itertools.product(range(1, n), repeat=k)) for k in range(degree + 1)}
    index = {k: {c: t for t, c in enumerate(cells[k])} for k in cells}
    T = G.table
    mods = {k: PermModule.free(G, len(cells[k])) for k in cells}

    def vec_add(v, k, coeff, h, cell):
        if any(g == 0 for g in cell):
            return
        x = index[k][cell] * n + h
        v[x] = (v[x] + coeff) % F.p

    diffs = {}
    for k in range(1, degree + 1):
        imgs = np.zeros((mods[k - 1].dim, len(cells[k])), dtype=np.int64)
        for t, c in enumerate(cells[k]):
            v = imgs[:, t]
            vec_add(v, k - 1, 1, c[0], c[1:])
            for i in range(k - 1):
                merged = c[:i] + (int(T[c[i], c[i + 1]]),) + c[i + 2:]
                vec_add(v, k - 1, (-1) ** (i + 1), 0, merged)
            vec_add(v, k - 1, (-1) ** k, 0, c[:-1])
        diffs[k] = expand(F, mods[k], mods[k - 1], imgs)
    cx = DenseComplex(F, G, mods, diffs, 0, degree, check=False)
    aug = np.ones((1, n), dtype=np.int64)
    sect = np.zeros((n, 1), dtype=np.int64)
    sect[0, 0] = 1
    s = {}
    for k in range(degree):
        S = np.zeros((mods[k + 1].dim, mods[k].dim), dtype=np.int64)
        for t, c in enumerate(cells[k]):
            for h in range(1, n):
                S[index[k + 1][(h,) + c] * n, t * n + h] = 1
        s[k] = S
    res = Resolution("bar", G, F, cx, RepModule.trivial(G, F), aug, sect, s)
    res.cells = cells
    res.cell_index = index
    return res


def make_resolution(G, F, config: ResolutionConfig) -> Resolution:
    if config.kind == "bar":
        return bar_resolution(G, F, config.degree, config.budget)
    if config.kind == "minimal":
        return minimal_resolution(G, F, config.degree, seed=config.seed)
    raise ValueError(f"unknown resolution kind {config.kind!r}")


# ---------------------------------------------------------------- maps


def lift_map(src: Resolution, tgt: Resolution, phi, hi=None):
    """Chain map P(M) -> P(N) covering phi: M -> N (matrix dim N x dim M)."""
    phi = np.asarray(phi, dtype=np.int64)
    F = src.F
    vals = F.matmul(phi, F.matmul(src.aug, gen_indicator(src.cx.module(0))))
    hi = min(src.top, tgt.top) if hi is None else hi
    return extend(src.cx, tgt, 0, None, bottom=vals, hi=hi)


def tensor_resolution(P: Resolution, Q: Resolution | None = None) -> TensorContracted:
    return TensorContracted(P, P if Q is None else Q)


def diagonal(P: Resolution):
    """Diagonal approximation P -> P (x) P over k (x) k = k."""
    if P.base.dim != 1 or not P.base.is_trivial():
        raise Mismatch("diagonal needs a resolution of the trivial module")
    PP = TensorContracted(P, P)
    if P.kind == "bar":
        return _alexander_whitney(P, PP)
    r0 = P.rank(0)
    return extend(P.cx, PP, 0, None, bottom=np.ones((1, r0), dtype=np.int64), hi=P.top)


def _alexander_whitney(P: Resolution, PP: TensorContracted):
    from .complexes import DenseMap

    F, G = P.F, P.G
    n = G.order
    T = G.table
    cx = PP.cx
    comps = {}
    for k in range(P.top + 1):
        lookup = cx.block_lookup(k)
        imgs = np.zeros((cx.dim(k), len(P.cells[k])), dtype=np.int64)
        for t, c in enumerate(P.cells[k]):
            prod = 0
            for i in range(k + 1):
                if i > 0:
                    prod = int(T[prod, c[i - 1]])
                off, a, b = lookup[(i, k - i)]
                left = P.cell_index[i][c[:i]] * n
                right = P.cell_index[k - i][c[i:]] * n + prod
                imgs[off + left * b + right, t] = 1
        comps[k] = expand(F, P.cx.module(k), cx.module(k), imgs)
    return DenseMap(P.cx, cx, 0, comps, P.top)
