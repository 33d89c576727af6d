"""Module-level oracle: syzygies, the modules L_z, Ext groups and the action of
a cohomology class on them, used to test productivity straight from the
definitions (through a finite degree)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .cohomology import CohClass
from .complexes import Composite, DenseComplex, DenseContracted, DenseMap, extend, gen_indicator
from .errors import NotMinimal, TruncationUnderflow, ZeroClass
from .group import PermModule, RepModule, as_rep, expand, kg_apply_coeffs, kron, subspace_module
from .resolutions import Resolution, minimal_resolution
from .steenrod import Verdict

ModuleResolution = Resolution


@dataclass(frozen=True)
class OracleConfig:
    cap: int | None = None  # None picks the default for the group and field

    def resolve(self, G, F) -> int:
        if self.cap is not None:
            return self.cap
        return 4 if G.order == 8 and F.q == 4 else 6


def default_cap(G, F) -> int:
    return OracleConfig().resolve(G, F)


# ---------------------------------------------------------------- modules


def omega(n: int, P: Resolution):
    """Omega^n k = kernel of P_{n-1} -> P_{n-2} (the augmentation when n = 1).

    Returns (RepModule, basis columns inside P_{n-1}).
    """
    F = P.F
    if P.kind != "minimal":
        raise NotMinimal("syzygies are read off a minimal resolution")
    if n == 0:
        return RepModule.trivial(P.G, F), np.ones((1, 1), dtype=np.int64)
    if n > P.top:
        raise TruncationUnderflow(f"need resolution degree {n}")
    f = P.aug if n == 1 else P.cx.d(n - 1)
    K = linalg.kernel_basis(F, f).T
    return subspace_module(F, P.cx.module(n - 1), K), K


def lzeta(z: CohClass):
    """L_z = d_n(ker z) inside Omega^n k; returns (RepModule, basis columns in P_{n-1})."""
    if z.is_zero():
        raise ZeroClass("L_z needs a nonzero class")
    ring = z.ring
    P, F, n = ring.P, ring.F, z.degree
    if n < 1:
        raise ZeroClass("degree must be at least 1")
    fz = ring.functional(z)
    ker = linalg.kernel_basis(F, fz[None, :]).T  # columns in P_n
    img = F.matmul(P.cx.d(n), ker) if n > 0 else ker
    basis = linalg.row_basis(F, img.T)[0].T if img.size else img
    return subspace_module(F, P.cx.module(n - 1), basis), basis


def module_resolution(M, G, F, degree, seed=None) -> Resolution:
    return minimal_resolution(G, F, degree, M=M, seed=seed)


# ---------------------------------------------------------------- Ext


class ExtGroups:
    """Cohomology of Hom_kG(P(M), N) with cochains stored as N-values on generators."""

    def __init__(self, PM: Resolution, N):
        self.P, self.F = PM, PM.F
        self.N = as_rep(N, PM.F)
        self._E, self._spaces = {}, {}

    def coboundary(self, i):
        """Matrix sending generator values on P_i to those of f o d_{i+1} on P_{i+1}."""
        if i not in self._E:
            F, P, N = self.F, self.P, self.N
            dn = N.dim
            r0, r1 = P.rank(i), P.rank(i + 1)
            E = np.zeros((r1 * dn, r0 * dn), dtype=np.int64)
            if r0 and r1:
                dgen = P.cx.d(i + 1)[:, P.gens(i + 1)]
                Mi = P.cx.module(i)
                for t in range(r1):
                    for t2, B in enumerate(kg_apply_coeffs(F, Mi, N, dgen[:, t])):
                        E[t * dn:(t + 1) * dn, t2 * dn:(t2 + 1) * dn] = B
            self._E[i] = E
        return self._E[i]

    def space(self, i):
        if i not in self._spaces:
            if i + 1 > self.P.top:
                raise TruncationUnderflow(f"Ext^{i} needs resolution degree {i + 1}")
            F = self.F
            amb = self.P.rank(i) * self.N.dim
            Z = linalg.kernel_basis(F, self.coboundary(i)) if amb else np.zeros((0, 0), dtype=np.int64)
            B = self.coboundary(i - 1).T if i > 0 and amb else np.zeros((0, amb), dtype=np.int64)
            if Z.shape[1] != amb:  # no equations: every cochain is a cocycle
                Z = np.eye(amb, dtype=np.int64)
            self._spaces[i] = linalg.QuotientSpace(F, Z, B, amb)
        return self._spaces[i]

    def dim(self, i):
        return self.space(i).dim

    def full(self, i, vals):
        """kG-map P_i -> N from its generator values (flattened t-major)."""
        dn = self.N.dim
        V = np.asarray(vals, dtype=np.int64).reshape(-1, dn).T
        return expand(self.F, self.P.cx.module(i), self.N, V)

    def action(self, zhat: DenseMap, i):
        """Matrix of u -> u o zhat_{i+n} from Ext^i to Ext^{i+n} in canonical coordinates."""
        n = -zhat.deg
        src, tgt = self.space(i), self.space(i + n)
        F = self.F
        cols = []
        gens = gen_indicator(self.P.cx.module(i + n))
        img = zhat.apply(i + n, gens)  # P_i x r_{i+n}
        for row in src.basis:
            u = self.full(i, row)
            vals = F.matmul(u, img)  # dimN x r_{i+n}
            cols.append(tgt.coords(vals.T.reshape(-1)))
        if not cols:
            return np.zeros((tgt.dim, 0), dtype=np.int64)
        return np.stack(cols, axis=1)


def ext_dims(PM: Resolution, N, cap):
    E = ExtGroups(PM, N)
    return [E.dim(i) for i in range(cap + 1)]


# ---------------------------------------------------------------- P (x) M and transport


def tensor_with_module(P: Resolution, M, top=None) -> DenseContracted:
    """P (x) M on a free basis h(e_j (x) m_l), with the contraction s (x) 1 carried over."""
    F, G = P.F, P.G
    M = as_rep(M, F)
    n, dm = G.order, M.dim
    top = P.top if top is None else top
    inv = G.inv

    def conj(i):
        r = P.rank(i)
        size = r * n * dm
        C = np.zeros((size, size), dtype=np.int64)
        Ci = np.zeros((size, size), dtype=np.int64)
        for j in range(r):
            for h in range(n):
                std = (j * n + h) * dm + np.arange(dm)
                free = (j * dm + np.arange(dm)) * n + h
                C[np.ix_(std, free)] = M.mats[h]
                Ci[np.ix_(free, std)] = M.mats[inv[h]]
        return C, Ci

    Cs = {i: conj(i) for i in range(top + 1)}
    I = np.eye(dm, dtype=np.int64)
    mods = {i: PermModule.free(G, P.rank(i) * dm) for i in range(top + 1)}
    diffs = {}
    for i in range(1, top + 1):
        std = kron(F, P.cx.d(i), I)
        diffs[i] = F.matmul(Cs[i - 1][1], F.matmul(std, Cs[i][0]))
    cx = DenseComplex(F, G, mods, diffs, 0, top, check=False)
    aug = F.matmul(kron(F, P.aug, I), Cs[0][0])
    sect = F.matmul(Cs[0][1], kron(F, P.sect, I))
    s = {i: F.matmul(Cs[i + 1][1], F.matmul(kron(F, P.s[i], I), Cs[i][0])) for i in range(top)}
    out = DenseContracted(cx, 0, M, aug, sect, s)
    out.conj = Cs
    out.factor = P
    return out


def tensor_map(PMc: DenseContracted, f: DenseMap, M) -> DenseMap:
    """f (x) 1_M on P (x) M in the free basis."""
    F = PMc.F
    I = np.eye(as_rep(M, F).dim, dtype=np.int64)
    comps = {}
    top = PMc.cx.hi
    for i in range(PMc.cx.lo, top + 1):
        j = i + f.deg
        if j < 0:
            comps[i] = np.zeros((0, PMc.cx.dim(i)), dtype=np.int64)
            continue
        std = kron(F, f.matrix(i), I)
        comps[i] = F.matmul(PMc.conj[j][1], F.matmul(std, PMc.conj[i][0]))
    return DenseMap(PMc.cx, PMc.cx, f.deg, comps, top)


def transport(PM: Resolution, PMc: DenseContracted, hi):
    """phi: P(M) -> P (x) M and psi: P (x) M -> P(M), both covering the identity of M."""
    F = PM.F
    phi = extend(PM.cx, PMc, 0, None, bottom=F.matmul(PM.aug, gen_indicator(PM.cx.module(0))), hi=hi)
    psi = extend(PMc.cx, PM, 0, None, bottom=F.matmul(PMc.aug, gen_indicator(PMc.cx.module(0))), hi=hi)
    return phi, psi


def zeta_hat_module(z: CohClass, M, PM: Resolution, hi):
    """Chain map P(M) -> S^n P(M) representing z acting on M."""
    ring = z.ring
    PMc = tensor_with_module(ring.P, M, top=hi)
    phi, psi = transport(PM, PMc, hi)
    zt = tensor_map(PMc, ring.lift(z), M)
    return Composite(psi, Composite(zt, phi))


def zeta_action(z: CohClass, M, N, i, PM: Resolution | None = None):
    ring = z.ring
    n = z.degree
    hi = i + n + 1
    PM = module_resolution(M, ring.G, ring.F, hi) if PM is None else PM
    zh = zeta_hat_module(z, M, PM, hi)
    return ExtGroups(PM, N).action(zh, i)


def _oracle(z: CohClass, cap, target):
    if z.is_zero():
        raise ZeroClass("the zero class is not a valid input")
    ring = z.ring
    F, G, n = ring.F, ring.G, z.degree
    cap = default_cap(G, F) if cap is None else cap
    if cap + 1 > ring.top:
        raise TruncationUnderflow(f"oracle cap {cap} needs resolution degree {cap + 1}")
    L, _ = lzeta(z)
    if L.dim == 0 or cap < n:
        return Verdict("YesUpToDegree", degree=cap, witness=[], detail={"dim_L": L.dim})
    PL = module_resolution(L, G, F, cap + 1)
    N = L if target == "productive" else RepModule.trivial(G, F)
    zh = zeta_hat_module(z, L, PL, cap + 1)
    E = ExtGroups(PL, N)
    checked = []
    for i in range(cap - n + 1):
        A = E.action(zh, i)
        if np.any(A):
            j = int(np.flatnonzero(np.any(A, axis=0))[0])
            cocycle = E.space(i).basis[j]
            return Verdict("No", witness={"degree": i, "cocycle": [int(c) for c in cocycle]},
                           detail={"dim_L": L.dim, "rank": linalg.rank(F, A)})
        checked.append((i, E.dim(i)))
    return Verdict("YesUpToDegree", degree=cap, witness=checked, detail={"dim_L": L.dim})


def oracle_productive(z: CohClass, cap=None) -> Verdict:
    return _oracle(z, cap, "productive")


def oracle_semiproductive(z: CohClass, cap=None) -> Verdict:
    return _oracle(z, cap, "semiproductive")
