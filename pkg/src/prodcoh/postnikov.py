"""Two-stage complexes P(z) built from a cohomology class, the comparison map
psi into P(z + z), and the obstruction to lifting a comultiplication.

For z in H^n, Q denotes the shift of P by n - 1 and alpha: P -> Q is the lift
of z read as a degree -1 map, so P(z) = ext(Q, P, alpha) has differential
[[dQ, alpha], [0, dP]].  Everything is computed in source degrees up to a
window W (default 2n + 2), which needs a resolution through W + 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cohomology import CohClass, Cohomology
from .complexes import (BlockComplex, Composite, Cross, DenseMap, GradedMap, Identity, Relabel, Reindex, RowMap,
                        ShiftContracted, StackMap, TensorContracted, Transposition, ZeroMap, extend, extension_total,
                        factor_decision, find_homotopy, hom_differential, homology, inclusion,
                        is_chain_map, lifting_obstruction, maps_equal, point_complex, projection, solve_hom,
                        tensor)
from .errors import NotAChainMap, ObstructionNonzero, PreconditionViolated, TruncationUnderflow, ZeroClass
from .group import kron
from .steenrod import cup1_homotopy, residue


@dataclass(frozen=True)
class PostnikovConfig:
    window: int | None = None  # None means 2n + 2
    seed: int = 0  # for the perturbations in choice_independence_check
    trials: int = 2


@dataclass
class SphereComplex:
    """P(z) together with the pieces it was assembled from."""

    z: CohClass
    n: int
    window: int
    Qc: ShiftContracted
    alpha: GradedMap
    total: BlockComplex

    @property
    def ring(self) -> Cohomology:
        return self.z.ring

    @property
    def P(self):
        return self.z.ring.P

    @property
    def Q(self):
        return self.Qc.cx

    def augmentation(self):
        """P(z) -> k in degree 0 through the P summand."""
        P = self.P
        K0 = point_complex(P.F, P.G, 0)
        eps = DenseMap(P.cx, K0, 0, {0: P.aug}, 0)
        return RowMap(self.total, K0, [None, eps], 0)

    def homology_dims(self, hi=None):
        hi = self.window - 1 if hi is None else hi
        return [homology(self.total, i)[0] for i in range(hi + 1)]


@dataclass
class PsiData:
    """The map psi: P(z) -> P(z + z) and its ingredients."""

    sphere: SphereComplex
    plus: BlockComplex  # P(z + z) = [Q(x)P, P(x)Q, P(x)P]
    diag: GradedMap  # P -> P(x)P
    diag1: GradedMap  # Q -> Q(x)P
    diag2: GradedMap  # Q -> P(x)Q
    H1: GradedMap  # P -> Q(x)P
    H2: GradedMap  # P -> P(x)Q
    Hc: GradedMap  # cup-one homotopy on the diagonal
    Hprime: GradedMap  # Q -> P(x)Q, degree 1
    psi: GradedMap
    eta: GradedMap  # P(z + z) -> Q(x)Q, degree -1


@dataclass
class ObstructionResult:
    vanishes: bool
    residue: CohClass | None  # class of phi_2' modulo z
    closed_form: CohClass | None  # class of (z (x) z) H Delta modulo z
    witness: CohClass | None  # u in H^{n-1} with phi ~ u alpha, when it vanishes
    closed_form_agrees: bool = True
    detail: dict = field(default_factory=dict)


def _window(z: CohClass, window):
    W = 2 * z.degree + 2 if window is None else window
    if W + 1 > z.ring.top:
        raise TruncationUnderflow(f"window {W} needs resolution degree {W + 1}")
    return W


def build_p_zeta(z: CohClass, window=None) -> SphereComplex:
    if z.is_zero():
        raise ZeroClass("P(z) needs a nonzero class")
    n = z.degree
    if n < 1:
        raise PreconditionViolated("degree must be at least 1")
    W = _window(z, window)
    ring = z.ring
    P = ring.P
    Qc = ShiftContracted(P, n - 1)
    alpha = Relabel(ring.lift(z), P.cx, Qc.cx, -1)
    total = extension_total(Qc.cx, P.cx, alpha)
    return SphereComplex(z, n, W, Qc, alpha, total)


def build_p_zeta_plus(S: SphereComplex) -> BlockComplex:
    P, Q, a = S.P.cx, S.Q, S.alpha
    QP, PQ, PP = tensor(Q, P), tensor(P, Q), tensor(P, P)
    B = BlockComplex([QP, PQ, PP], {(0, 2): Cross(a, Identity(P)), (1, 2): Cross(Identity(P), a)})
    return B


def _densify(f: GradedMap, lo, hi) -> DenseMap:
    return DenseMap(f.src, f.tgt, f.deg, {i: f.matrix(i) for i in range(lo, hi + 1)}, hi)


def build_psi(S: SphereComplex, plus: BlockComplex | None = None, check=True) -> PsiData:
    ring, P, Q, Qc, a, W = S.ring, S.P, S.Q, S.Qc, S.alpha, S.window
    plus = build_p_zeta_plus(S) if plus is None else plus
    QP, PQ, PP = plus.parts
    ones = np.ones((1, P.rank(0)), dtype=np.int64)

    diag = P.diagonal()
    diag1 = extend(Q, TensorContracted(Qc, P), 0, None, bottom=ones, hi=W)
    PQc = TensorContracted(P, Qc)
    diag2 = extend(Q, PQc, 0, None, bottom=ones, hi=W)
    Hc = cup1_homotopy(ring)
    T = Transposition(Q, P.cx)
    Hprime = extend(Q, PQc, 1, diag2 - Composite(T, diag1), bottom="zero", hi=W)

    a_id, id_a = plus.offdiag[(0, 2)], plus.offdiag[(1, 2)]
    rhs1 = Composite(diag1, a) - Composite(a_id, diag)
    H1 = extend(P.cx, TensorContracted(Qc, P), 0, rhs1, bottom="solve", hi=W)
    if H1 is None:
        raise NotAChainMap("no homotopy for the first column of psi")
    # normalized second homotopy; D(H2) = diag2 alpha - (id x alpha) diag holds by construction
    H2 = Composite(T, H1) + Composite(Hprime, a) + Composite(id_a, Hc)
    H2 = _densify(H2, 0, W)
    if check:
        rhs2 = Composite(diag2, a) - Composite(id_a, diag)
        if not maps_equal(hom_differential(H2), rhs2, hi=W):
            raise NotAChainMap("normalized H2 fails its homotopy equation")

    B = S.total
    psi = StackMap(B, plus, [RowMap(B, QP, [diag1, H1], 0), RowMap(B, PQ, [diag2, H2], 0),
                             RowMap(B, PP, [None, diag], 0)], 0)
    if check and not is_chain_map(psi, hi=W):
        raise NotAChainMap("psi is not a chain map")
    QQ = tensor(Q, Q)
    eta = RowMap(plus, QQ, [Cross(Identity(Q), a), Cross(a, Identity(Q)), None], -1)
    return PsiData(S, plus, diag, diag1, diag2, H1, H2, Hc, Hprime, psi, eta)


def _counit_pair(S: SphereComplex):
    """Row vector eps (x) eps on (Q(x)Q)_{2n-2} and the point complex it lands in."""
    P, F, n = S.P, S.ring.F, S.n
    K = point_complex(F, P.G, 2 * n - 2)
    QQ = tensor(S.Q, S.Q)
    ee = kron(F, P.aug, P.aug)
    return DenseMap(QQ, K, 0, {2 * n - 2: ee}, 2 * n - 2), K


def square_class_any(ring: Cohomology, z: CohClass, H=None) -> CohClass:
    """(z (x) z) H Delta as a class of degree 2n - 1, in any characteristic."""
    n = z.degree
    H = cup1_homotopy(ring) if H is None else H
    off, a, b = H.tgt.block_lookup(2 * n)[(n, n)]
    img = H.on_gens(2 * n - 1)[off:off + a * b]
    fz = ring.functional(z)
    form = kron(ring.F, fz[None, :], fz[None, :])
    return ring.from_cochain(2 * n - 1, ring.F.matmul(form, img)[0])


def obstruction(z: CohClass, window=None, data: PsiData | None = None) -> ObstructionResult:
    """Decide whether eta psi is null-homotopic, i.e. whether psi lifts to P(z)(x)P(z)."""
    ring, n = z.ring, z.degree
    if data is None:
        S = build_p_zeta(z, window)
        data = build_psi(S)
    S = data.sphere
    W = S.window
    ee, K = _counit_pair(S)
    phi = Composite(ee, Composite(data.eta, data.psi))
    B = S.total
    phi1 = Composite(phi, inclusion(B, 0))
    G = solve_hom(S.Q, K, 0, phi1, hi=W)
    closed = square_class_any(ring, z, data.Hc)
    closed_res = residue(closed, z)
    if G is None:
        return ObstructionResult(False, None, closed_res, None, False, {"phi1_null": False})
    Gt = RowMap(B, K, [G, None], 0)
    phi_red = phi - hom_differential(Gt)
    phi2 = Composite(phi_red, inclusion(B, 1))
    cochain = phi2.on_gens(2 * n - 1)[0]
    cls = ring.from_cochain(2 * n - 1, cochain)
    res = residue(cls, z)
    agrees = res == closed_res or res == -closed_res
    sol = factor_decision(phi_red, B, hi=W)
    if sol is None:
        return ObstructionResult(False, res, closed_res, None, agrees, {"phi2": cls})
    u, _ = sol
    uvals = u.on_gens(2 * n - 2)[0] if n >= 1 else np.zeros(0, dtype=np.int64)
    w = ring.from_cochain(n - 1, uvals)
    return ObstructionResult(True, res, closed_res, w, agrees, {"phi2": cls})


def _unit_right(A, P):
    """A (x) P -> A, x (x) y -> eps(y) x."""
    K0 = point_complex(P.F, P.G, 0)
    eps = DenseMap(P.cx, K0, 0, {0: P.aug}, 0)
    return Composite(Reindex(tensor(A, K0), A, 0), Cross(Identity(A), eps))


def _unit_left(P, A):
    K0 = point_complex(P.F, P.G, 0)
    eps = DenseMap(P.cx, K0, 0, {0: P.aug}, 0)
    return Composite(Reindex(tensor(K0, A), A, 0), Cross(eps, Identity(A)))


@dataclass
class Comultiplication:
    target: BlockComplex  # P(z)(x)P(z) as ext(Q(x)Q, P(z + z), eta)
    lift: GradedMap
    counit_right: GradedMap | None  # homotopy (id (x) eps) lift ~ id
    counit_left: GradedMap | None


def counit_maps(S: SphereComplex, data: PsiData, target: BlockComplex):
    """(id (x) eps) and (eps (x) id) from P(z)(x)P(z) to P(z)."""
    P, Q, B = S.P, S.Q, S.total
    plus = data.plus
    QP, PQ, PP = plus.parts
    right = RowMap(plus, B, [StackMap(QP, B, [_unit_right(Q, P), None], 0), None,
                             StackMap(PP, B, [None, _unit_right(P.cx, P)], 0)], 0)
    left = RowMap(plus, B, [None, StackMap(PQ, B, [_unit_left(P, Q), None], 0),
                            StackMap(PP, B, [None, _unit_left(P, P.cx)], 0)], 0)
    return RowMap(target, B, [None, right], 0), RowMap(target, B, [None, left], 0)


def lift_comultiplication(z: CohClass, window=None, data: PsiData | None = None, counits=True) -> Comultiplication:
    """A chain map P(z) -> P(z)(x)P(z) over psi; raises ObstructionNonzero when none exists."""
    if data is None:
        data = build_psi(build_p_zeta(z, window))
    S = data.sphere
    W = S.window
    target = extension_total(tensor(S.Q, S.Q), data.plus, data.eta, check=False)
    ok, lift = lifting_obstruction(data.psi, target, TensorContracted(S.Qc, S.Qc), hi=W)
    if not ok:
        raise ObstructionNonzero("eta psi is not null-homotopic")
    if not is_chain_map(lift, hi=W) or not maps_equal(Composite(projection(target, 1), lift), data.psi, hi=W):
        raise NotAChainMap("lift does not cover psi")
    hr = hl = None
    if counits:
        cr, cl = counit_maps(S, data, target)
        hr, hl = (_counit_homotopy(Composite(c, lift), S.total, W) for c in (cr, cl))
    return Comultiplication(target, lift, hr, hl)


def _counit_homotopy(f, B, W):
    """H with D(H) = f - id; zero when the identity holds on the nose."""
    Id = Identity(B)
    if maps_equal(f, Id, hi=W):
        return ZeroMap(B, B, 1)
    return find_homotopy(f, Id, through=W - 1)


def _random_chain_map(P, tgt_contracted, n, rng, W):
    F = P.F
    vals = rng.integers(0, F.q, size=(1, P.rank(n - 1)))
    X = extend(P.cx, tgt_contracted, 0, None, bottom=vals, hi=W)
    return X


def choice_independence_check(z: CohClass, config: PostnikovConfig = PostnikovConfig()) -> dict:
    """Recompute the obstruction with H1, H2 moved by random chain maps.

    The verdict must not change, and the residue may only move inside (z).
    """
    S = build_p_zeta(z, config.window)
    base = build_psi(S)
    ref = obstruction(z, data=base)
    rng = np.random.default_rng(config.seed)
    P, Qc, W, n = S.P, S.Qc, S.window, S.n
    out = {"verdict": ref.vanishes, "residue": ref.residue, "trials": []}
    B = S.total
    QP, PQ, PP = base.plus.parts
    for _ in range(config.trials):
        f1 = _random_chain_map(P, TensorContracted(Qc, P), n, rng, W)
        f2 = _random_chain_map(P, TensorContracted(P, Qc), n, rng, W)
        H1 = base.H1 + f1
        H2 = base.H2 + f2
        psi = StackMap(B, base.plus, [RowMap(B, QP, [base.diag1, H1], 0), RowMap(B, PQ, [base.diag2, H2], 0),
                                      RowMap(B, PP, [None, base.diag], 0)], 0)
        data = PsiData(S, base.plus, base.diag, base.diag1, base.diag2, H1, H2, base.Hc, base.Hprime, psi,
                       base.eta)
        r = obstruction(z, data=data)
        out["trials"].append({"vanishes": r.vanishes, "residue": r.residue})
    out["consistent"] = all(t["vanishes"] == ref.vanishes for t in out["trials"])
    return out


def transfer_class(x: CohClass, ring_to: Cohomology) -> CohClass:
    """The class of ring_to corresponding to x, pulled back along a comparison map."""
    from .resolutions import lift_map

    n = x.degree
    c = lift_map(ring_to.P, x.ring.P, np.eye(1, dtype=np.int64), hi=n + 1)
    vals = x.ring.F.matmul(x.ring.functional(x)[None, :], c.on_gens(n))[0]
    return ring_to.from_cochain(n, vals)
