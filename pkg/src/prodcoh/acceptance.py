"""End-to-end checks of the worked examples and cross-consistency claims.

Each check returns (ok, detail).  They back both `prodcoh selftest` and the
acceptance test module.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .cohomology import Cohomology
from .complexes import (Composite, Cross, Identity, TensorContracted, Transposition, extension_rotate, find_homotopy,
                        hom_differential, is_chain_map, maps_equal)
from .field import parse_field
from .group import preset_group
from .oracle import oracle_productive, oracle_semiproductive
from .postnikov import build_p_zeta, lift_comultiplication, obstruction, transfer_class
from .resolutions import bar_resolution, minimal_resolution
from .steenrod import (hirsch_residue, is_productive, is_semiproductive, massey_mu, massey_triple, residue,
                       sq_top_minus_one)

GF4 = "2^2:1,1,1"


@lru_cache(maxsize=None)
def ring_for(group: str, field: str, degree: int, seed=None) -> Cohomology:
    return Cohomology(minimal_resolution(preset_group(group), parse_field(field), degree, seed=seed))


@dataclass(frozen=True)
class Check:
    name: str
    run: Callable
    slow: bool = False
    expected_failure: bool = False


def _fail(msgs):
    return (not msgs), ("ok" if not msgs else "; ".join(msgs[:5]))


# ---------------------------------------------------------------- examples


def check_gf4_degree_one():
    R = ring_for("C2xC2", GF4, 6)
    msgs = []
    want = {"x": "Yes", "x+y": "Yes", "x+a*y": "No", "x+a^2*y": "No"}
    for e, status in want.items():
        got = is_productive(R.parse(e)).status
        if got != status:
            msgs.append(f"productive({e}) = {got}")
    sq = sq_top_minus_one(R.parse("x+a*y"))
    if sq != R.parse("x+a^2*y"):
        msgs.append(f"square of x+a*y is {sq}")
    return _fail(msgs)


def check_quadric_class():
    R = ring_for("C2xC2", "2", 10)
    z = R.parse("x^2+x*y+y^2")
    msgs = []
    sq = sq_top_minus_one(z)
    if sq != R.parse("x^2*y+x*y^2"):
        msgs.append(f"square is {sq}")
    if is_productive(z).status != "No":
        msgs.append("expected not productive")
    v = is_semiproductive(z, 6)
    if v.label() != "YesUpToDegree(6)":
        msgs.append(f"semi verdict {v.label()}")
    if any(R.annihilator_basis(z, d) for d in range(7)):
        msgs.append("nonzero annihilator")
    return _fail(msgs)


def check_quaternion_gf4():
    R = ring_for("Q8", GF4, 6)
    z, u = R.parse("a*x+y"), R.parse("a^2*x+y")
    msgs = []
    if not R.cup(z, u).is_zero():
        msgs.append("z.u is not zero")
    prod = R.cup(u, sq_top_minus_one(z))
    if prod != R.parse("a*x^2+y^2"):
        msgs.append(f"u.Sq z = {prod}")
    if residue(prod, z).is_zero():
        msgs.append("residue vanishes")
    v = is_semiproductive(z, 3)
    if v.status != "No" or v.witness != u:
        msgs.append(f"semi verdict {v.label()} witness {v.witness}")
    return _fail(msgs)


# ---------------------------------------------------------------- cross-consistency


def obstruction_corpus():
    out = []
    for field in ("2", GF4):
        R = ring_for("C2xC2", field, 7)
        for n in (1, 2):
            out.extend(R.all_classes(n))
    R = ring_for("Q8", "2", 7)
    out.extend(R.all_classes(1))
    return out


def check_obstruction_vs_criterion():
    msgs, count = [], 0
    for z in obstruction_corpus():
        r = obstruction(z)
        ok, _ = z.ring.ideal_member(sq_top_minus_one(z), z)
        count += 1
        if r.vanishes != ok:
            msgs.append(f"{z} ({z.ring.F.q}): obstruction {r.vanishes}, criterion {ok}")
        if not r.closed_form_agrees:
            msgs.append(f"{z}: closed form residue {r.closed_form} vs {r.residue}")
    ok, detail = _fail(msgs)
    return ok, f"{count} classes; {detail}"


def oracle_corpus():
    out = []
    R = ring_for("C2xC2", "2", 9)
    out += list(R.all_classes(1)) + list(R.all_classes(2))
    Rq = ring_for("Q8", "2", 9)
    out += list(Rq.all_classes(1))
    R4 = ring_for("C2xC2", GF4, 9)
    out += [R4.parse("x+a*y"), R4.parse("x+y")]
    return out


def check_criterion_vs_oracle(cap=4):
    msgs, seen = [], set()
    for z in oracle_corpus():
        a, b = is_productive(z), oracle_productive(z, cap)
        c, d = is_semiproductive(z, cap), oracle_semiproductive(z, cap)
        seen.add(a.status)
        if a.positive != b.positive:
            msgs.append(f"productive {z}: {a.label()} vs oracle {b.label()}")
        if c.positive != d.positive:
            msgs.append(f"semiproductive {z}: {c.label()} vs oracle {d.label()}")
    if not {"Yes", "No"} <= seen:
        msgs.append("corpus does not span both verdicts")
    ok, detail = _fail(msgs)
    return ok, f"{len(oracle_corpus())} classes; {detail}"


def check_hirsch(max_total=5, fields=("2",)):
    msgs, pairs = [], 0
    for group in ("C2xC2", "C4", "Q8"):
        for field in fields:
            R = ring_for(group, field, max_total + 2)
            for n in (1, 2):
                for z in R.all_classes(n):
                    for d in range(0, max_total + 2 - 2 * n):
                        for v in R.annihilator_basis(z, d):
                            if 2 * n + d - 1 > max_total:
                                continue
                            pairs += 1
                            if massey_mu(z, v) != hirsch_residue(z, v):
                                msgs.append(f"{group}: z={z}, v={v}")
    ok, detail = _fail(msgs)
    return ok and pairs > 0, f"{pairs} pairs; {detail}"


def check_odd_prime(groups=("C3", "C3xC3")):
    msgs, count = [], 0
    for group in groups:
        R = ring_for(group, "3", 7)
        for z in R.all_classes(2):
            count += 1
            r = obstruction(z)
            if not r.vanishes:
                msgs.append(f"{group} {z}: obstruction nonzero")
                continue
            c = lift_comultiplication(z)
            if c.counit_right is None or c.counit_left is None:
                msgs.append(f"{group} {z}: no counit homotopy")
    ok, detail = _fail(msgs)
    return ok, f"{count} classes; {detail}"


# ---------------------------------------------------------------- structure


def check_structure():
    msgs = []
    for group, field, deg in (("C2xC2", "2", 8), ("Q8", "2", 8), ("C3", "3", 6), ("C4", "2", 6)):
        R = ring_for(group, field, deg + 1)
        P = R.P
        if not P.cx.check():
            msgs.append(f"d^2 != 0 on {group}")
        if not P.verify():
            msgs.append(f"contraction fails on {group}")
    R = ring_for("C2xC2", "2", 9)
    if R.dims(8) != list(range(1, 10)):
        msgs.append(f"C2xC2 dims {R.dims(8)}")
    Rq = ring_for("Q8", "2", 9)
    if Rq.dims(7) != [1, 2, 2, 1, 1, 2, 2, 1]:
        msgs.append(f"Q8 dims {Rq.dims(7)}")
    # transposition
    P = R.P
    T = Transposition(P.cx, P.cx)
    if not maps_equal(Composite(T, T), Identity(T.src), hi=6) or not is_chain_map(T, hi=6):
        msgs.append("T^2 != 1 or T not a chain map")
    if not TensorContracted(P, P).verify(hi=5):
        msgs.append("tensor contraction fails")
    # cross-product sign law over GF(3)
    R3 = ring_for("C3", "3", 8)
    x, y = R3.lift(R3.parse("x")), R3.lift(R3.parse("2:1"))
    lhs = Composite(Cross(x, y), Cross(y, x))
    rhs = Cross(Composite(x, y), Composite(y, x))
    if not maps_equal(lhs, rhs, hi=7):
        msgs.append("cross-product sign law")
    lhs = Composite(Cross(x, x), Cross(x, y))
    rhs = Cross(Composite(x, x), Composite(x, y))
    if not maps_equal(lhs, -rhs, hi=7):
        msgs.append("cross-product sign law (odd)")
    # find_homotopy soundness
    D = P.diagonal()
    H = find_homotopy(D, Composite(T, D), through=4)
    if H is None or not maps_equal(hom_differential(H), D - Composite(T, D), hi=4):
        msgs.append("find_homotopy")
    # extension rotation
    z = R.parse("x^2")
    S = build_p_zeta(z)
    Ap, j, q, Hr = extension_rotate(S.total)
    if not maps_equal(hom_differential(Hr), Identity(Ap) - Composite(j, q), hi=5):
        msgs.append("rotation identity")
    if not maps_equal(Composite(q, j), Identity(S.Q), hi=5):
        msgs.append("q j != 1")
    # bar versus minimal
    for group in ("C2", "C2xC2"):
        G, F2 = preset_group(group), parse_field("2")
        B = bar_resolution(G, F2, 4)
        M = minimal_resolution(G, F2, 4)
        if Cohomology(B).dims(3) != Cohomology(M).dims(3):
            msgs.append(f"bar and minimal disagree on {group}")
    return _fail(msgs)


def _null_transfer_ok(z, R2):
    """Sq and the obstruction verdict computed on another resolution agree with the originals."""
    z2 = transfer_class(z, R2)
    back = transfer_class(sq_top_minus_one(z2), z.ring)
    return back == sq_top_minus_one(z), obstruction(z2).vanishes


def check_choices(seeds=(1, 2, 3)):
    msgs, count = [], 0
    corpus = [z for z in ring_for("C2xC2", "2", 7).all_classes(1)] + \
             [z for z in ring_for("C2xC2", "2", 7).all_classes(2)] + \
             [z for z in ring_for("Q8", "2", 7).all_classes(1)]
    for z in corpus:
        ref = obstruction(z).vanishes
        group = "Q8" if z.ring.G.order == 8 else "C2xC2"
        for seed in seeds:
            count += 1
            same_sq, verdict = _null_transfer_ok(z, ring_for(group, "2", 7, seed))
            if not same_sq:
                msgs.append(f"{z}: square moved under seed {seed}")
            if verdict != ref:
                msgs.append(f"{z}: verdict moved under seed {seed}")
        from .postnikov import PostnikovConfig, choice_independence_check

        rep = choice_independence_check(z, PostnikovConfig(seed=7, trials=len(seeds)))
        if not rep["consistent"]:
            msgs.append(f"{z}: verdict moved under perturbed homotopies")
        for t in rep["trials"]:
            if t["residue"] is not None and rep["residue"] is not None:
                if not residue(t["residue"] - rep["residue"], z).is_zero():
                    msgs.append(f"{z}: residue moved outside the ideal")
    ok, detail = _fail(msgs)
    return ok, f"{count} regenerations; {detail}"


def check_cyclic_massey():
    R = ring_for("C4", "2", 6)
    x = R.parse("x")
    rep, J = massey_triple(x, x, x)
    ok = not rep.is_zero() and len(J) == 0
    return ok, f"<x,x,x> = {rep.key()} with indeterminacy dim {len(J)}"


CHECKS = [
    Check("GF(4) degree-one classes on C2xC2", check_gf4_degree_one),
    Check("quadric class on C2xC2", check_quadric_class),
    Check("Q8 over GF(4)", check_quaternion_gf4),
    Check("obstruction versus criterion", check_obstruction_vs_criterion, slow=True),
    Check("criterion versus module oracle", check_criterion_vs_oracle, slow=True),
    Check("Massey and Hirsch residues", check_hirsch),
    Check("odd characteristic lifts", check_odd_prime, slow=True),
    Check("structural invariants", check_structure),
    Check("independence of choices", check_choices, slow=True),
    Check("Massey cube on C4", check_cyclic_massey, expected_failure=True),
]
