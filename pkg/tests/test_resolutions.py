import numpy as np
import pytest

from prodcoh.cohomology import Cohomology
from prodcoh.complexes import Composite, Identity, is_chain_map
from prodcoh.errors import BudgetExceeded, UnsupportedGroup
from prodcoh.field import parse_field
from prodcoh.group import preset_group
from prodcoh.resolutions import (ResolutionConfig, bar_resolution, lift_map, make_resolution,
                                 minimal_resolution)

from oracles import elementary_abelian_dim, q8_dims

GF2, GF3 = parse_field("2"), parse_field("3")


@pytest.mark.parametrize("group, field, ranks", [
    ("C2", GF2, [1] * 7),
    ("C4", GF2, [1] * 7),
    ("C2xC2", GF2, list(range(1, 8))),
    ("Q8", GF2, q8_dims(6)),
    ("C3", GF3, [1] * 7),
    ("C2xC2xC2", GF2, [elementary_abelian_dim(3, n) for n in range(7)]),
])
def test_minimal_ranks(group, field, ranks):
    P = minimal_resolution(preset_group(group), field, 6)
    assert P.ranks[:7] == ranks


def test_d8_ranks():
    P = minimal_resolution(preset_group("D8"), GF2, 5)
    assert P.ranks[:6] == [1, 2, 3, 4, 5, 6]


@pytest.mark.parametrize("group, field", [("C2xC2", GF2), ("Q8", GF2), ("C3xC3", GF3), ("D8", GF2)])
def test_contraction_identities(group, field):
    P = minimal_resolution(preset_group(group), field, 5)
    assert P.cx.check()
    assert P.verify()


@pytest.mark.parametrize("group", ["C2", "C2xC2", "C4"])
def test_bar_and_minimal_agree(group):
    G = preset_group(group)
    B = bar_resolution(G, GF2, 4)
    assert B.cx.check() and B.verify()
    assert Cohomology(B).dims(3) == Cohomology(minimal_resolution(G, GF2, 4)).dims(3)


def test_bar_budget():
    with pytest.raises(BudgetExceeded):
        bar_resolution(preset_group("Q8"), GF2, 6, budget=1000)
    with pytest.raises(BudgetExceeded):
        make_resolution(preset_group("Q8"), GF2, ResolutionConfig(kind="bar", degree=6, budget=1000))


def test_unsupported_group():
    with pytest.raises(UnsupportedGroup):
        minimal_resolution(preset_group("C3"), GF2, 3)
    with pytest.raises(UnsupportedGroup):
        minimal_resolution(preset_group("C6"), GF2, 3)


@pytest.mark.parametrize("kind", ["minimal", "bar"])
def test_diagonal_is_chain_map(kind):
    G = preset_group("C2xC2")
    P = make_resolution(G, GF2, ResolutionConfig(kind=kind, degree=4))
    D = P.diagonal()
    assert is_chain_map(D, hi=3)
    assert D.src is P.cx


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_seeded_resolutions_same_ranks(seed):
    G = preset_group("Q8")
    P = minimal_resolution(G, GF2, 5, seed=seed)
    assert P.ranks[:6] == q8_dims(5)
    assert P.verify()


def test_lift_of_identity_is_chain_map():
    G = preset_group("C2xC2")
    P = minimal_resolution(G, GF2, 5)
    P2 = minimal_resolution(G, GF2, 5, seed=4)
    f = lift_map(P, P2, np.eye(1, dtype=np.int64), hi=5)
    g = lift_map(P2, P, np.eye(1, dtype=np.int64), hi=5)
    assert is_chain_map(f, hi=4) and is_chain_map(g, hi=4)
    # g f lifts the identity, so it differs from the identity by a null-homotopic map
    from prodcoh.complexes import find_homotopy
    H = find_homotopy(Composite(g, f), Identity(P.cx), through=3)
    assert H is not None
