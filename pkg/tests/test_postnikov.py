import pytest

from prodcoh.acceptance import ring_for
from prodcoh.complexes import Composite, is_chain_map, maps_equal, projection
from prodcoh.errors import ObstructionNonzero, TruncationUnderflow
from prodcoh.postnikov import (PostnikovConfig, build_p_zeta, build_psi, choice_independence_check,
                               lift_comultiplication, obstruction, transfer_class)
from prodcoh.steenrod import is_productive, residue, sq_top_minus_one

from helpers import GF4, c2xc2


@pytest.mark.parametrize("expr, dims", [("x+y", [2, 0, 0, 0]), ("x^2+x*y+y^2", [1, 1, 0, 0, 0, 0])])
def test_sphere_complex_homology(expr, dims):
    R = c2xc2()
    S = build_p_zeta(R.parse(expr))
    assert S.total.check(hi=S.window)
    assert S.homology_dims(len(dims) - 1) == dims


def test_window_needs_resolution_depth():
    R = ring_for("C2xC2", "2", 4)
    with pytest.raises(TruncationUnderflow):
        build_p_zeta(R.parse("x^2"))


@pytest.mark.parametrize("expr", ["x", "x^2", "x^2+x*y+y^2"])
def test_psi_is_chain_map(expr):
    R = c2xc2()
    S = build_p_zeta(R.parse(expr))
    data = build_psi(S)
    assert is_chain_map(data.psi, hi=S.window - 1)
    assert is_chain_map(data.eta, hi=S.window - 1)


@pytest.mark.parametrize("field", ["2", GF4])
def test_obstruction_matches_criterion_degree_one_and_two(field):
    R = ring_for("C2xC2", field, 7)
    classes = list(R.all_classes(1)) + list(R.all_classes(2))[:12]
    for z in classes:
        r = obstruction(z)
        assert r.vanishes == (is_productive(z).status == "Yes")
        assert r.closed_form_agrees
        if r.vanishes:
            assert r.witness is not None and r.witness.degree == z.degree - 1
        else:
            assert not residue(r.residue, z).is_zero()


def test_quadric_residue_is_the_square_residue():
    R = c2xc2()
    z = R.parse("x^2+x*y+y^2")
    r = obstruction(z)
    assert not r.vanishes
    assert residue(r.residue, z) == residue(sq_top_minus_one(z), z)


def test_lift_and_counits():
    R = c2xc2()
    z = R.parse("x+y")
    data = build_psi(build_p_zeta(z))
    c = lift_comultiplication(z, data=data)
    assert is_chain_map(c.lift, hi=3)
    assert c.counit_right is not None and c.counit_left is not None
    top = Composite(projection(c.target, 1), c.lift)
    assert maps_equal(top, data.psi, hi=3)


def test_lift_refused_when_obstructed():
    R = c2xc2()
    with pytest.raises(ObstructionNonzero):
        lift_comultiplication(R.parse("x^2+x*y+y^2"))


def test_odd_prime_even_class_lifts():
    R = ring_for("C3", "3", 7)
    z = R.parse("2:1")
    assert obstruction(z).vanishes
    c = lift_comultiplication(z)
    assert c.counit_right is not None


def test_odd_prime_degree_one_is_obstructed():
    R = ring_for("C3", "3", 7)
    assert not obstruction(R.parse("x")).vanishes


@pytest.mark.parametrize("expr", ["x", "x^2+x*y+y^2", "x*y"])
def test_choice_independence(expr):
    R = c2xc2()
    z = R.parse(expr)
    rep = choice_independence_check(z, PostnikovConfig(seed=5, trials=2))
    assert rep["consistent"] and len(rep["trials"]) == 2
    for t in rep["trials"]:
        if t["residue"] is not None:
            assert residue(t["residue"] - rep["residue"], z).is_zero()


@pytest.mark.parametrize("group", ["C2xC2", "Q8"])
def test_transfer_class_round_trip(group):
    R = ring_for(group, "2", 7)
    R2 = ring_for(group, "2", 7, 11)
    for n in (1, 2):
        for x in R.all_classes(n):
            y = transfer_class(x, R2)
            assert transfer_class(y, R) == x
            assert transfer_class(sq_top_minus_one(y), R) == sq_top_minus_one(x)
