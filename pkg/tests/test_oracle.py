import numpy as np
import pytest

from prodcoh.acceptance import ring_for
from prodcoh.cohomology import Cohomology
from prodcoh.errors import NotMinimal, ZeroClass
from prodcoh.field import parse_field
from prodcoh.group import RepModule, preset_group
from prodcoh.oracle import (ExtGroups, OracleConfig, default_cap, ext_dims, lzeta, module_resolution, omega,
                            oracle_productive, oracle_semiproductive)
from prodcoh.resolutions import bar_resolution

from helpers import GF4, c2xc2, oracle_field, to_poly
from oracles import c2xc2_productive, q8_dims


def test_syzygy_dimensions():
    P = c2xc2().P
    assert [omega(n, P)[0].dim for n in range(5)] == [2 * n + 1 for n in range(5)]
    Pq = ring_for("Q8", "2", 9).P
    assert [omega(n, Pq)[0].dim for n in range(6)] == [1, 7, 9, 7, 1, 7]


def test_syzygy_needs_minimal_resolution():
    B = bar_resolution(preset_group("C2"), parse_field("2"), 3)
    with pytest.raises(NotMinimal):
        omega(1, B)


@pytest.mark.parametrize("group, field, n", [("C2xC2", "2", 1), ("C2xC2", "2", 2), ("Q8", "2", 1), ("C3", "3", 2)])
def test_lzeta_has_codimension_one(group, field, n):
    R = ring_for(group, field, 7)
    for z in list(R.all_classes(n))[:6]:
        L, basis = lzeta(z)
        assert L.dim == omega(n, R.P)[0].dim - 1


def test_lzeta_rejects_zero():
    with pytest.raises(ZeroClass):
        lzeta(c2xc2().zero(1))


@pytest.mark.parametrize("group, field, hi", [("C2xC2", "2", 5), ("Q8", "2", 6), ("C3", "3", 4)])
def test_ext_of_trivial_module_is_cohomology(group, field, hi):
    R = ring_for(group, field, 8)
    k = RepModule.trivial(R.G, R.F)
    PM = module_resolution(k, R.G, R.F, hi + 1)
    assert ext_dims(PM, k, hi) == R.dims(hi)


def test_ext_of_syzygy_is_shifted():
    R = c2xc2("2", 8)
    O2, _ = omega(2, R.P)
    PM = module_resolution(O2, R.G, R.F, 5)
    # Ext^i(Omega^2 k, k) = H^{i+2} for i >= 1
    assert ext_dims(PM, RepModule.trivial(R.G, R.F), 4)[1:] == R.dims(6)[3:]


def test_default_caps():
    F2, F4 = parse_field("2"), parse_field(GF4)
    assert default_cap(preset_group("Q8"), F4) == 4
    assert default_cap(preset_group("Q8"), F2) == 6
    assert default_cap(preset_group("C2xC2"), F4) == 6
    assert OracleConfig(cap=2).resolve(preset_group("Q8"), F4) == 2


@pytest.mark.parametrize("field", ["2", GF4])
def test_oracle_productive_matches_polynomial_criterion(field):
    R = c2xc2(field, 7)
    Fo = oracle_field(R.F)
    zs = list(R.all_classes(1)) + ([R.parse("x^2+x*y+y^2"), R.parse("x^2")] if field == "2" else [])
    for z in zs:
        v = oracle_productive(z, 4)
        assert v.positive == c2xc2_productive(Fo, to_poly(z), z.degree)
        assert v.status in ("No", "YesUpToDegree")


def test_oracle_semiproductive_quadric():
    R = c2xc2("2", 7)
    v = oracle_semiproductive(R.parse("x^2+x*y+y^2"), 4)
    assert v.label() == "YesUpToDegree(4)"


def test_oracle_q8_gf4_semiproductive_negative():
    R = ring_for("Q8", GF4, 6)
    v = oracle_semiproductive(R.parse("a*x+y"), 4)
    assert v.status == "No" and v.witness["degree"] >= 0


def test_ext_groups_have_cocycle_bases():
    R = c2xc2("2", 6)
    k = RepModule.trivial(R.G, R.F)
    E = ExtGroups(module_resolution(k, R.G, R.F, 4), k)
    for i in range(3):
        B = E.space(i).basis
        assert B.shape[0] == E.dim(i) == i + 1
        assert np.all((B >= 0) & (B < 2))
    assert Cohomology(R.P).dims(3) == [1, 2, 3, 4]
    assert q8_dims(3) == [1, 2, 2, 1]
