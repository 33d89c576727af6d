"""The ten acceptance criteria; each prints one PASS/FAIL line."""

import time

import pytest

from prodcoh.acceptance import CHECKS, ring_for
from prodcoh.steenrod import massey_triple

from oracles import CyclicMasseyOracle

C4_REASON = ("<x,x,x> on C4 over GF(2) is zero: the brute-force search over all defining systems "
             "returns only 0 and the indeterminacy is trivial, so a nonzero value cannot be produced")


def _params():
    out = []
    for i, check in enumerate(CHECKS, 1):
        marks = [pytest.mark.xfail(strict=True, reason=C4_REASON)] if check.expected_failure else []
        out.append(pytest.param(check, id=f"{i:02d}-{check.name.replace(' ', '_')}", marks=marks))
    return out


@pytest.mark.parametrize("check", _params())
def test_criterion(check, capsys):
    t = time.perf_counter()
    ok, detail = check.run()
    dt = time.perf_counter() - t
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} {check.name} ({dt:.1f}s) {detail}")
    assert ok, detail


def test_c4_cube_value_matches_brute_force():
    R = ring_for("C4", "2", 6)
    x = R.parse("x")
    rep, J = massey_triple(x, x, x)
    brute = CyclicMasseyOracle(2, 4).triple_values(max_lifts=2)
    assert brute == {int(rep.coords[0])} == {0} and len(J) == 0
