import json

import pytest

from prodcoh.cli import RunConfig, main, run_command
from prodcoh.group import preset_group


def run_json(capsys, *argv):
    code = main(list(argv) + ["--json"])
    out = capsys.readouterr().out
    assert code == 0, out
    return json.loads(out), out


def test_ring_dims(capsys):
    rep, _ = run_json(capsys, "ring", "--group", "C2xC2", "--field", "2", "--cap", "5")
    assert rep["witness"]["dims"] == [1, 2, 3, 4, 5, 6]
    assert rep["witness"]["generators"] == ["x", "y"]


def test_productive_quadric(capsys):
    rep, _ = run_json(capsys, "productive", "--group", "C2xC2", "--field", "2", "--expr", "x^2+x*y+y^2")
    assert set(rep) >= {"command", "group", "field", "class", "status", "certified_degree", "witness"}
    assert rep["status"] == "No" and rep["witness"]["expr"] == "y^3"


def test_semiproductive_q8_gf4(capsys):
    rep, _ = run_json(capsys, "semiproductive", "--group", "Q8", "--field", "2^2:1,1,1", "--expr", "a*x+y",
                      "--cap", "4")
    assert rep["status"] == "No" and rep["witness"]["expr"] == "a^2*x+y"


def test_semiproductive_quadric_bounded(capsys):
    rep, _ = run_json(capsys, "semiproductive", "--group", "C2xC2", "--expr", "x^2+x*y+y^2", "--cap", "3")
    assert rep["status"] == "YesUpToDegree" and rep["certified_degree"] == 3


def test_cup_sq_massey(capsys):
    rep, _ = run_json(capsys, "cup", "--group", "C2xC2", "--expr", "x", "--expr", "y")
    assert rep["witness"]["expr"] == "x*y"
    rep, _ = run_json(capsys, "sq", "--group", "C2xC2", "--field", "2^2:1,1,1", "--expr", "x+a*y")
    assert rep["witness"]["expr"] == "x+a^2*y"
    rep, _ = run_json(capsys, "massey", "--group", "C3", "--field", "3", "--expr", "x", "--expr", "x",
                      "--expr", "x")
    assert rep["witness"]["coords"] == "2:2" and rep["indeterminacy"] == []


def test_oracle_and_obstruction(capsys):
    rep, _ = run_json(capsys, "oracle", "--group", "C2xC2", "--expr", "x^2+x*y+y^2", "--cap", "4")
    assert rep["status"] == "No"
    rep, _ = run_json(capsys, "oracle", "--group", "C2xC2", "--expr", "x", "--cap", "3")
    assert rep["status"] == "YesUpToDegree"
    rep, _ = run_json(capsys, "obstruction", "--group", "C2xC2", "--expr", "x^2+x*y+y^2")
    assert rep["vanishes"] is False and rep["residue_coords"] == rep["witness"]["coords"]
    rep, _ = run_json(capsys, "obstruction", "--group", "C2xC2", "--expr", "x^2")
    assert rep["vanishes"] is True


def test_coords_round_trip(capsys):
    rep, _ = run_json(capsys, "sq", "--group", "Q8", "--expr", "x")
    coords = rep["witness"]["coords"]
    rep2, _ = run_json(capsys, "productive", "--group", "Q8", "--coords", coords)
    assert rep2["class"]["coords"] == coords


def test_json_is_deterministic(capsys):
    argv = ["productive", "--group", "C2xC2", "--expr", "x^2+x*y+y^2", "--seed", "3"]
    _, a = run_json(capsys, *argv)
    _, b = run_json(capsys, *argv)
    assert a == b


def test_text_output(capsys):
    assert main(["productive", "--group", "C2xC2", "--expr", "x^2+x*y+y^2"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("productive x^2+x*y+y^2: No") and "witness: y^3" in out


def test_group_file(tmp_path, capsys):
    p = tmp_path / "g.json"
    p.write_text(json.dumps({"order": 4, "table": preset_group("C4").table.tolist()}))
    rep, _ = run_json(capsys, "ring", "--group-file", str(p), "--cap", "3")
    assert rep["witness"]["dims"] == [1, 1, 1, 1]


def test_degree_cap_and_bar_resolution(capsys):
    rep, _ = run_json(capsys, "ring", "--group", "C2", "--resolution", "bar", "--cap", "3")
    assert rep["witness"]["dims"] == [1, 1, 1, 1]
    rep, _ = run_json(capsys, "cup", "--group", "C2xC2", "--expr", "x", "--expr", "x", "--degree-cap", "7")
    assert rep["witness"]["expr"] == "x^2"


@pytest.mark.parametrize("argv", [
    ["productive", "--group", "C2xC2", "--expr", "x+*y"],
    ["productive", "--group", "C2xC2", "--expr", "x+y^2"],
    ["productive", "--group", "S3", "--expr", "x"],
    ["ring", "--group", "C3", "--field", "2"],
    ["ring", "--group", "C2", "--field", "4"],
    ["productive", "--group", "C2xC2"],
    ["productive", "--group", "C2xC2", "--expr", "0"],
    ["ring", "--group-file", "/nonexistent/table.json"],
])
def test_input_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert "error:" in capsys.readouterr().err


def test_corrupted_group_file_exit_2(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"order": 2, "table": [[0, 1], [1, 1]]}))
    assert main(["ring", "--group-file", str(p)]) == 2
    assert "NotLatinSquare" in capsys.readouterr().err


def test_budget_exit_3(capsys):
    assert main(["ring", "--group", "Q8", "--resolution", "bar", "--cap", "6"]) == 3
    assert "BudgetExceeded" in capsys.readouterr().err


def test_parse_error_reports_position(capsys):
    main(["cup", "--group", "C2xC2", "--expr", "x+*y", "--expr", "x"])
    assert "position 2" in capsys.readouterr().err


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig("ring")
    with pytest.raises(ValueError):
        RunConfig("ring", group="C2", group_file="x.json")
    assert run_command(RunConfig("ring", group="C2", cap=2))["witness"]["dims"] == [1, 1, 1]


def test_selftest_quick(capsys):
    assert main(["selftest", "--quick"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 5 and out.count("SKIP") == 4 and "XFAIL" in out
