import json

import pytest

from floerfix import data_path
from floerfix.cli import EXIT_INPUT, EXIT_INVARIANT, EXIT_OK, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_hfk_trefoil_text_and_json_agree(capsys):
    code, text, _ = run(capsys, "hfk", data_path("trefoil.grid"))
    assert code == EXIT_OK
    assert "genus: 1" in text and "fibered: yes" in text and "r: 1" in text and "bound: 0" in text
    code, out, _ = run(capsys, "hfk", "--json", data_path("trefoil.grid"))
    doc = json.loads(out)
    assert (doc["genus"], doc["fibered"], doc["r"], doc["bound"]) == (1, True, 1, 0)
    assert doc["alexander_totals"] == [[1, 1], [0, 1], [-1, 1]]
    # every table row printed as text appears in the JSON document
    rows = [tuple(map(int, line.split())) for line in text.splitlines() if line.strip()[:1] in "-0123456789"]
    assert rows[: len(doc["table"])] == [tuple(t) for t in doc["table"]]
    assert rows[len(doc["table"]):] == [tuple(t) for t in doc["mirror_table"]]


def test_hfk_unknot(capsys):
    code, out, _ = run(capsys, "hfk", "--json", data_path("unknot2.grid"))
    doc = json.loads(out)
    assert code == 0 and doc["table"] == [[0, 0, 1]] and doc["bound"] == 0


def test_bound_accepts_saved_table(capsys, tmp_path):
    _, out, _ = run(capsys, "hfk", "--json", data_path("figure8.grid"))
    saved = tmp_path / "fig8.json"
    saved.write_text(out)
    code, text, _ = run(capsys, "bound", str(saved))
    assert code == 0 and "bound: 2" in text and "r: 3" in text


def test_bound_contradiction_exit_code(capsys, tmp_path):
    p = tmp_path / "t.json"
    p.write_text(json.dumps({"table": [[1, 1, 1], [-1, -1, 1]]}))
    code, text, _ = run(capsys, "bound", str(p))
    assert code == EXIT_INVARIANT and "contradiction" in text


def test_kunneth(capsys):
    t = data_path("trefoil.grid")
    code, out, _ = run(capsys, "kunneth", "--json", t, t)
    assert code == 0
    assert json.loads(out)["alexander_totals"] == [[2, 1], [1, 2], [0, 3], [-1, 2], [-2, 1]]


def test_mapclass_reports(capsys):
    code, text, err = run(capsys, "mapclass", data_path("flip_twist_swap.json"))
    assert code == 0 and not err
    assert "rank (corrected):    2" in text and "rank (uncorrected):  0" in text
    code, out, _ = run(capsys, "mapclass", "--json", data_path("flip_twist_swap.json"))
    doc = json.loads(out)
    assert (doc["rank"], doc["rank_uncorrected"], doc["nielsen"], doc["lefschetz"]) == (2, 0, 2, 2)
    for key in ("rank", "nielsen", "lefschetz", "slack"):
        assert str(doc[key]) in text
    code, out, err = run(capsys, "mapclass", data_path("identity_genus2.json"))
    assert code == 0 and "warning" in err and "rank (corrected):    6" in out


def test_mapclass_failed_identity_exit_code(capsys, tmp_path):
    data = json.loads(open(data_path("flip_twist_swap.json")).read())
    data["periodic_components"][0]["h1_trace"] = 3
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(data))
    code, text, _ = run(capsys, "mapclass", str(p))
    assert code == EXIT_INVARIANT and "FAIL" in text


def test_mapclass_euler_mismatch(capsys, tmp_path):
    data = json.loads(open(data_path("flip_twist_swap.json")).read())
    data["total_genus"] = 5
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(data))
    code, _, err = run(capsys, "mapclass", str(p))
    assert code == EXIT_INPUT and "chi = -2" in err and "= -8" in err


@pytest.mark.parametrize(
    "text, needle",
    [("3\n0 1 2\n1 1 0\n", "line 3"), ("3\n0 1\n", "line 2"), ("", "found 0"), ("# c\n3\n0 1 2\n0 2 1\n", "same cell")],
)
def test_malformed_grid_names_line(capsys, tmp_path, text, needle):
    p = tmp_path / "g.grid"
    p.write_text(text)
    code, _, err = run(capsys, "hfk", str(p))
    assert code == EXIT_INPUT and needle in err


def test_grid_cap_and_override(capsys):
    code, _, err = run(capsys, "hfk", "--max-grid", "6", data_path("t52.grid"))
    assert code == EXIT_INPUT and "--max-grid" in err
    code, _, _ = run(capsys, "hfk", "--max-grid", "7", data_path("t52.grid"))
    assert code == EXIT_OK


def test_usage_errors(capsys):
    assert run(capsys, "hfk", "/nonexistent/file.grid")[0] == EXIT_INPUT
    assert run(capsys, "hfk", "--seed", "3", data_path("trefoil.grid"))[0] == EXIT_INPUT
    assert run(capsys)[0] == EXIT_INPUT
    assert run(capsys, "frobnicate")[0] == EXIT_INPUT


def test_selftest_small(capsys):
    code, out, _ = run(capsys, "selftest", "--seed", "5", "--iters", "40", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["passed"]
    assert {s["name"]: s["cases"] for s in doc["suites"]} == {
        "f2_rank_vs_dense": 2, "surface_oracle": 60, "grid_d_squared": 4, "decomposition_identities": 40,
    }


def test_selftest_zero_iters_is_vacuous(capsys):
    code, out, _ = run(capsys, "selftest", "--iters", "0")
    assert code == 0 and "PASS" in out


def test_threads_flag_does_not_change_output(capsys):
    outs = [run(capsys, "hfk", "--threads", k, data_path("figure8.grid"))[1] for k in ("1", "8")]
    assert outs[0] == outs[1]
