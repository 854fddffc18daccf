"""Catalog entries, the rank-2 survey, and the CLI contract."""

import json
import subprocess
import sys
from fractions import Fraction as Q

import pytest

from gokit import jsonio
from gokit.catalog import ARITY_GRIDS, catalog_list, get_entry, run_survey_rank2
from gokit.cli import main
from gokit.decomp import standard_partition
from gokit.engine import make_metric
from gokit.roots import build_root_system

EXPECTED_IDS = [
    "so5-u2", "so7-u3", "so9-u4", "sp2-u1sp1", "sp3-u1sp2",
    "su3-t2", "su3-su2u1", "su3-su2",
    "g2-u2-long", "g2-u2-short", "g2-su2su2", "su2-group",
]

EXPECTED_DIMS = {
    "so5-u2": (4, 6), "so7-u3": (9, 12), "so9-u4": (16, 20),
    "sp2-u1sp1": (4, 6), "sp3-u1sp2": (11, 10),
    "su3-t2": (2, 6), "su3-su2u1": (4, 4), "su3-su2": (3, 5),
    "g2-u2-long": (4, 10), "g2-u2-short": (4, 10), "g2-su2su2": (6, 8),
    "su2-group": (0, 3),
}


def test_catalog_ids_and_dims():
    entries = catalog_list()
    assert [e.id for e in entries] == EXPECTED_IDS
    for e in entries:
        space, blocks = e.build()
        assert (space.dim_h, space.dim_m) == EXPECTED_DIMS[e.id], e.id
        assert len(blocks) == e.arity
        assert sorted(i for blk in blocks for i in blk) == list(range(space.dim_m))
        assert e.description and e.claim
        assert set(e.expected) <= {"normal", "proper"}


def test_get_entry_unknown():
    with pytest.raises(KeyError):
        get_entry("so11-u5")


def test_survey_outcomes_match_entry_expectations():
    report = run_survey_rank2(n_samples=60, seed=0)
    assert report["survivors_unequal"] == ["so5-u2", "sp2-u1sp1"]
    by_id = {e["id"]: e for e in report["entries"]}
    surveyed = {e.id for e in catalog_list() if e.rank2_survey}
    assert set(by_id) == surveyed
    for e in catalog_list():
        if not e.rank2_survey:
            continue
        rows = by_id[e.id]["rows"]
        assert len(rows) == len(ARITY_GRIDS[e.arity])
        for row in rows:
            xs = [Q(s) for s in row["x"]]
            kind = "normal" if len(set(xs)) == 1 else "proper"
            want = e.expected.get(kind)
            if want == "no_counterexample":
                assert row["outcome"] == "no_counterexample", (e.id, row)
            elif want == "not_go":
                assert row["outcome"] == "not_go", (e.id, row)
                assert isinstance(row["sample_index"], int)
            elif want == "invalid_metric":
                assert row["outcome"] == "invalid_metric", (e.id, row)


def _run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, jsonio.loads(out)


def test_cli_rootsys_gen(capsys):
    code, doc = _run(["rootsys", "gen", "--family", "B", "--rank", "3"], capsys)
    assert code == 0
    assert doc["command"] == "rootsys gen"
    assert doc["config"] == {"family": "B", "rank": 3}
    assert doc["result"]["num_roots"] == 18
    assert isinstance(doc["timing_ms"], int)


def test_cli_decomp_enumerate_and_budget(capsys, monkeypatch):
    code, doc = _run(["decomp", "enumerate", "--family", "C", "--rank", "2"], capsys)
    assert code == 0
    res = doc["result"]
    assert res["raw_count"] == 4 and res["classes"] == 1 and res["nodes"] == 66
    assert len(res["class_representatives"]) == 1
    code, doc = _run(["decomp", "enumerate", "--family", "B", "--rank", "4",
                      "--budget", "10"], capsys)
    assert code == 1
    assert doc["result"]["error"]["type"] == "SearchBudgetExceeded"
    monkeypatch.setenv("GOKIT_BUDGET", "10")
    code, doc = _run(["decomp", "enumerate", "--family", "B", "--rank", "4"], capsys)
    assert code == 1 and doc["config"]["budget"] == 10
    # explicit flag wins over the environment
    code, doc = _run(["decomp", "enumerate", "--family", "B", "--rank", "4",
                      "--budget", "100000"], capsys)
    assert code == 0 and doc["config"]["budget"] == 100000


def test_cli_decomp_check_and_expect(tmp_path, capsys):
    tp = standard_partition(build_root_system("B", 2))
    good = tmp_path / "std.json"
    good.write_text(jsonio.dumps(tp.to_json_dict()))
    code, doc = _run(["decomp", "check", "--input", str(good),
                      "--expect", "true", "--diagnostics"], capsys)
    assert code == 0
    assert doc["result"]["verdict"] is True
    assert doc["result"]["literal_conditions"]
    code, doc = _run(["decomp", "check", "--input", str(good),
                      "--expect", "false"], capsys)
    assert code == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, doc = _run(["decomp", "check", "--input", str(bad)], capsys)
    assert code == 2
    floaty = tmp_path / "floaty.json"
    floaty.write_text('{"family": "B", "rank": 2, "R0": [[1.5, 0]], "R1": [], "R2": []}')
    code, doc = _run(["decomp", "check", "--input", str(floaty)], capsys)
    assert code == 2
    code, doc = _run(["decomp", "check", "--input", str(tmp_path / "missing.json")], capsys)
    assert code == 2


def test_cli_decomp_standard(capsys):
    code, doc = _run(["decomp", "standard", "--family", "C", "--rank", "3"], capsys)
    assert code == 0
    assert doc["result"]["special"] is True
    assert doc["result"]["partition"]["R2"] == [["-2", "0", "0"], ["2", "0", "0"]]
    code, doc = _run(["decomp", "standard", "--family", "A", "--rank", "2"], capsys)
    assert code == 2


def test_cli_algebra_verify(tmp_path, capsys):
    out = tmp_path / "table.json"
    code, doc = _run(["algebra", "verify", "--family", "G", "--rank", "2",
                      "--export", str(out)], capsys)
    assert code == 0
    assert doc["result"]["ok"] is True and doc["result"]["dim"] == 14
    exported = jsonio.loads(out.read_text())
    assert exported["system"] == "G2" and len(exported["basis"]) == 14


def test_cli_go_check_paths(capsys):
    code, doc = _run(["go", "check", "--space", "so5-u2", "--x", "1,3",
                      "--samples", "25", "--seed", "0", "--expect", "go"], capsys)
    assert code == 0
    assert doc["result"]["status"] == "NoCounterexampleFound"
    assert doc["result"]["expectation_met"] is True
    code, doc = _run(["go", "check", "--space", "su3-t2", "--x", "1,1,2",
                      "--samples", "25", "--seed", "0", "--expect", "notgo"], capsys)
    assert code == 0
    assert doc["result"]["status"] == "NotGO"
    assert doc["result"]["counterexample"]["certificate"]
    code, doc = _run(["go", "check", "--space", "su3-t2", "--x", "1,1,2",
                      "--samples", "25", "--seed", "0", "--expect", "go"], capsys)
    assert code == 1
    code, doc = _run(["go", "check", "--space", "su3-su2u1", "--x", "1,2",
                      "--samples", "10", "--seed", "0"], capsys)
    assert code == 0
    assert doc["result"]["status"] == "InvalidMetric"
    code, doc = _run(["go", "check", "--space", "nope", "--x", "1,2"], capsys)
    assert code == 2
    code, doc = _run(["go", "check", "--space", "so5-u2", "--x", "1,2,3"], capsys)
    assert code == 2
    code, doc = _run(["go", "check", "--space", "so5-u2", "--x", "1,zebra"], capsys)
    assert code == 2
    code, doc = _run(["go", "check", "--space", "so5-u2", "--x", "1,5/2",
                      "--samples", "5"], capsys)
    assert code == 0
    assert doc["config"]["x"] == ["1", "5/2"]


def test_cli_survey_and_catalog(capsys):
    code, doc = _run(["go", "survey-rank2", "--samples", "5", "--seed", "0"], capsys)
    assert code == 0
    assert doc["result"]["survivors_unequal"] == ["so5-u2", "sp2-u1sp1"]
    code, doc = _run(["catalog", "list"], capsys)
    assert code == 0
    assert [e["id"] for e in doc["result"]["entries"]] == EXPECTED_IDS


def test_cli_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["decomp", "enumerate", "--family", "Z", "--rank", "2"])
    assert exc.value.code == 2
    capsys.readouterr()
    code, _ = _run(["rootsys", "gen", "--family", "D", "--rank", "3"], capsys)
    assert code == 2


@pytest.mark.parametrize("argv", [
    ["rootsys", "gen", "--family", "F", "--rank", "4"],
    ["decomp", "enumerate", "--family", "B", "--rank", "3"],
    ["decomp", "standard", "--family", "B", "--rank", "4"],
    ["algebra", "verify", "--family", "A", "--rank", "2"],
    ["go", "check", "--space", "sp2-u1sp1", "--x", "2,5", "--samples", "20",
     "--seed", "0"],
    ["go", "survey-rank2", "--samples", "4", "--seed", "1"],
    ["catalog", "list"],
])
def test_cli_determinism(argv, capsys):
    """Identical invocations must produce byte-identical payloads up to
    the timing field."""
    outs = []
    for _ in range(2):
        code = main(argv)
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        doc.pop("timing_ms")
        outs.append(json.dumps(doc, sort_keys=True))
    assert outs[0] == outs[1]


def test_installed_script_smoke():
    proc = subprocess.run(
        [sys.executable, "-m", "gokit.cli", "rootsys", "gen",
         "--family", "A", "--rank", "1"],
        capture_output=True, text=True, timeout=60,
    )
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["result"]["num_roots"] == 2
