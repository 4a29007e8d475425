import json

import pytest

from hbtl.cli import main
from hbtl.serialization import load_tree, save_transition_system
from hbtl.models import build_A


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_parse(capsys):
    code, d = run_json(capsys, "parse", "--formula", "E(F p & F q)")
    assert code == 0
    assert d == {"formula": "E (F p & F q)", "class": "CTL+", "size": 8, "depth": 1, "k": 0}
    code, d = run_json(capsys, "parse", "--formula", "F p")
    assert d["class"] == "path" and d["k"] is None


def test_parse_error(capsys):
    code, d = run_json(capsys, "parse", "--formula", "p &")
    assert code == 2 and d["span"] == [3, 3] and "proposition" in d["expected"]
    code, _, err = run(capsys, "parse", "--formula", "p &")
    assert code == 2 and "btl parse" in err


def test_parse_from_file(capsys, tmp_path):
    f = tmp_path / "f.btl"
    f.write_text("A G (p -> E X q)\n")
    code, out, _ = run(capsys, "parse", "--file", str(f))
    assert code == 0 and out.startswith("formula: A G (p -> E X q)")
    assert run(capsys, "parse", "--file", str(tmp_path / "missing"))[0] == 2


def test_check(capsys, fixtures_dir):
    tree = str(fixtures_dir / "chain3.json")
    assert run(capsys, "check", "--tree", tree, "--formula", "E F p")[:2] == (0, "true\n")
    assert run(capsys, "check", "--tree", tree, "--formula", "A X !p")[0] == 1
    code, d = run_json(capsys, "check", "--tree", tree, "--node", "2", "--assign", "2",
                       "--formula", "down x1 . @root E F (p & E F x1)")
    assert code == 0 and d == {"value": True, "node": 2, "assignment": [2], "mode": "leaf-loop"}
    assert run(capsys, "check", "--tree", tree, "--mode", "strict", "--node", "2", "--formula", "E X true")[0] == 1
    assert run(capsys, "check", "--tree", tree, "--node", "9", "--formula", "p")[0] == 2
    assert run(capsys, "check", "--tree", tree, "--formula", "x2", "--assign", "0")[0] == 2


def test_rewrite(capsys):
    code, out, _ = run(capsys, "rewrite", "--pipeline", "to-ctl", "--formula", "E(F p & F q)")
    assert code == 0
    assert out.splitlines() == ["(E F (p & E F q)) | E F (q & E F p)", "# kind: logical; size 8 -> 19"]
    code, d = run_json(capsys, "rewrite", "--pipeline", "eliminate-past-fairness", "--formula", "E(G p & Finf q)")
    assert d["kind"] == "satisfiability-preserving" and d["fresh"] == ["p1"]
    assert run(capsys, "rewrite", "--pipeline", "u-normal", "--formula", "E(F p & F q)")[0] == 2
    assert run(capsys, "rewrite", "--pipeline", "bogus", "--formula", "p")[0] == 2


def test_encode_tiling(capsys, fixtures_dir):
    inst = str(fixtures_dir / "cor1.json")
    code, d = run_json(capsys, "encode-tiling", "--instance", inst)
    assert code == 0 and d["part"] == "all" and d["size"] > 1000 and d["formula"].startswith("row_e")
    code, d = run_json(capsys, "encode-tiling", "--instance", inst, "--part", "χ10")
    assert d["formula"] == "A G (pos_e -> E X down x1 . @root E F ((E X x1) & A X x1))"
    assert run(capsys, "encode-tiling", "--instance", inst, "--part", "chi99")[0] == 2


def test_solve_tiling(capsys, fixtures_dir, tmp_path):
    inst = str(fixtures_dir / "cor1.json")
    code, d = run_json(capsys, "solve-tiling", "--instance", inst, "--width", "2", "--max-rows", "4")
    assert code == 0 and d["verdict"] == "E-wins" and d["rows_needed"] == 4
    assert run(capsys, "solve-tiling", "--instance", inst, "--width", "2", "--max-rows", "3")[0] == 3
    assert run(capsys, "solve-tiling", "--instance", inst, "--width", "4", "--max-rows", "9",
               "--budget", "5")[0] == 3
    doc = json.loads((fixtures_dir / "cor1.json").read_text())
    doc["L"] = []
    p = tmp_path / "noL.json"
    p.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "solve-tiling", "--instance", str(p), "--width", "2", "--max-rows", "4")
    assert code == 1 and out.strip() == "A-wins"
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(capsys, "solve-tiling", "--instance", str(bad), "--width", "2", "--max-rows", "4")[0] == 2


def test_game_solve(capsys, fixtures_dir):
    p, e, fork = (str(fixtures_dir / n) for n in ("single_p.json", "single.json", "fork.json"))
    assert run(capsys, "game-solve", "--left", p, "--right", e, "--rounds", "1")[:2] == (0, "spoiler\n")
    code, d = run_json(capsys, "game-solve", "--left", fork, "--right", fork, "--rounds", "2")
    assert code == 1 and d == {"winner": "duplicator", "rounds": 2}


def test_game_replay(capsys, fixtures_dir, tmp_path):
    p, e = str(fixtures_dir / "single_p.json"), str(fixtures_dir / "single.json")
    script = str(fixtures_dir / "props_differ.script")
    code, d = run_json(capsys, "game-replay", "--script", script, "--left", p, "--right", e)
    assert code == 0 and d["winner"] == "spoiler" and d["clauses"]["propositions"] is False
    bad = tmp_path / "bad.script"
    bad.write_text("S path L 0 0\n")
    code, _, err = run(capsys, "game-replay", "--script", str(bad), "--left", p, "--right", e)
    assert code == 2 and "bad anchor" in err


def test_sat(capsys):
    code, d = run_json(capsys, "sat", "--formula", "E X p & !p", "--props", "p", "--max-nodes", "3")
    assert code == 0 and d["verdict"] == "sat" and len(d["model"]["nodes"]) == 2
    code, d = run_json(capsys, "sat", "--formula", "p & !p", "--props", "p", "--max-nodes", "3")
    assert code == 1 and d["verdict"] == "unsat-within-bounds"
    assert run(capsys, "sat", "--formula", "q", "--props", "p")[0] == 2
    assert run(capsys, "sat", "--formula", "p & !p", "--props", "p,q", "--budget", "3")[0] == 3


def test_build_model(capsys, tmp_path):
    code, d = run_json(capsys, "build-model", "--family", "A", "--index", "1")
    assert code == 0
    assert save_transition_system(build_A(1)) == json.dumps(d["transition_system"], sort_keys=True) or \
        len(d["transition_system"]["states"]) == 4
    code, d = run_json(capsys, "build-model", "--family", "A", "--index", "0", "--depth", "2")
    t = load_tree(d["tree"])
    assert len(t) == 3
    assert run(capsys, "build-model", "--family", "B", "--index", "1")[0] == 2
    code, d = run_json(capsys, "build-model", "--family", "B", "--index", "1", "--S", "2", "--N", "1")
    assert code == 0
    assert run(capsys, "build-model", "--family", "A", "--index", "-1")[0] == 2


def test_usage_errors(capsys):
    assert main([]) == 2
    assert main(["check", "--formula", "p"]) == 2
    assert main(["--version"]) == 0
    capsys.readouterr()


def test_report(capsys, tmp_path):
    code, d = run_json(capsys, "report", "--out", str(tmp_path), "--max-m", "3", "--max-n", "2",
                       "--formulas", "20")
    assert code == 0
    for name in ("succinctness.csv", "tiling_size.csv", "normal_forms.csv", "string_bounds.csv",
                 "succinctness.png", "tiling_size.png", "normal_forms.png"):
        assert (tmp_path / name).stat().st_size > 0
