import json

import pytest

from bdsk.cli import execute, main
from bdsk.document import SystemDocument, serialize_graph, serialize_system
from bdsk.dynamics import Digraph
from bdsk.fixtures import FIXTURES
from bdsk.report import validate_report


@pytest.fixture
def fixture_files(tmp_path):
    paths = {}
    for name, make in FIXTURES.items():
        p = tmp_path / f"{name}.system"
        p.write_text(serialize_system(SystemDocument.from_system(make())), encoding="utf-8")
        paths[name] = str(p)
    return paths


def run(*argv):
    code, report = execute(list(argv))
    validate_report(report)
    return code, report


def test_k_theory_loop(fixture_files):
    code, rep = run("k-theory", fixture_files["fx-loop"])
    assert code == 0
    assert rep["result"]["K0"]["text"] == "Z" and rep["result"]["K1"]["text"] == "Z"


def test_condition_k_loop(fixture_files, capsys):
    assert main(["condition-k", fixture_files["fx-loop"]]) == 0
    assert capsys.readouterr().out.strip() == "fails; witness atom v, word a"


def test_ideals_llw(fixture_files, tmp_path):
    code, rep = run("ideals", fixture_files["fx-llw"], "--figure-dir", str(tmp_path / "figs"))
    r = rep["result"]
    assert [(p["H"], p["S"]) for p in r["pairs"]] == [([], ["v", "w"]), (["w"], ["v", "w"]), (["v", "w"], ["v", "w"])]
    assert r["covers"] == [[0, 1], [1, 2]]
    assert len(rep["figures"]) == 2
    for f in rep["figures"]:
        assert (tmp_path / "figs").joinpath(f.rsplit("/", 1)[-1]).stat().st_size > 0


def test_ideal_k_llw(fixture_files):
    code, rep = run("ideal-k", fixture_files["fx-llw"], "--pair", "1")
    r = rep["result"]
    assert [r[k]["K0"]["text"] for k in ("ideal", "quotient", "full")] == ["Z", "Z", "Z"]
    assert [r[k]["K1"]["text"] for k in ("ideal", "quotient", "full")] == ["Z", "Z", "Z"]
    assert r["six_term"] == {"alternating_rank_sum": 0, "holds": True}
    assert [d["atom"] for d in r["dictionary"]] == ["g[v|a=∅]", "g[w]"]


def test_quotient_llw(fixture_files):
    code, rep = run("quotient", fixture_files["fx-llw"], "--pair", "1")
    assert rep["result"]["system"]["atoms"] == ["v"]
    assert (rep["result"]["K0"]["text"], rep["result"]["K1"]["text"]) == ("Z", "Z")


def test_exit_codes(fixture_files, tmp_path):
    code, rep = run("liftability", fixture_files["fx-loop"])
    assert code == 2 and rep["errors"] == ["Condition (K) fails, witness (v,a)"]
    code, _ = run("quotient", fixture_files["fx-llw"], "--pair", "9")
    assert code == 2
    bad = tmp_path / "bad.system"
    bad.write_text('{"atoms": ["v", "w"], "labels": ["a"], "theta": {"a": {"v": ["w"], "w": ["w"]}}}')
    code, rep = run("validate", str(bad))
    assert code == 1 and "overlap" in rep["errors"][0]
    bad.write_text("[1, 2")
    assert run("validate", str(bad))[0] == 1
    assert run("validate", str(tmp_path / "missing.system"))[0] == 1
    with pytest.raises(SystemExit):
        execute(["no-such-command"])


def test_k1_generators_loop(fixture_files):
    _, rep = run("k1-generators", fixture_files["fx-loop"])
    (cert,) = rep["result"]["certificates"]
    assert cert["passed"] and cert["unitary"] == [{"row": 0, "col": 0, "text": "1 - p_v + s_{a,v}"}]


def test_k0_class_elements(fixture_files):
    _, rep = run("k0-class", fixture_files["fx-on3"], "--element", "v")
    assert rep["result"]["classes"][0]["class"]["torsion"] == [{"value": 1, "modulus": 2}]
    assert run("k0-class", fixture_files["fx-on3"], "--element", "zz")[0] == 1


def test_graph_commands(tmp_path):
    g = tmp_path / "g.json"
    g.write_text(serialize_graph(Digraph.from_pairs(2, [(0, 0), (0, 1), (1, 0)])))
    code, rep = run("cross-check", str(g))
    assert code == 0 and rep["result"]["match"]
    code, rep = run("import-graph", str(g))
    assert rep["result"]["system"]["labels"] == ["e0", "e1", "e2"]


def test_selftest_small():
    code, rep = run("selftest", "--seed", "3", "--scale", "0.2")
    assert code == 0 and rep["result"]["passed"]


def test_json_output(fixture_files, capsys):
    main(["k-theory", fixture_files["fx-on3"], "--format", "json"])
    data = json.loads(capsys.readouterr().out)
    assert data["schema_version"] == "1.0"
    assert data["result"]["K0"]["torsion"] == [2]


def test_deterministic(fixture_files, capsys):
    main(["ideal-k", fixture_files["fx-double-loops"], "--pair", "1", "--format", "json"])
    first = capsys.readouterr().out
    main(["ideal-k", fixture_files["fx-double-loops"], "--pair", "1", "--format", "json"])
    assert capsys.readouterr().out == first
