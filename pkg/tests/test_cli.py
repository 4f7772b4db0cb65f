import csv
import io
import json

import pytest

from rotortree.cli import main

from conftest import DATA


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def load_json(text):
    doc = json.loads(text)
    doc.pop("instance")
    return doc


@pytest.mark.parametrize("argv,golden", [
    (["destination", DATA / "fig5.txt", "--json"], "golden_destination_fig5.json"),
    (["solve1", DATA / "fig13.txt", "--integer", "--json"], "golden_solve1_fig13.json"),
])
def test_json_golden(capsys, argv, golden):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert load_json(out) == load_json((DATA / golden).read_text())


def test_destination_fig5_exit(capsys):
    _, out, _ = run(capsys, "destination", DATA / "fig5.txt", "--json")
    doc = json.loads(out)
    assert doc["schema"] == 1 and doc["result"]["exit"]["u0"] == "s1"
    assert doc["result"]["algorithm"] == "simple"
    _, out, _ = run(capsys, "destination", DATA / "fig5.txt", "--json", "--force-multigraph")
    assert json.loads(out)["result"]["algorithm"] == "multigraph"


def test_simulate_flags(capsys):
    code, out, _ = run(capsys, "simulate", DATA / "fig2.txt", "--trace", "--flows", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["result"]["steps"] == 7
    assert doc["result"]["trace"][1:] == ["u1", "u0", "u2", "u0", "u1", "u2", "s2"]
    assert sum(doc["result"]["flows"].values()) == 7
    _, out, _ = run(capsys, "simulate", DATA / "fig2.txt", "--cap", "3", "--json")
    assert json.loads(out)["result"]["status"] == "cap"


def test_solvers(capsys):
    assert run(capsys, "solve1", DATA / "fig13.txt", "--integer")[1].strip() == "2"
    assert run(capsys, "solve1", DATA / "fig13.txt", "--integer", "--simple")[1].strip() == "2"
    assert run(capsys, "solve1", DATA / "fig10.txt")[1].strip() == "1"
    assert run(capsys, "solve1", DATA / "fig10.txt", "--variant", "free_per_visit")[1].strip() == "1"
    code, out, _ = run(capsys, "solve2", DATA / "fig8.txt", "--start", "u", "--json")
    assert code == 0 and json.loads(out)["result"]["value"] == 1
    code, out, _ = run(capsys, "solve0", DATA / "fig5.txt", "--json")
    assert code == 0 and json.loads(out)["result"]["exit"] == "s1"


def test_access(capsys):
    code, out, _ = run(capsys, "access", DATA / "fig13.txt", "--json")
    doc = json.loads(out)
    assert code == 0 and set(doc["result"]["access"].values()) == {1} and doc["result"]["value"] == 2


def test_pathgraph(capsys):
    code, out, _ = run(capsys, "pathgraph", "--bits", "1100", "--route", "1", "--particles", "3,4", "--json")
    res = json.loads(out)["result"]
    assert code == 0 and res["n1"] == 2 and res["class_after"] == 3
    assert res["particles"] == {"class": 4, "to_s1": 1, "to_s0": 1}


def test_generate_validate_round_trip(capsys, tmp_path):
    f = tmp_path / "g.txt"
    assert run(capsys, "generate", "random_tree_like", "--n", "20", "--seed", "7", "-o", f)[0] == 0
    code, out, _ = run(capsys, "validate", f)
    assert code == 0 and out.strip() == "ok"
    assert run(capsys, "verify", f)[0] == 0


def test_verify_batch(capsys):
    code, out, _ = run(capsys, "verify", "--batch", "5", "--json")
    assert code == 0 and json.loads(out)["result"]["failures"] == {}


def test_bench_csv(capsys):
    code, out, _ = run(capsys, "bench", "--family", "exp_path", "--n", "5..12", "--sim-limit", "8")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert list(rows[0]) == ["family", "n", "arcs", "steps", "sim_ms", "solve_ms", "match"]
    for row in rows:
        n = int(row["n"])
        assert int(row["steps"]) == 2 ** (n + 2) - 3
        assert row["match"] == ("yes" if n <= 8 else "skipped")


def test_exit_codes(capsys, tmp_path):
    with pytest.raises(SystemExit) as e:
        main(["nope"])
    assert e.value.code == 1
    assert run(capsys, "validate", tmp_path / "missing.txt")[0] == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("vertex a plain\narc x a b\n")
    code, _, err = run(capsys, "validate", bad)
    assert code == 2 and "line 2" in err
    code, _, err = run(capsys, "solve2", DATA / "fig12.txt")
    assert code == 3 and "tree-like" in err
    assert run(capsys, "solve1", DATA / "fig5.txt", "--start", "zz")[0] == 1
    assert run(capsys, "pathgraph", "--bits", "12")[0] == 1
