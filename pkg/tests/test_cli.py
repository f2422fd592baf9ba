import json
import subprocess
import sys
from fractions import Fraction

import jsonschema
import pytest

from sepcoords import schemas
from sepcoords.cli import main
from sepcoords.killing import KillingVector
from sepcoords.staeckel import StaeckelSpan, elliptic_span, jm_span


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize(
    "sphere, line",
    [
        (2, "1 1 | total 2"),
        (3, "2 3 1 | total 6"),
        (10, "207 1681 5561 9737 9800 5795 1960 356 29 1 | total 35127"),
    ],
)
def test_enumerate_rows(capsys, sphere, line):
    code, out, _ = run(capsys, "enumerate", "--sphere", str(sphere))
    assert code == 0 and out.strip() == line


def test_enumerate_leaves_and_brute_force(capsys):
    code, out, _ = run(capsys, "enumerate", "--leaves", "5", "--brute-force")
    assert code == 0
    assert out.splitlines() == ["3 8 5 1 | total 17", "brute force: 3 8 5 1 | total 17 | agree"]
    code, out, _ = run(capsys, "enumerate", "--sphere", "4", "--brute-force", "--json")
    obj = json.loads(out)
    jsonschema.validate(obj, schemas.ENUMERATION)
    assert obj["agree"] and obj["total"] == 17


@pytest.mark.parametrize("argv", [["--sphere", "13"], ["--sphere", "10", "--brute-force"], [], ["--sphere", "3", "--leaves", "4"]])
def test_enumerate_usage_errors(capsys, argv):
    code, _, err = run(capsys, "enumerate", *argv)
    assert code == 2 and "error" in err


def test_trees(capsys):
    assert len(run(capsys, "trees", "--leaves", "4", "--internal", "3")[1].splitlines()) == 5
    assert len(run(capsys, "trees", "--leaves", "4", "--internal", "3", "--dyslexic")[1].splitlines()) == 2
    assert run(capsys, "trees", "--leaves", "2")[1].strip() == "(L,L)"
    code, out, _ = run(capsys, "trees", "--leaves", "3", "--json")
    for t in json.loads(out):
        jsonschema.validate(t, schemas.TREE)
    assert run(capsys, "trees", "--leaves", "10")[0] == 2


def test_staeckel_jm(capsys):
    code, out, _ = run(capsys, "staeckel", "jm", "--n", "3")
    assert code == 0
    obj = json.loads(out)
    jsonschema.validate(obj, schemas.SPAN)
    assert StaeckelSpan.from_json(obj) == jm_span(3)


def test_staeckel_gaudin(capsys):
    code, out, _ = run(capsys, "staeckel", "gaudin", "--z", "0,1,2")
    span = StaeckelSpan.from_json(json.loads(out))
    assert code == 0 and span.rank() == 2
    assert span.contains(KillingVector.metric(3))
    assert run(capsys, "staeckel", "gaudin", "--z", "0,1,1")[0] == 2
    assert run(capsys, "staeckel", "gaudin", "--z", "0,x")[0] == 2


@pytest.mark.parametrize(
    "tree",
    ['{"children":["L","L","L"],"params":["0","1/2","1"]}', '{"children":["L","L","L"],"params":[0,0.5,1]}', "(L,L,L)"],
)
def test_staeckel_from_tree(capsys, tree):
    code, out, _ = run(capsys, "staeckel", "from-tree", tree)
    assert code == 0
    assert StaeckelSpan.from_json(json.loads(out)) == elliptic_span([0, Fraction(1, 2), 1])


def test_staeckel_from_tree_file(capsys, tmp_path):
    f = tmp_path / "t.json"
    f.write_text('{"children":[{"children":["L","L"],"params":["0","1"]},"L"],"params":["0","1"]}')
    code, out, _ = run(capsys, "staeckel", "from-tree", f"@{f}")
    assert code == 0 and StaeckelSpan.from_json(json.loads(out)).same_span(jm_span(3))


def test_verify(capsys, tmp_path):
    good = tmp_path / "good.json"
    good.write_text(json.dumps(jm_span(4).to_json()))
    code, out, _ = run(capsys, "verify", str(good))
    rep = json.loads(out)
    jsonschema.validate(rep, schemas.SPAN_REPORT)
    assert code == 0 and rep["status"] == "pass"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"N": 3, "basis": [[{"i": 1, "j": 2, "coeff_num": 1, "coeff_den": 1}],
                                                 [{"i": 1, "j": 3, "coeff_num": 1, "coeff_den": 1}]]}))
    code, out, _ = run(capsys, "verify", str(bad))
    assert code == 1 and json.loads(out)["poisson_commute"] is False
    assert run(capsys, "verify", str(tmp_path / "missing.json"))[0] == 2


@pytest.mark.parametrize("bracket", ["poisson", "commutator"])
def test_relations(capsys, bracket):
    code, out, _ = run(capsys, "relations", "--N", "4", "--bracket", bracket)
    rep = json.loads(out)
    jsonschema.validate(rep, schemas.RELATION_REPORT)
    assert code == 0 and all(r["status"] == "pass" for r in rep)
    assert run(capsys, "relations", "--N", "9", "--bracket", bracket)[0] == 2
    assert run(capsys, "relations", "--N", "4", "--bracket", "lie")[0] == 2


def test_coords_eval_invert(capsys):
    code, out, _ = run(capsys, "coords", "eval", "--tree", "(L,L,L)", "--x", "0.5773502691896258,0.5773502691896258,0.5773502691896258")
    obj = json.loads(out)
    jsonschema.validate(obj, schemas.COORDS)
    assert obj["coords"][0]["values"] == pytest.approx([0.5 - 0.5 / 3**0.5, 0.5 + 0.5 / 3**0.5], abs=1e-12)
    code, out, _ = run(capsys, "coords", "invert", "--tree", "(L,L,L)", "--coords", json.dumps(obj["coords"]))
    point = json.loads(out)
    jsonschema.validate(point, schemas.POINT)
    assert point["x"] == pytest.approx([3**-0.5] * 3, abs=1e-9)


def test_coords_roundtrip_and_ortho(capsys):
    code, out, _ = run(capsys, "coords", "roundtrip", "--tree", "((L,L),L)", "--seed", "7", "--samples", "50")
    obj = json.loads(out)
    jsonschema.validate(obj, schemas.NUMERIC_CHECK)
    assert code == 0 and obj["max_error"] <= 1e-9
    code, out, _ = run(capsys, "coords", "ortho", "--tree", "(L,(L,L,L),L)", "--seed", "1", "--samples", "5")
    assert code == 0 and json.loads(out)["max_offdiag"] <= 1e-6


def test_coords_errors(capsys):
    assert run(capsys, "coords", "roundtrip", "--tree", "(L,L)")[0] == 2
    assert run(capsys, "coords", "eval", "--tree", "(L,L)", "--x", "1,1")[0] == 2
    assert run(capsys, "coords", "eval", "--tree", "(L,L)")[0] == 2
    code, _, err = run(capsys, "coords", "eval", "--tree", "((L,L),L)", "--x", "0,0,1")
    assert code == 2 and "degenerate" in err


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "staeckel", "from-tree", "(L,L,(L)")
    assert code == 2 and "line 1" in err and "column" in err


def test_deterministic_reruns():
    argv = [sys.executable, "-m", "sepcoords", "coords", "roundtrip", "--tree", "(L,(L,L),L)", "--seed", "3"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second and first
