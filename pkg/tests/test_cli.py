import csv
import json
import subprocess
import sys

import pytest

from toricprec.catalog import SQUARE_HORN, TRAPEZOID_HORN
from toricprec.cli import main
from toricprec.io import dumps, load_polytope, polytope_from_doc, polytope_to_doc
from toricprec.polytope import make_square


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def files(tmp_path, capsys):
    paths = {}
    for name, params in (("square", []), ("trapezoid", ["1", "1", "1"]), ("graphical", []),
                         ("simplex", ["2", "1"])):
        path = tmp_path / f"{name}.json"
        assert run(capsys, "catalog", name, *params, "-o", str(path))[0] == 0
        paths[name] = str(path)
    for name, H in (("square_horn", SQUARE_HORN), ("trap_horn", TRAPEZOID_HORN)):
        path = tmp_path / f"{name}.json"
        path.write_text(dumps(H.to_dict()))
        paths[name] = str(path)
    return paths


def report(out):
    return json.loads(out)


def test_catalog_documents(files):
    P, w = load_polytope(files["trapezoid"])
    assert w == (1, 2, 1, 1, 1)
    doc = json.loads(open(files["trapezoid"]).read())
    assert doc["lattice_points"] == [[0, 0], [1, 0], [2, 0], [0, 1], [1, 1]]
    assert doc["weights"] == ["1", "2", "1", "1", "1"]
    P, w = load_polytope(files["graphical"])
    assert P.num_points == 8 and set(w) == {1}


def test_doc_roundtrip():
    P = make_square()
    Q, w = polytope_from_doc(polytope_to_doc(P))
    assert Q.facets == P.facets and Q.lattice_points == P.lattice_points and w == (1, 1, 1, 1)
    with pytest.raises(ValueError):
        polytope_from_doc({**polytope_to_doc(P), "weights": ["1"]})


def test_slp_check_exit_codes(files, capsys):
    code, out, _ = run(capsys, "--json", "slp", "check", files["square"])
    assert code == 0
    rep = report(out)
    assert rep["outputs"]["verdict"] and rep["outputs"]["c"] == "1" and rep["command"] == "slp check"
    code, out, _ = run(capsys, "slp", "check", files["trapezoid"], "--json")
    assert code == 2 and report(out)["outputs"]["n_P"] == [0, -1]


def test_slp_weights(files, capsys):
    code, out, _ = run(capsys, "--json", "slp", "weights", files["simplex"])
    w = [float(x) for x in report(out)["outputs"]["weights"]]
    assert code == 0 and w[1] == 2 * w[0] == 2 * w[2]
    code, out, _ = run(capsys, "--json", "slp", "weights", files["trapezoid"])
    assert code == 2 and report(out)["outputs"] == {"weights": "infeasible", "reason": "n_P != 0"}
    code, out, _ = run(capsys, "--json", "slp", "weights", files["graphical"])
    assert code == 2 and report(out)["outputs"]["reason"] == "linear system infeasible"


def test_horn_commands(files, capsys, tmp_path):
    code, out, _ = run(capsys, "--json", "horn", "build", files["square"])
    assert code == 0 and report(out)["outputs"]["constants"] == ["4"] * 4
    code, out, _ = run(capsys, "--json", "horn", "minimize", files["square_horn"])
    assert code == 0 and report(out)["outputs"] == SQUARE_HORN.to_dict()
    built = tmp_path / "built.json"
    assert run(capsys, "horn", "build", files["square"], "-o", str(built))[0] == 0
    code, out, _ = run(capsys, "--json", "horn", "verify", str(built), files["square"], "--trials", "5")
    assert code == 0 and report(out)["outputs"]["method"] == "closed_form"
    code, out, _ = run(capsys, "--json", "horn", "verify", files["trap_horn"], files["trapezoid"], "--trials", "10")
    assert code == 0 and report(out)["outputs"]["passed"]
    code, _, err = run(capsys, "horn", "build", files["trapezoid"])
    assert code == 1 and "NormalSumNonzero" in err


def test_mle(files, capsys):
    code, out, _ = run(capsys, "--json", "mle", files["square"], "--u", "3,1,4,1")
    est = report(out)["outputs"]["estimate"]
    assert code == 0 and est == ["28/81", "8/81", "35/81", "10/81"]
    code, out, _ = run(capsys, "--json", "mle", files["trapezoid"], "--u", "3,1,4,1,5", "--tol", "1e-13")
    rep = report(out)
    assert rep["outputs"]["method"] == "newton" and rep["inputs"]["tol"] == 1e-13
    code, _, _ = run(capsys, "mle", files["square"], "--u", "1,2")
    assert code == 1


def test_moment_commands(files, capsys, tmp_path):
    code, out, _ = run(capsys, "--json", "moment", "fs", files["square"], "--q", "1,1")
    assert code == 0 and report(out)["outputs"]["value"] == [0.5, 0.5]
    code, out, _ = run(capsys, "--json", "moment", "quot", files["square"], "--q", "1.0,2.5")
    assert abs(report(out)["outputs"]["value"][1] - 2.5 / 3.5) < 1e-10
    csv_path = tmp_path / "samples.csv"
    code, out, _ = run(capsys, "--json", "--seed", "4", "moment", "compare", files["trapezoid"],
                       "--samples", "6", "--csv", str(csv_path))
    assert code == 2 and report(out)["seed"] == 4
    rows = list(csv.DictReader(open(csv_path)))
    assert len(rows) == 6 and max(float(r["gap"]) for r in rows) == report(out)["outputs"]["max_gap"]
    code, _, _ = run(capsys, "moment", "compare", files["square"], "--samples", "5")
    assert code == 0


def test_search_command(capsys):
    code, out, _ = run(capsys, "--json", "search", "polygons", "--max-coord", "2")
    rep = report(out)["outputs"]
    assert code == 0 and rep["classification_ok"] and rep["trapezoids_ok"]


def test_text_view(files, capsys):
    code, out, _ = run(capsys, "slp", "check", files["graphical"])
    assert code == 2
    assert "2*t5^2 - 2*t5 + 1" in out and "[beta_w]" in out


def test_byte_identical_reruns(files, capsys):
    argv = ["--json", "moment", "compare", files["trapezoid"], "--samples", "4", "--seed", "9"]
    first = run(capsys, *argv)[1]
    assert run(capsys, *argv)[1] == first
    assert "timing_ms" not in report(first)
    assert "timing_ms" in report(run(capsys, "--timing", *argv)[1])


def test_errors(capsys, tmp_path):
    assert run(capsys, "slp", "check", str(tmp_path / "missing.json"))[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"dim": 2, "facets": [{"normal": [1, 0], "offset": 0},
                                                    {"normal": [0, 1], "offset": 0}]}))
    code, _, err = run(capsys, "slp", "check", str(bad))
    assert code == 1 and "Unbounded" in err
    with pytest.raises(SystemExit):
        main(["catalog", "dodecahedron"])


def test_console_script(files):
    proc = subprocess.run([sys.executable, "-m", "toricprec.cli", "--json", "slp", "check", files["square"]],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["outputs"]["verdict"]
