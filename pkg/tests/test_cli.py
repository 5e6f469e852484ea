import csv
import dataclasses
import io
import json
import shutil
import subprocess

import pytest

from glwedge import cli
from glwedge.characters import schur_basis
from glwedge.equivariant import fixtures


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, (json.loads(out) if out.strip() else None), err


def without_timing(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "timing"}


# ---------------------------------------------------------------------------
# Single computations
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("lam,p,layers", [("[4,2]", "2", ["[]", "[2,1]"]), ("[1]", "3", ["[1]"]), ("[2]", "2", ["[]", "[1]"])])
def test_steinberg_examples(capsys, lam, p, layers):
    code, rep, _ = run_json(capsys, "--prime", p, "steinberg", lam)
    assert code == 0 and rep["verdict"] == "pass" and rep["layers"] == layers


@pytest.mark.parametrize("expr,expected", [("s[5]", "s[4]"), ("s[1,1,1]", "s[1,1]"), ("s[2,1]", "s[2] + s[1,1]")])
def test_char_derivative_examples(capsys, expr, expected):
    code, rep, _ = run_json(capsys, "char", expr)
    assert code == 0 and rep["derivative"] == expected


def test_char_twist(capsys):
    code, rep, _ = run_json(capsys, "char", "s[1]", "--op", "twist", "--prime", "2")
    assert code == 0 and rep["twist"] == "s[2] - s[1,1]"


def test_simple_char_and_decomposition_matrix(capsys):
    code, rep, _ = run_json(capsys, "simple-char", "[2]", "--prime", "2")
    assert code == 0 and rep["simple"] == "s[2] - s[1,1]" and rep["layers"] == ["[]", "[1]"]
    code, rep, _ = run_json(capsys, "decomp-matrix", "2", "--prime", "2")
    assert code == 0 and rep["entries"] == [[1, 1], [0, 1]]


def test_evaluate_examples(capsys):
    code, rep, _ = run_json(capsys, "evaluate", "fixture:R", "--rank-cap", "2")
    assert code == 0 and rep["dims"] == [1, 2, 1]
    code, rep, _ = run_json(capsys, "evaluate", "fixture:m", "--rank-cap", "3")
    assert rep["dims"][1:4] == [3, 3, 1] and rep["delta"]["is_residue_field"]
    code, rep, _ = run_json(capsys, "evaluate", "fixture:R/m^2")
    assert not rep["semi_induced"]["semi_induced"]
    assert rep["torsion"]["dims_by_degree"] == {"0": 1, "1": 3}


def test_evaluate_presentation_file(capsys, tmp_path):
    path = tmp_path / "m.json"
    path.write_text(fixtures.maximal_ideal(2).dumps())
    code, rep, _ = run_json(capsys, "evaluate", str(path), "--rank-cap", "3")
    assert code == 0 and rep["dims"][1:4] == [3, 3, 1]


def test_betti_regularity_shift_delta_torsion(capsys):
    code, rep, _ = run_json(capsys, "betti", "fixture:k", "--i-max", "2", "--degree-cap", "3")
    assert code == 0 and rep["summary"]["t"] == [0, 1, 2]
    code, rep, _ = run_json(capsys, "regularity", "fixture:k", "--degree-cap", "4")
    assert code == 0 and rep["regularity"] == 0
    code, rep, _ = run_json(capsys, "shift", "fixture:m")
    assert code == 0 and rep["l"] == 1
    code, rep, _ = run_json(capsys, "delta", "fixture:V(1)", "--rank-cap", "2")
    assert code == 0 and not any(rep["dims"])
    code, rep, _ = run_json(capsys, "torsion", "fixture:R")
    assert code == 0 and rep["dims_by_degree"] == {}


def test_module_sources(capsys):
    code, rep, _ = run_json(capsys, "torsion", "curated:1")
    assert code == 0 and rep["module"] == "R/m^2"
    code, rep, _ = run_json(capsys, "evaluate", "fixture:Div[2,1]", "--rank-cap", "2")
    assert code == 0 and rep["semi_induced"]["semi_induced"]
    code, rep, _ = run_json(capsys, "betti", "corpus:0", "--no-certify", "--degree-cap", "3", "--i-max", "1")
    assert code == 0 and rep["module"].startswith("seed")


def test_groebner_commands(capsys, tmp_path):
    path = tmp_path / "mod.json"
    path.write_text(json.dumps({"n": 1, "prime": 2, "generators": ["x1 | e1"]}))
    code, rep, _ = run_json(capsys, "groebner", "member", str(path), "x2^x1 | e1")
    assert code == 0 and rep["member"] and rep["witness"]["u"] == [2]
    code, rep, _ = run_json(capsys, "groebner", "member", str(path), "x2 | e1")
    assert code == 0 and not rep["member"] and rep["witness"] is None
    code, rep, _ = run_json(capsys, "groebner", "init", "x1 | e1 + x2 | e2", "--prime", "2")
    assert code == 0 and set(rep["generators"]) == {"x2 | e2", "x2^x1 | e1"} and rep["truncated"]
    code, rep, _ = run_json(capsys, "groebner", "acc", "--chains", "3")
    assert code == 0 and all(it["verified"] for it in rep["items"])


# ---------------------------------------------------------------------------
# Exit codes
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("argv", [
    ["char", "s[2,"],
    ["steinberg", "[1,x]"],
    ["simple-char", "[5,4]"],
    ["nonsense"],
    ["--prime", "4", "steinberg", "[1]"],
    ["evaluate", "fixture:nope"],
    ["evaluate", "/no/such/file.json"],
    ["groebner", "member", "/no/such/file.json", "x1 | e1"],
    ["groebner", "init", "x1 e1"],
    ["torsion", "curated:99"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == ""


def test_invalid_presentation_file_exits_2(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert run(capsys, "evaluate", str(path))[0] == 2


def test_violation_exits_1_with_reproduction(capsys, monkeypatch):
    real = cli.verify_steinberg

    def broken(lam, p, cap=None):
        rep = real(lam, p, cap)
        if tuple(lam) == (2, 1):
            rep = dataclasses.replace(rep, product=rep.product + schur_basis((1,)))
        return rep

    monkeypatch.setattr(cli, "verify_steinberg", broken)
    code, rep, _ = run_json(capsys, "experiment", "steinberg-sweep", "--degree-cap", "3", "--prime", "2")
    assert code == 1
    failed = [it for it in rep["items"] if it["verdict"] == "fail"]
    assert [it["id"] for it in failed] == ["[2,1]-p2"]
    assert failed[0]["reproduce"] == "glwedge --seed 0 --degree-cap 3 --prime 2 steinberg '[2,1]'"


def test_help_exits_0(capsys):
    assert run(capsys, "--help")[0] == 0


# ---------------------------------------------------------------------------
# Experiments and report output
# ---------------------------------------------------------------------------


def test_steinberg_sweep_all_pass(capsys):
    code, rep, _ = run_json(capsys, "experiment", "steinberg-sweep")
    assert code == 0 and rep["summary"]["fail"] == 0 and rep["summary"]["pass"] == 2 * 29


def test_acc_experiment(capsys):
    code, rep, _ = run_json(capsys, "experiment", "acc", "--count", "5")
    assert code == 0 and rep["summary"]["pass"] == 5
    assert all(it["details"]["stabilization_index"] >= 1 for it in rep["items"])
    assert rep["items"][2]["reproduce"] == "glwedge --seed 0 groebner acc --steps 64 --chains 3"


def test_global_flags_after_subcommand(capsys):
    a = run_json(capsys, "--prime", "3", "steinberg", "[4,2]")[1]
    b = run_json(capsys, "steinberg", "[4,2]", "--prime", "3")[1]
    assert a == b and a["prime"] == 3


def test_csv_format_and_out_dir(capsys, tmp_path):
    code, out, _ = run(capsys, "experiment", "wedge-lengths", "--format", "csv", "--prime", "2",
                       "--degree-cap", "4", "--out", str(tmp_path))
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["id"] for r in rows] == ["n0-p2", "n1-p2"] and all(r["verdict"] == "report" for r in rows)
    saved = json.loads((tmp_path / "experiment-wedge-lengths.json").read_text())
    assert saved["summary"]["report"] == 2
    assert (tmp_path / "experiment-wedge-lengths.csv").read_text() == out


def test_reports_do_not_depend_on_pool_size(capsys):
    argv = ["experiment", "shift-theorem", "--prime", "2", "--degree-cap", "3", "--l-max", "3"]
    one = run_json(capsys, *argv, "--jobs", "1")[1]
    three = run_json(capsys, *argv, "--jobs", "3")[1]
    assert without_timing(one) == without_timing(three)
    assert one["summary"]["fail"] == 0


def test_same_seed_same_bytes(capsys):
    a = run_json(capsys, "corpus", "--size", "3", "--prime", "3")[1]
    b = run_json(capsys, "corpus", "--size", "3", "--prime", "3")[1]
    assert json.dumps(without_timing(a), sort_keys=True) == json.dumps(without_timing(b), sort_keys=True)
    c = run_json(capsys, "corpus", "--size", "3", "--prime", "3", "--seed", "1")[1]
    assert [it["id"] for it in c["items"]] != [it["id"] for it in a["items"]]


@pytest.mark.skipif(shutil.which("glwedge") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["glwedge", "char", "s[5]"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["derivative"] == "s[4]"
    proc = subprocess.run(["glwedge", "char", "s[5"], capture_output=True, text=True)
    assert proc.returncode == 2 and "error" in proc.stderr
