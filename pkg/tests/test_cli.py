from __future__ import annotations

import json
from pathlib import Path

import pytest

from pcpsolve.cli import RunConfig, main, run

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"


def _doc(cfg):
    code, text = run(cfg)
    return code, json.loads(text)


def test_solve_example_with_explicit_h():
    code, doc = _doc(RunConfig(
        task="solve", input=str(PROBLEMS / "example1.json"), strategy="explicit",
        h_matrix=str(PROBLEMS / "example1_H.json"), invert_h=False,
    ))
    assert code == 0 and doc["status"] == "solved"
    assert [s["coordinates"] for s in doc["solutions"]] == [["1.000000000000000000"] * 2]


def test_check_d0_circle(capsys):
    code, doc = _doc(RunConfig(task="check-d0", input=str(PROBLEMS / "circle.json")))
    assert code == 0 and doc["d0"] is False and doc["witness"] == "x1"
    assert "not D0" in capsys.readouterr().err


def test_solve_non_d0_exit_2():
    code, doc = _doc(RunConfig(task="solve", input=str(PROBLEMS / "circle.json")))
    assert code == 2 and doc["status"] == "error" and "witness" in doc


def test_parse_failure_exit_3(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"variables": ["x1"], "f": ["x1^(-1)"]}')
    code, doc = _doc(RunConfig(task="solve", input=str(bad)))
    assert code == 3 and "offset" in doc["message"]
    code, _ = _doc(RunConfig(task="solve", input=str(tmp_path / "missing.json")))
    assert code == 3


def test_bench_q2_row():
    code, doc = _doc(RunConfig(task="bench", family="q", n=2))
    assert code == 0
    row = doc["row"]
    assert (row["deg_w"], row["n_sol"], row["n_sol_ln"], row["n_sol_sp"]) == (36, 9, 1, 1)
    assert float(json.loads(json.dumps(doc))["gamma2"].split("/")[0]) == 1
    assert {"groebner", "radical", "shape", "enumeration"} <= set(doc["timings"])


def test_bench_ceiling():
    code, doc = _doc(RunConfig(task="bench", family="p", n=4, d=4))
    assert code == 3 and "ceiling" in doc["message"]


def test_copositive_fixed_perturbation():
    code, doc = _doc(RunConfig(
        task="copositive", input=str(PROBLEMS / "circle.json"), perturbation="1e-6,1e-5",
    ))
    assert code == 0 and len(doc["solutions"]) == 1
    x = [float(c) for c in doc["solutions"][0]["coordinates"]]
    assert abs(x[0] - 1) < 1e-3 and abs(x[1]) < 1e-3


@pytest.mark.parametrize("task", ["solve", "least-norm", "sparse"])
def test_deterministic_output(task, tmp_path):
    args = ["--task", task, "--input", str(PROBLEMS / "q1.json"), "--seed", "12"]
    outs = []
    for i in range(2):
        out = tmp_path / f"o{i}.json"
        assert main(args + ["--output", str(out)]) == 0
        doc = json.loads(out.read_text())
        doc.pop("timings")
        outs.append(doc)
    assert outs[0] == outs[1]
    assert outs[0]["strategy"]["seed"] == 12


def test_sparse_task_fields():
    code, doc = _doc(RunConfig(task="sparse", input=str(PROBLEMS / "q1.json")))
    assert code == 0 and doc["k"] == 1 and doc["omega"] == [[0]]


def test_least_norm_task():
    code, doc = _doc(RunConfig(task="least-norm", input=str(PROBLEMS / "q1.json")))
    assert code == 0 and "phi" in doc and len(doc["solutions"]) == 1
