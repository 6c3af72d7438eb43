import copy
import io
import json
from pathlib import Path

import pytest

from rnmod.cli import InstanceFile, parse_instance, run

INSTANCES = Path(__file__).resolve().parent.parent / "demos" / "instances"

PLANAR = {
    "space": {"atoms": ["a1"], "probs": [1.0]},
    "field": "real",
    "dim": 2,
    "functionals": [[[1, 0]], [[0, 1]]],
    "targets": [[3], [4]],
    "beta": [5],
}


def call(args, doc=None, tmp_path=None):
    if doc is not None:
        path = tmp_path / "instance.json"
        path.write_text(json.dumps(doc))
        args = args + ["--instance", str(path)]
    out, err = io.StringIO(), io.StringIO()
    code = run(args, stdout=out, stderr=err)
    return code, json.loads(out.getvalue()), err.getvalue()


def test_solve_feasible(tmp_path):
    code, rep, err = call(["solve"], PLANAR, tmp_path)
    assert code == 0
    assert rep["result"]["solution"] == [[3.0, 4.0]]
    assert "solved" in err


def test_solve_infeasible(tmp_path):
    doc = dict(PLANAR, beta=[4.9])
    code, rep, _ = call(["solve"], doc, tmp_path)
    assert code == 1
    cert = rep["result"]["certificate"]
    assert [l[0] for l in cert["lambda"]] == pytest.approx([0.6, 0.8])
    assert cert["violation_set"] == ["a1"]


def test_check_reports_oracle(tmp_path):
    code, rep, _ = call(["check", "--samples", "2000"], PLANAR, tmp_path)
    assert code == 0
    assert 4.9 < rep["result"]["oracle_sup_ratio"][0] <= 5


def test_counterexample_exit_code():
    code, rep, _ = call(["counterexample", "--samples", "200"])
    assert code == 1
    res = rep["result"]
    assert res["condition"]["ok"] and res["unsolvable"]["ok"] and res["truncations"]["ok"]
    assert res["unsolvable"]["glued_target"]["tag"] == "constant-tail"


def test_reports_are_byte_identical(tmp_path):
    path = tmp_path / "i.json"
    path.write_text(json.dumps(PLANAR))
    outs = []
    for _ in range(2):
        out = io.StringIO()
        run(["check", "--instance", str(path), "--seed", "7", "--samples", "500"], stdout=out,
            stderr=io.StringIO())
        outs.append(out.getvalue())
    assert outs[0] == outs[1]


@pytest.mark.parametrize("name", sorted(p.name for p in INSTANCES.glob("*.json")))
def test_echoed_instance_round_trips(name):
    doc = json.loads((INSTANCES / name).read_text())
    inst = parse_instance(doc)
    again = parse_instance(json.loads(json.dumps(inst.to_json())))
    assert isinstance(again, InstanceFile) and again == inst


def test_complex_values_are_pairs(tmp_path):
    doc = json.loads((INSTANCES / "goldstine_complex.json").read_text())
    code, rep, _ = call(["goldstine"], doc, tmp_path)
    assert code == 0
    assert rep["instance"]["targets"] == [[[0.3, 0.4], [1.0, 0.0]]]
    assert all(len(v) == 2 for v in rep["result"]["witness"][0])


@pytest.mark.parametrize("mutate, pointer", [
    (lambda d: d["space"].update(probs=[0.7]), "$.space.probs"),
    (lambda d: d["space"].update(probs=[-1.0]), "$.space.probs[0]"),
    (lambda d: d.update(field="quaternion"), "$.field"),
    (lambda d: d.update(beta=[5, 6]), "$.beta"),
    (lambda d: d["functionals"][1].append([1, 2]), "$.functionals[1]"),
    (lambda d: d["functionals"][0][0].append(9), "$.functionals[0][0]"),
    (lambda d: d.update(targets=[[[1, 2]], [4]]), "$.targets[0][0]"),
    (lambda d: d.update(extra=1), "$"),
])
def test_schema_errors_point_at_the_field(tmp_path, mutate, pointer):
    doc = copy.deepcopy(PLANAR)
    mutate(doc)
    code, rep, _ = call(["solve"], doc, tmp_path)
    assert code == 2
    assert rep["pointer"] == pointer


def test_missing_instance_and_bad_flags(tmp_path):
    code, rep, _ = call(["solve"])
    assert code == 2 and rep["pointer"] == "--instance"
    assert run(["frobnicate"], stdout=io.StringIO(), stderr=io.StringIO()) == 2
    assert run(["axioms", "--jobs", "0"], stdout=io.StringIO(), stderr=io.StringIO()) == 2
    code, rep, _ = call(["gauge"], PLANAR, tmp_path)
    assert code == 2 and rep["pointer"] == "$.bodies.B"


def test_separate_and_stratify(tmp_path):
    code, rep, _ = call(["separate", "--jobs", "2"],
                        json.loads((INSTANCES / "separation.json").read_text()), tmp_path)
    assert code == 0 and rep["result"]["H"] == ["a1"]
    code, rep, _ = call(["stratify"], json.loads((INSTANCES / "stratify.json").read_text()),
                        tmp_path)
    assert code == 0
    assert rep["result"]["strata"] == {"1": ["a1"], "2": ["a2"]}


def test_gauge_and_exclude(tmp_path):
    code, rep, _ = call(["gauge"], json.loads((INSTANCES / "gauge_square.json").read_text()),
                        tmp_path)
    assert code == 0 and rep["result"]["gauge"] == pytest.approx([2.0])
    code, rep, _ = call(["exclude"], json.loads((INSTANCES / "exclude.json").read_text()),
                        tmp_path)
    assert code == 0 and rep["result"]["anchor"][1] == [0.0, 0.0]
    doc = dict(json.loads((INSTANCES / "exclude.json").read_text()),
               functionals=[[[0.5, 0], [0.5, 0]]])
    code, _, _ = call(["exclude"], doc, tmp_path)
    assert code == 2


def test_axioms_command_reports_every_law():
    code, rep, _ = call(["axioms", "--samples", "50"])
    res = rep["result"]
    assert "l0.sup_associative" in res and "rip_module.cauchy_schwarz" in res
    failed = [k for k, v in res.items() if k != "failed_laws" and v["passed"] != v["total"]]
    assert res["failed_laws"] == failed
    assert code == (0 if not failed else 3)
