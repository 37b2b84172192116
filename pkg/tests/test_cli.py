import json

import numpy as np
import pytest

from tcpkit import io
from tcpkit.cli import main
from tcpkit.solve import TcpInstance
from tcpkit.tensor import identity


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, [json.loads(line) for line in out.splitlines()], err


@pytest.fixture
def files(tmp_path):
    t = tmp_path / "id32.tensor"
    i = tmp_path / "inst.tcp"
    io.store(t, identity(3, 2), "tensor")
    io.store(i, TcpInstance(identity(3, 2), [-4, 9]), "instance")
    return t, i


def test_classify(capsys, files):
    code, recs, _ = run(capsys, "classify", "--in", str(files[0]), "--property", "strictly_copositive")
    assert code == 0
    assert recs[0]["property"] == "strictly_copositive" and recs[0]["status"] == "holds"
    assert recs[-1]["summary"] is True


def test_classify_all_failing_verdict_exits_zero(capsys, tmp_path):
    p = tmp_path / "m.tensor"
    io.store(p, identity(2, 2).scaled(-1.0), "tensor")
    code, recs, _ = run(capsys, "classify", "--in", str(p))
    assert code == 0
    assert [r["status"] for r in recs[:-1]] == ["fails"] * 4
    assert recs[0]["witness_set"] == [1]


def test_solve(capsys, files):
    code, recs, _ = run(capsys, "solve", "--in", str(files[1]), "--method", "support-enum")
    assert code == 0
    assert any(np.allclose(r["x"], [2, 0]) for r in recs if "x" in r)
    code, recs, _ = run(capsys, "solve", "--in", str(files[1]), "--method", "fb-newton")
    assert code == 0 and np.allclose(recs[0]["x"], [2, 0])


def test_gen_then_probe(capsys, tmp_path):
    p = tmp_path / "g.tensor"
    assert main(["gen", "--kind", "diag_boosted", "--order", "3", "--dim", "2", "--seed", "7", "--out", str(p)]) == 0
    code, recs, _ = run(capsys, "probe", "--in", str(p), "--trials", "8", "--seed", "1")
    assert code == 0 and recs[-1]["solved"] == 8


def test_gen_spec_file(tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"kind": "identity", "order": 3, "dim": 2}))
    out = tmp_path / "i.tcp"
    assert main(["gen", "--spec", str(spec), "--q-kind", "neg", "--out", str(out)]) == 0
    inst = io.load(out, "instance")
    assert inst.A == identity(3, 2) and np.all(inst.q < 0)
    spec.write_text(json.dumps({"kind": "identity", "order": 3, "dim": 2, "colour": 1}))
    assert main(["gen", "--spec", str(spec), "--out", str(out)]) == 1


def test_suite(capsys):
    code, recs, _ = run(capsys, "suite", "--name", "thm31", "--trials", "200", "--seed", "42")
    assert code == 0
    trials = [r for r in recs if "trial" in r]
    assert len(trials) == 200 and [r["trial"] for r in trials] == list(range(200))
    assert recs[-1] == {"summary": True, "passed": True, "suites": {"thm31": True}}


def test_byte_identical(capsys, files, monkeypatch):
    outs = []
    for threads in ("1", "4"):
        monkeypatch.setenv("TCPKIT_THREADS", threads)
        main(["suite", "--name", "thm33", "--trials", "30", "--seed", "5"])
        outs.append(capsys.readouterr().out)
        main(["classify", "--in", str(files[0])])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[2] and outs[1] == outs[3]


def test_out_file(files, tmp_path):
    out = tmp_path / "r.jsonl"
    assert main(["classify", "--in", str(files[0]), "--out", str(out)]) == 0
    assert io.load(out, "report")[-1]["statuses"]["copositive"] == "holds"


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["classify"],
    ["classify", "--in", "x", "--bogus"],
    ["classify", "--in", "/nonexistent/file"],
    ["classify", "--in", "x", "--property", "positive"],
    ["classify", "--in", "x", "--tol", "-1"],
    ["classify", "--in", "x", "--budget", "0"],
    ["solve", "--in", "x", "--method", "magic"],
    ["gen", "--kind", "identity", "--out", "x"],
])
def test_usage_errors(capsys, argv):
    assert main(argv) == 1
    assert "error" in capsys.readouterr().err


def test_malformed_tensor(capsys, tmp_path):
    p = tmp_path / "bad.tensor"
    p.write_text(json.dumps({"order": 2, "dim": 2, "entries": [{"idx": [3, 1], "val": 1}]}))
    assert main(["classify", "--in", str(p)]) == 1
    assert "entries[0]" in capsys.readouterr().err


def test_tiny_budget_is_honest(capsys, tmp_path):
    from tcpkit.generate import GenSpec, generate
    p = tmp_path / "t.tensor"
    io.store(p, generate(GenSpec("symmetric_gaussian", 4, 4, 3)), "tensor")
    code, recs, _ = run(capsys, "classify", "--in", str(p), "--property", "semi_positive", "--budget", "10")
    assert code == 0 and recs[0]["status"] in ("unknown", "fails")
