import csv
import importlib
import io
import json
import subprocess
import sys

import pytest

from hermzeros import acceptance, cli, exact_poly
from hermzeros.exact_poly import Poly

hermite = importlib.import_module("hermzeros.hermite")


def run(*argv):
    status, text, _ = cli.run(list(argv))
    return status, text


def report(*argv):
    status, text = run(*argv)
    return status, json.loads(text)


def test_threshold_command():
    status, rep = report("threshold", "--gamma", "1,0,1", "--ceiling", "40")
    assert status == 0 and rep["passed"]
    assert rep["result"]["n0"] == 2
    assert rep["result"]["z_nonreal"]["1"] == 0 and rep["result"]["z_nonreal"]["40"] == 2
    assert rep["input"]["gamma"] == ["1/1", "0/1", "1/1"]
    assert rep["schema_version"] == 1 and rep["library"]["name"] == "hermzeros"


def test_roots_command():
    status, rep = report("roots", "--gamma", "1", "--norm", "standard", "--n", "10")
    assert status == 0
    assert len(rep["result"]["report"]["real_intervals"]) == 10
    status, rep = report("roots", "--gamma", "1,0,1", "--n", "2", "--complex")
    assert rep["result"]["report"]["n_nonreal"] == 2
    assert [round(z["im"], 4) for z in rep["result"]["complex_roots"]] == [-1.2247, 1.2247]


def test_asymptotics_csv():
    status, text = run("asymptotics", "--gamma", "1,-1", "--check", "edge", "--n", "60",
                       "--format", "csv")
    assert status == 0
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["n", "observed", "target", "abs_error"]
    n, observed, target, err = rows[1]
    assert n == "60" and float(target) == 1.0 and abs(float(observed) - 1) == pytest.approx(float(err))


def test_other_commands():
    assert report("build", "--phi", "1,1", "--n", "2")[1]["result"]["polynomial"]["text"] == \
        "Poly(4*x^2 + 4*x - 1)"
    assert report("build", "--multi-n", "1,1", "--c", "1,-1")[1]["result"]["polynomial"]["text"] == \
        "Poly(4*x^2 - 3)"
    assert report("interlace", "--gamma", "1,-1", "--norm", "standard", "--n", "1")[0] == 0
    assert report("interlace", "--gamma", "1,-1", "--norm", "standard", "--range", "1:12")[0] == 0
    assert report("turan", "--gamma", "1", "--norm", "appell", "--n", "2")[0] == 0
    assert report("pencil", "--gamma", "1,0,1", "--theta=-1,1/3", "--ceiling", "20")[0] == 0
    assert report("signs", "--gamma", "1,-1", "--range", "1:20")[0] == 0
    status, rep = report("conjecture", "--gamma", "1,0,1", "--range", "2:20")
    assert status == 0 and rep["result"]["evidence_only"]
    status, rep = report("asymptotics", "--check", "mehler-heine", "--x", "1", "--n", "10,20,40")
    assert status == 0 and len(rep["result"]["checks"]) == 3


def test_check_failure_exits_one():
    status, rep = report("turan", "--phi", "1,2,3,4", "--n", "4")
    assert status == 1 and not rep["passed"] and rep["result"]["degree"] == 5
    status, rep = report("asymptotics", "--gamma", "1,-1", "--check", "edge", "--n", "10",
                         "--tolerance", "0.001")
    assert status == 1


@pytest.mark.parametrize("argv", [
    ["build", "--gamma", "2,1", "--n", "3"],
    ["build", "--gamma", "1,0", "--n", "3"],
    ["build", "--multi-n", "1,1", "--c", "2,2"],
    ["build", "--gamma", "1,0.5", "--n", "3"],
    ["threshold"],
])
def test_invalid_input_exits_two(argv, capsys):
    assert cli.main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_config_file_and_output(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"command": "threshold", "gamma": ["1", "0", "1"], "ceiling": 12}))
    out = tmp_path / "report.json"
    assert cli.main(["--config", str(cfg), "--output", str(out)]) == 0
    rep = json.loads(out.read_text(encoding="utf-8"))
    assert rep["input"]["ceiling"] == 12 and rep["result"]["n0"] == 2


def test_precision_environment(monkeypatch):
    monkeypatch.setenv("HERMZEROS_PRECISION", "200")
    assert cli.build_parser().parse_args(["roots"]).precision_bits == 200


def test_reports_are_deterministic():
    argv = ["pencil", "--gamma", "1,0,1", "--ceiling", "15"]
    assert run(*argv)[1] == run(*argv)[1]
    argv = ["selftest", "--only", "1,2"]
    assert run(*argv)[1] == run(*argv)[1]


def test_module_entry_point_is_byte_stable():
    cmd = [sys.executable, "-m", "hermzeros", "threshold", "--gamma", "1,0,1", "--ceiling", "10"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["result"]["n0"] == 2


def test_selftest_passes_on_clean_build():
    status, rep = report("selftest", "--only", "1,2,10")
    assert status == 0 and all(c["passed"] for c in rep["result"]["criteria"])


def test_corrupted_backward_shift_is_caught(monkeypatch):
    def broken(p):
        # off-by-one in the derivative term
        c = p.coeffs
        out = [0] * (len(c) + 1)
        for i, ci in enumerate(c):
            out[i + 1] += 2 * ci
            if i:
                out[i - 1] -= (i + 1) * ci
        return Poly(out)

    monkeypatch.setattr(exact_poly, "apply_lambda", broken)
    monkeypatch.setattr(hermite, "apply_lambda", broken)
    hermite.clear_cache()
    try:
        result = acceptance.run_criterion(1)
        assert not result.passed and "mismatch" in result.detail
        status, rep = report("selftest", "--only", "1")
        assert status == 1
    finally:
        hermite.clear_cache()
