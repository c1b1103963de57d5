import csv
import io
import json
import subprocess
import sys

import pytest

from finitegap.cli import EXIT_INPUT, EXIT_OK, EXIT_VERIFY, build_config, make_parser, run


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), stream=out)
    text = out.getvalue()
    return code, (json.loads(text) if text.strip().startswith("{") else text)


def test_solve_headline_from_command_line():
    code, rep = call("solve", "--alpha", "4,0,0,0", "--d", "2", "--periods", "2,0,1.2,3.4")
    assert code == EXIT_OK
    assert rep["count"] == 27 and not rep["warnings"]
    assert rep["degree"] == 14
    assert max(max(s["residuals"]) for s in rep["solutions"]) < 1e-8
    assert rep["spectral"]["expected_count"] == 27


def test_solve_d1_from_branch_values():
    code, rep = call("solve", "--alpha", "0,0,0,0", "--d", "1", "--e", "1,0,-1")
    assert code == EXIT_OK
    assert rep["count"] == 6 and rep["lattice"] is None
    assert rep["notices"] and not rep["warnings"]
    xs = sorted((complex(*s["x"]) for s in rep["solutions"]), key=lambda z: (z.real, z.imag))
    assert abs(xs[0] + 1 + 2**0.5) < 1e-9


def test_solve_depth_zero():
    code, rep = call("solve", "--alpha", "0,0,0,0", "--d", "0")
    assert code == EXIT_OK
    assert rep["count"] == 0 and rep["solutions"] == [] and rep["degree"] == 0


@pytest.mark.parametrize("argv", [
    ("solve", "--alpha", "0,0,0,0", "--d", "3", "--e", "1,0,-1"),
    ("solve", "--alpha", "0,0,0,0", "--d", "1"),
    ("solve", "--alpha", "0,0,0,0", "--d", "1", "--e", "1,0,-1", "--periods", "1,0,0,1"),
    ("solve", "--mu", "1,0,0,0", "--d", "1", "--e", "1,0,-1"),
    ("solve", "--alpha", "0,0,0", "--d", "1", "--e", "1,0,-1"),
    ("solve", "--alpha", "0,0,0,0", "--d", "1", "--e", "1,1,-2"),
    ("solve", "--alpha", "0,0,0,0", "--d", "2", "--periods", "1,0,2,0"),
    ("count", "--mu", "1,1,0,0", "--d", "2"),
    ("count", "--mu", "3,2,2,2", "--d", "3"),
    ("count", "--mu", "3,2,2,2", "--alpha", "1,2,2,2"),
])
def test_input_errors_exit_one(argv):
    code, text = call(*argv)
    assert code == EXIT_INPUT


def test_count_examples():
    assert call("count", "--mu", "1,0,0,0", "--d", "2")[1]["count"] == 0
    code, rep = call("count", "--alpha", "1,2,2,2", "--d", "2")
    assert code == EXIT_OK and rep["count"] == 27 and len(rep["strata"]) == 1
    assert call("count", "--mu", "1,0,0,2", "--d", "2")[1]["count"] == 4


def test_spectral_exceptional_recursion():
    rep = call("spectral", "--alpha", "0,0,0,0")[1]
    assert rep["total"] == 27
    rep = call("exceptional", "--mu", "3,2,2,2")[1]
    assert rep["neighbors"] == 24 and rep["exceptional_curves"] == 25 and rep["sum_rule"] == 22
    rep = call("recursion", "--mu", "1,0,0,0", "--d", "2")[1]
    assert rep["recursion_count"] == rep["closed_form"] == 0


def test_wp_eval():
    rep = call("wp-eval", "--periods", "1,0,0,1", "0.3+0.1j", "0.2")[1]
    assert len(rep["values"]) == 2
    assert abs(rep["values"][1]["wp_im"]) < 1e-12


@pytest.mark.parametrize("suite", ["identities", "counts", "appendixB", "lattice"])
def test_verify_suites(suite):
    code, rep = call("verify", suite, "--seed", "1")
    assert code == EXIT_OK and rep["passed"]


def test_csv_output(tmp_path):
    path = tmp_path / "sol.csv"
    code, text = call("solve", "--alpha", "0,0,0,0", "--d", "1", "--e", "1,0,-1", "--format", "csv", "--csv", str(path))
    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 6 and {"x_re", "x_im", "multiplicity"} <= set(rows[0])
    assert list(csv.DictReader(path.open())) == rows


def test_pretty_output():
    code, text = call("count", "--mu", "3,2,2,2", "--d", "2", "--format", "pretty")
    assert code == EXIT_OK and "severi_count: 27" in text


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"mu": [1, 0, 0, 2], "d": 1}))
    assert call("count", "--config", str(cfg))[1]["count"] == 2
    assert call("count", "--config", str(cfg), "--d", "2")[1]["count"] == 4
    cfg.write_text(json.dumps({"mu": [3, 2, 2, 2]}))
    assert call("count", "--config", str(cfg))[1]["count"] == 27
    cfg.write_text(json.dumps({"bogus": 1}))
    assert call("count", "--config", str(cfg))[0] == EXIT_INPUT


def test_build_config_parses_complex_and_rational():
    args = make_parser().parse_args(["solve", "--alpha", "1,0,0,0", "--e", "1/2,1i,-0.5-1i"])
    cfg = build_config(args)
    assert cfg.e == (0.5, 1j, -0.5 - 1j)


def test_deterministic_given_seed():
    a = call("solve", "--alpha", "1,2,2,2", "--d", "2", "--periods", "2,0,0.6,1.7", "--seed", "3")[1]
    b = call("solve", "--alpha", "1,2,2,2", "--d", "2", "--periods", "2,0,0.6,1.7", "--seed", "3")[1]
    assert a == b


def test_verify_failure_exit_code(monkeypatch):
    from finitegap import suites

    def broken(seed=0, **_):
        c = suites.Check("always fails")
        c.record(False, {"why": "forced"})
        return suites.SuiteResult("counts", [c])

    monkeypatch.setitem(suites.SUITES, "counts", broken)
    code, rep = call("verify", "counts")
    assert code == EXIT_VERIFY and not rep["passed"]
    assert rep["suites"][0]["checks"][0]["failing_cases"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "finitegap", "count", "--mu", "3,2,2,2", "--d", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["count"] == 27
