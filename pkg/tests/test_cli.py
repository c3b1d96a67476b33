import json
import subprocess
import sys

import pytest

from galerkin_time.cli import main


def run(argv):
    return main(argv)


def test_solve_writes_samples_and_summary(tmp_path, capsys):
    out = tmp_path / "samples.csv"
    code = run(
        ["solve", "--problem", "riccati", "--k", "2", "--N", "8", "--out", str(out)]
    )
    assert code == 0
    captured = capsys.readouterr().out
    assert "DG_star" in captured and "l2" in captured
    lines = out.read_text().strip().split("\n")
    assert lines[0].startswith("# galerkin-time solution-samples")
    assert len(lines) == 2 + 8 * 20


def test_solve_json_format(tmp_path):
    out = tmp_path / "samples.json"
    code = run(
        ["solve", "--problem", "decay", "--k", "1", "--N", "2",
         "--format", "json", "--out", str(out)]
    )
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["schema"].startswith("galerkin-time solution-samples")
    assert len(payload["samples"]) == 2 * 20


def test_solve_coincidence_check_passes(tmp_path, capsys):
    out = tmp_path / "c.csv"
    code = run(
        ["solve", "--problem", "cosine", "--k", "1", "--N", "4",
         "--check-coincidence", "--out", str(out)]
    )
    assert code == 0
    assert "PASS" in capsys.readouterr().out


def test_solve_coincidence_informational_for_nonlinear(tmp_path, capsys):
    out = tmp_path / "c.csv"
    code = run(
        ["solve", "--problem", "riccati", "--k", "1", "--N", "4",
         "--check-coincidence", "--out", str(out)]
    )
    assert code == 0  # informational: not expected to coincide
    assert "informational" in capsys.readouterr().out


def test_invalid_k_is_usage_error(tmp_path, capsys):
    code = run(["solve", "--problem", "decay", "--k", "-1", "--N", "2",
                "--out", str(tmp_path / "x.csv")])
    assert code == 2


def test_unknown_problem_lists_registry(capsys):
    code = run(["solve", "--problem", "nope", "--k", "1", "--N", "2"])
    assert code == 2
    err = capsys.readouterr().err
    assert "riccati" in err and "decay" in err


def test_problem_file_input(tmp_path, capsys):
    desc = {"name": "halflife", "rhs": "linear", "params": {"rate": -0.7},
            "u0": [1.0], "T": 2.0}
    pf = tmp_path / "p.json"
    pf.write_text(json.dumps(desc))
    code = run(["solve", "--problem-file", str(pf), "--k", "1", "--N", "4",
                "--out", str(tmp_path / "o.csv")])
    assert code == 0


def test_verify_passes(capsys):
    code = run(["verify", "--problem", "riccati", "--k", "3", "--N", "16"])
    assert code == 0
    out = capsys.readouterr().out
    assert out.count("PASS") >= 6
    assert "FAIL" not in out


@pytest.mark.parametrize("k", [0, 2, 5])
def test_verify_sweep(k, capsys):
    code = run(["verify", "--problem", "decay", "--k", str(k), "--N", "8"])
    assert code == 0


def test_verify_radau_mode(capsys):
    code = run(["verify", "--problem", "riccati", "--k", "2", "--N", "8",
                "--rhs-mode", "radau"])
    assert code == 0


def test_verify_insufficient_quadrature_fails_with_explanation(capsys):
    code = run(["verify", "--problem", "riccati", "--k", "3", "--N", "8",
                "--quad", "1"])
    assert code == 1
    out = capsys.readouterr().out
    assert "FAIL" in out
    assert "exact" in out  # names quadrature exactness as the cause


def test_solve_insufficient_quadrature_is_usage_error(tmp_path):
    code = run(["solve", "--problem", "decay", "--k", "3", "--N", "4",
                "--quad", "2", "--out", str(tmp_path / "x.csv")])
    assert code == 2


def test_convergence_writes_report(tmp_path, capsys):
    out = tmp_path / "report.csv"
    code = run(["convergence", "--problem", "decay", "--k", "1",
                "--levels", "4", "--N0", "2", "--out", str(out)])
    assert code == 0
    text = out.read_text()
    assert text.startswith("# galerkin-time convergence-report")
    printed = capsys.readouterr().out
    assert "DG_star" in printed


def test_convergence_too_few_levels(tmp_path):
    code = run(["convergence", "--problem", "decay", "--k", "1",
                "--levels", "2", "--out", str(tmp_path / "r.csv")])
    assert code == 2


def test_convergence_output_is_deterministic(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    for out in (a, b):
        code = run(["convergence", "--problem", "riccati", "--k", "1",
                    "--levels", "3", "--N0", "2", "--format", "json",
                    "--out", str(out)])
        assert code == 0
    assert a.read_bytes() == b.read_bytes()


def test_geometric_mesh_option(tmp_path):
    code = run(["solve", "--problem", "decay", "--k", "1", "--N", "6",
                "--mesh", "geometric", "--mesh-ratio", "1.5",
                "--out", str(tmp_path / "g.csv")])
    assert code == 0


def test_tolerance_env_scaling(tmp_path, monkeypatch, capsys):
    # an absurdly small global tolerance makes verify fail
    monkeypatch.setenv("GALERKIN_TIME_TOL", "1e-9")
    code = run(["verify", "--problem", "decay", "--k", "1", "--N", "4"])
    assert code == 1
    monkeypatch.setenv("GALERKIN_TIME_TOL", "bogus")
    code = run(["verify", "--problem", "decay", "--k", "1", "--N", "4"])
    assert code == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "galerkin_time", "verify", "--problem", "decay",
         "--k", "1", "--N", "4"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "PASS" in proc.stdout


def test_solver_failure_exit_code(tmp_path, capsys):
    # u' = 10u with h = 0.1 hits a singular k=0 system: runtime failure, not usage
    desc = {"name": "degenerate", "rhs": "linear", "params": {"rate": 10.0},
            "u0": [1.0], "T": 1.0}
    pf = tmp_path / "p.json"
    pf.write_text(json.dumps(desc))
    code = run(["solve", "--problem-file", str(pf), "--k", "0", "--N", "10",
                "--out", str(tmp_path / "x.csv")])
    assert code == 1
    assert "element 0" in capsys.readouterr().err
