import csv
import io
import json

import pytest
from click.testing import CliRunner

from abcscatter.cli import cli

SCATTER = ["--gamma", "0.05", "--alpha", "0", "--energy", "1.25"]


def invoke(*args):
    return CliRunner().invoke(cli, list(args))


def test_cross_section_csv():
    r = invoke("cross-section", *SCATTER, "--theta", "30:180:16", "--format", "csv")
    assert r.exit_code == 0, r.output
    rows = list(csv.DictReader(io.StringIO(r.stdout)))
    assert len(rows) == 16
    assert list(rows[0]) == ["theta_deg", "sigma", "method"]
    assert {row["method"] for row in rows} == {"ClosedNu0"}
    assert float(rows[0]["theta_deg"]) == 30 and float(rows[-1]["theta_deg"]) == 180


def test_bound_states():
    r = invoke("bound-states", "--gamma", "0.1", "--alpha", "0", "--nmax", "3", "--jmax", "5/2")
    assert r.exit_code == 0
    rows = list(csv.DictReader(io.StringIO(r.stdout)))
    energies = [float(x["energy"]) for x in rows]
    assert energies == sorted(energies)
    ground = [x for x in rows if x["n"] == "0" and x["j"] == "0.5"]
    assert abs(float(ground[0]["energy"]) - 0.9797959) < 1e-6


def test_validate_passes():
    r = invoke("validate", "--gamma", "0.05", "--alpha", "0.2", "--energy", "1.25", "--format", "json")
    assert r.exit_code == 0, r.output
    out = json.loads(r.stdout)
    assert set(out) == {"spec", "rows", "diagnostics"}
    checks = {row["check"]: row for row in out["rows"]}
    assert checks["ode_vs_exact"]["max_deviation"] < 1e-5
    assert checks["resummation"]["status"] == "pass"


def test_json_and_csv_payloads_match():
    a = invoke("amplitude", "--gamma", "0.05", "--alpha", "0.3", "--energy", "1.5",
               "--theta", "40:320:5", "--format", "json")
    b = invoke("amplitude", "--gamma", "0.05", "--alpha", "0.3", "--energy", "1.5",
               "--theta", "40:320:5", "--format", "csv")
    rows_json = json.loads(a.stdout)["rows"]
    rows_csv = list(csv.DictReader(io.StringIO(b.stdout)))
    for rj, rc in zip(rows_json, rows_csv):
        for key, val in rj.items():
            if isinstance(val, float):
                assert float(rc[key]) == val
            else:
                assert rc[key] == str(val)


def test_phase_shifts_report_supercritical():
    r = invoke("phase-shifts", "--gamma", "0.1", "--alpha", "0.5", "--energy", "1.25", "--format", "json")
    assert r.exit_code == 0
    rows = json.loads(r.stdout)["rows"]
    sc = [x for x in rows if x["kind"] == "supercritical"]
    assert len(sc) == 1 and sc[0]["j"] == -0.5 and sc[0]["eta"] is None
    assert all(abs(x["abs_S"] - 1) < 1e-12 for x in rows if x["kind"] == "subcritical")


@pytest.mark.parametrize("args", [
    ["amplitude", "--gamma", "0.6", "--alpha", "0", "--energy", "1.2"],
    ["amplitude", *SCATTER[:4], "--energy", "0.9"],
    ["amplitude", *SCATTER, "--theta", "1:90:3"],
    ["amplitude", *SCATTER, "--theta", "30-90"],
    ["phase-shifts", *SCATTER, "--jmax", "2"],
    ["bound-states", "--gamma", "-0.1", "--alpha", "0"],
    ["amplitude", "--gamma", "0.05", "--alpha", "0.45", "--energy", "1.25"],
    ["cross-section", "--gamma", "0.05", "--alpha", "0"],
])
def test_invalid_input_exit_code(args):
    r = invoke(*args)
    assert r.exit_code == 2
    assert r.stdout == ""


def test_convergence_failure_exit_code(monkeypatch):
    from abcscatter import cli as cli_mod
    from abcscatter.errors import ConvergenceError

    def boom(*a, **k):
        raise ConvergenceError("no")

    monkeypatch.setattr(cli_mod, "amplitude", boom)
    assert invoke("amplitude", *SCATTER).exit_code == 3


def test_validation_breach_exit_code(monkeypatch):
    from abcscatter import cli as cli_mod

    monkeypatch.setattr(cli_mod, "ODE_TOL", 1e-15)
    r = invoke("validate", "--gamma", "0.05", "--alpha", "0.2", "--energy", "1.25")
    assert r.exit_code == 4
    assert "fail" in r.stdout


def test_plot_written(tmp_path):
    path = tmp_path / "sigma.png"
    r = invoke("cross-section", *SCATTER, "--plot", str(path))
    assert r.exit_code == 0
    assert path.stat().st_size > 1000
    assert r.stdout.startswith("theta_deg,sigma,method")


def test_output_is_deterministic():
    args = ["validate", "--gamma", "0.05", "--alpha", "0.2", "--energy", "1.25", "--format", "json"]
    assert invoke(*args).stdout == invoke(*args).stdout
