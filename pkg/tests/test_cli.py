import csv
import json

import pytest

from focklimit.cli import run_cli


@pytest.fixture
def short_config(tmp_path):
    path = tmp_path / "short.json"
    path.write_text(json.dumps({"lambdas": [1, 4, 16, 64]}))
    return path


def manifest(out):
    return json.loads((out / "manifest.json").read_text())


def test_identities_pass(tmp_path):
    out = tmp_path / "o"
    assert run_cli(["identities", "--out", str(out)]) == 0
    report = json.loads((out / "identities.json").read_text())
    assert report["passed"] and report["checks"]
    m = manifest(out)
    assert m["exit_status"] == 0 and m["config"]["coupling"] == 0.5
    assert set(m["versions"]) >= {"python", "numpy", "scipy"}
    assert "run" in m["timings"]


def test_sweep_csv(tmp_path, short_config):
    out = tmp_path / "o"
    assert run_cli(["sweep", "--config", str(short_config), "--out", str(out)]) == 0
    with (out / "sweep.csv").open() as fh:
        rows = list(csv.DictReader(fh))
    assert list(rows[0]) == ["lambda", "vector_id", "error", "residual", "seconds"]
    assert len(rows) == 4 * 4
    # round-trip float formatting
    for row in rows:
        assert repr(float(row["error"])) == row["error"]


def test_sweep_json_format(tmp_path, short_config):
    out = tmp_path / "o"
    assert run_cli(["sweep", "--config", str(short_config), "--out", str(out), "--format", "json"]) == 0
    records = json.loads((out / "sweep.json").read_text())
    assert {"lambda", "vector_id", "error", "residual", "seconds"} == set(records[0])


def test_real_z_is_config_error(tmp_path, capsys):
    bad = tmp_path / "bad_z.json"
    bad.write_text(json.dumps({"z": 1.0}))
    out = tmp_path / "o"
    assert run_cli(["sweep", "--config", str(bad), "--out", str(out)]) == 2
    assert "Im z" in capsys.readouterr().err
    assert manifest(out)["exit_status"] == 2


def test_usage_errors(tmp_path, capsys):
    out = tmp_path / "o"
    assert run_cli(["frobnicate", "--out", str(out)]) == 2
    assert "usage" in capsys.readouterr().err
    assert manifest(out)["exit_status"] == 2
    assert run_cli(["sweep", "--bogus", "--out", str(out)]) == 2
    assert run_cli(["sweep", "--config", str(tmp_path / "nope.json"), "--out", str(out)]) == 2


def test_seed_flag_and_threads_env(tmp_path, monkeypatch):
    out = tmp_path / "o"
    monkeypatch.setenv("FOCKLIMIT_THREADS", "2")
    assert run_cli(["bounds", "--out", str(out), "--seed", "7", "--threads", "1"]) == 0
    assert manifest(out)["config"]["seed"] == 7


def test_suite_failure_exit_code(tmp_path, monkeypatch):
    import focklimit.cli as cli
    from focklimit.lab import SuiteReport

    def failing(model):
        rep = SuiteReport("identities")
        rep.add_equality("forced", 1.0, 0.0)
        return rep

    monkeypatch.setattr(cli, "identity_suite", failing)
    out = tmp_path / "o"
    assert run_cli(["identities", "--out", str(out)]) == 1
    assert manifest(out)["summary"]["failed"] == ["forced"]


def test_kernel_with_integrable_cutoff(tmp_path):
    cfg = tmp_path / "k.json"
    cfg.write_text(json.dumps({"cutoffs": {"rad": {"kind": "sharp", "radius": 2.0}}}))
    out = tmp_path / "o"
    assert run_cli(["kernel", "--config", str(cfg), "--out", str(out)]) == 0
    rows = json.loads((out / "kernel.json").read_text())
    assert {r["provenance"] for r in rows} == {"discrete-mode-sum", "continuum-quadrature"}
    assert "gamma_quadrature" in manifest(out)["summary"]


def test_spectrum(tmp_path, short_config):
    out = tmp_path / "o"
    assert run_cli(["spectrum", "--config", str(short_config), "--out", str(out)]) == 0
    lines = (out / "spectrum.csv").read_text().splitlines()
    assert lines[0] == "operator,lambda,lowest_eigenvalue"
    assert lines[-1].startswith("H_eff,inf,")
