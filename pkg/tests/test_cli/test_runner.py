import json

import numpy as np
import pandas as pd

from idpath.cli import run, validate_config
from idpath.cli.runner import read_paths, summary_frame
from idpath.diagnostics import DiagnosticsReport


def _config(**overrides):
    raw = {
        "rep": {"type": "gamma", "a": 1.0, "beta": 1.0},
        "kernel": {"type": "indicator"},
        "trunc": {"m": 10.0, "window": [0.0, 1.0]},
        "grid": {"J": 4},
        "n_paths": 100,
        "seed": 5,
    }
    raw.update(overrides)
    return validate_config(raw)


def test_simulate_writes_long_form_csv(tmp_path):
    result = run(_config(), tmp_path)
    assert result.exit_code == 0
    lines = result.artifacts["paths"].read_text().splitlines()
    assert lines[0] == "# idpath-paths/1"
    assert lines[1] == "path_id,t,dim,value"
    assert len(lines) == 2 + 100 * 5
    assert result.rows["paths"] == 500
    assert not (tmp_path / "error.json").exists()
    assert not (tmp_path / "report.json").exists()


def test_summary_recomputes_from_paths(tmp_path):
    result = run(_config(), tmp_path)
    paths = read_paths(result.artifacts["paths"])
    summary = read_paths(result.artifacts["summary"])
    recomputed = summary_frame(paths)
    assert np.array_equal(summary["t"].to_numpy(), recomputed["t"].to_numpy())
    assert np.allclose(summary["mean"], recomputed["mean"], rtol=1e-15, atol=0.0)
    assert np.allclose(summary["var"], recomputed["var"], rtol=1e-15, atol=0.0)
    # gamma subordinator paths start at zero
    assert summary.loc[summary["t"] == 0.0, "mean"].item() == 0.0


def test_rerun_is_byte_identical(tmp_path):
    a = run(_config(), tmp_path / "a")
    b = run(_config(), tmp_path / "b")
    for name in ("paths", "summary", "config"):
        assert a.artifacts[name].read_bytes() == b.artifacts[name].read_bytes()


def test_json_output_mirrors_csv(tmp_path):
    csv = run(_config(), tmp_path / "csv")
    js = run(_config(output={"format": "json"}), tmp_path / "json")
    assert js.artifacts["paths"].suffix == ".json"
    body = json.loads(js.artifacts["paths"].read_text())
    assert body["schema_version"] == "idpath-paths/1"
    assert body["columns"] == ["path_id", "t", "dim", "value"]
    pd.testing.assert_frame_equal(read_paths(csv.artifacts["paths"]), read_paths(js.artifacts["paths"]))


def test_diagnose_gamma_reports_lindeberg_failure(tmp_path):
    result = run(_config(mode="diagnose"), tmp_path)
    assert result.exit_code == 0
    assert "paths" not in result.artifacts
    report = DiagnosticsReport.from_json(result.artifacts["report"].read_text())
    assert report.assumption_3b.status == "fail"
    assert report.rep_id == result.report.rep_id


def test_unbounded_kernel_gives_error_artifact(tmp_path):
    result = run(_config(kernel={"type": "log_frac"}), tmp_path)
    assert result.exit_code == 3
    error = json.loads((tmp_path / "error.json").read_text())
    assert error["code"] == "KERNEL_UNBOUNDED"
    assert error["exit_code"] == 3
    assert not (tmp_path / "paths.csv").exists()


def test_singular_covariance_gives_assumption_error(tmp_path):
    rep = {"type": "stable", "alpha": 1.5, "atoms": [{"xi": [1.0, 0.0], "w": 1.0}, {"xi": [-1.0, 0.0], "w": 1.0}]}
    result = run(_config(rep=rep, mode="refine", refine={"resolution": 64}, n_paths=2), tmp_path)
    assert result.exit_code == 4
    assert json.loads((tmp_path / "error.json").read_text())["code"] == "ASSUMPTION_3A"


def test_success_clears_stale_error(tmp_path):
    run(_config(kernel={"type": "log_frac"}), tmp_path)
    assert (tmp_path / "error.json").exists()
    assert run(_config(), tmp_path).exit_code == 0
    assert not (tmp_path / "error.json").exists()


def test_rband_outside_kernel_domain_is_zero(tmp_path):
    result = run(_config(mode="rband", band={"outer": [-1.0, 2.0]}, n_paths=20), tmp_path)
    assert result.exit_code == 0
    paths = read_paths(result.artifacts["paths"])
    assert (paths["value"] == 0.0).all()


def test_refine_uses_resolution(tmp_path):
    rep = {"type": "stable", "alpha": 1.5, "atoms": [{"xi": [1.0], "w": 1.0}, {"xi": [-1.0], "w": 1.0}]}
    result = run(_config(rep=rep, mode="refine", refine={"resolution": 256}, n_paths=10), tmp_path)
    assert result.exit_code == 0
    assert result.rows["paths"] == 50


def test_qband_report_has_normality_p(tmp_path):
    rep = {"type": "stable", "alpha": 1.5, "atoms": [{"xi": [1.0], "w": 1.0}, {"xi": [-1.0], "w": 1.0}]}
    result = run(
        _config(rep=rep, kernel={"type": "ou", "lambda": 1.0}, mode="qband", n_paths=1000, band={"M": 100.0}),
        tmp_path,
    )
    assert result.exit_code == 0
    assert 0.0 <= result.report.normality_p <= 1.0


def test_validate_reports_cf_distance(tmp_path):
    result = run(_config(mode="validate", n_paths=1000), tmp_path)
    assert result.exit_code == 0
    assert result.report.cf_distance < 0.2
    assert result.report.cf_status == "pass"
    assert result.report.tail_alpha_hat is not None


def test_validate_marks_unconverged_oracle_inconclusive(tmp_path, mocker):
    mocker.patch("idpath.diagnostics.cf.integrate").quad.return_value = (0.0, 1.0)
    result = run(_config(mode="validate", n_paths=1000), tmp_path)
    assert result.exit_code == 0
    report = DiagnosticsReport.from_json(result.artifacts["report"].read_text())
    assert report.cf_status == "inconclusive"
