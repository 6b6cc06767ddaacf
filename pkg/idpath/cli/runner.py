"""
Batch runner: turns a validated ExperimentConfig into artifacts on disk.

Artifacts of a run directory:
  config.yaml   the effective config
  paths.csv     long form `path_id,t,dim,value` (or paths.json)
  summary.csv   per grid time and coordinate mean/var (or summary.json)
  report.json   DiagnosticsReport for diagnose/validate/qband/rband
  error.json    machine-readable error; present iff the run failed
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union
import json
import logging

import numpy as np
import pandas as pd

from idpath import streams
from idpath.cli.config import REPORT_MODES, ExperimentConfig, emit_config
from idpath.diagnostics import (
    DiagnosticsReport,
    cf_distance_check,
    check_assumptions,
    normality_test,
    tail_exponent,
)
from idpath.errors import DomainError, IdpathError, UnsupportedError
from idpath.kernels import Interval, Kernel, get_kernel
from idpath.levy import LevyRepresentation, get_representation
from idpath.settings import settings
from idpath.simulation import (
    GridSpec,
    PathBatch,
    TruncationParams,
    generate_batch,
    generate_path,
    path_sup,
    refined_path,
    sample_q_band,
    sample_r_band,
)

logger = logging.getLogger(__name__)

PATHS_SCHEMA = "idpath-paths/1"
SUMMARY_SCHEMA = "idpath-summary/1"
ERROR_SCHEMA = "idpath-error/1"
FLOAT_FORMAT = "%.17g"


@dataclass
class RunResult:
    exit_code: int
    out_dir: Path
    artifacts: Dict[str, Path] = field(default_factory=dict)
    rows: Dict[str, int] = field(default_factory=dict)
    report: Optional[DiagnosticsReport] = None
    error: Optional[Dict[str, Any]] = None


# --- Jobs ---


def _build(config: ExperimentConfig) -> Tuple[LevyRepresentation, Kernel, TruncationParams, GridSpec]:
    rep = get_representation(config.rep)
    kernel = get_kernel(config.kernel, horizon=config.grid.T)
    trunc = TruncationParams(config.trunc.m, Interval.of(config.trunc.window))
    grid = GridSpec(J=config.grid.J, T=config.grid.T)
    return rep, kernel, trunc, grid


def simulate_batch(config: ExperimentConfig) -> Optional[PathBatch]:
    """Paths of the config's mode, one counter-based stream per path; None for diagnose."""
    rep, kernel, trunc, grid = _build(config)
    mode = config.mode
    if mode in ("simulate", "validate"):
        job, component = (lambda r: generate_path(rep, kernel, trunc, grid, r)), streams.PRINCIPAL
    elif mode == "refine":
        resolution = config.refine.resolution
        job, component = (lambda r: refined_path(rep, kernel, trunc, grid, r, resolution)), streams.PRINCIPAL
    elif mode == "qband":
        M, centering = config.band.M, config.band.centering
        job, component = (
            lambda r: sample_q_band(rep, kernel, trunc.m, M, trunc.window, grid, r, centering)
        ), streams.Q_BAND
    elif mode == "rband":
        outer = Interval.of(config.band.outer)
        job, component = (
            lambda r: sample_r_band(rep, kernel, trunc.m, trunc.window, outer, grid, r)
        ), streams.R_BAND
    else:
        return None
    return generate_batch(job, config.n_paths, config.seed, component=component)


def _band_sigma(rep: LevyRepresentation, m: float, M: float, seed: int, n_samples: int) -> np.ndarray:
    try:
        return rep.band_covariance(m, M)
    except UnsupportedError:
        logger.info(f"{rep.rep_id}: band covariance from the Monte Carlo oracle")
        rng = streams.path_stream(seed, 0, streams.DIAGNOSTICS)
        return rep.residual_covariance_numeric(m, n_samples=n_samples, r_max=M, rng=rng).matrix


def _axis_grid(values: List[float], dim: int) -> List[np.ndarray]:
    """The 1-d y values laid along every coordinate axis."""
    return [y * np.eye(dim)[j] for j in range(dim) for y in values]


def build_report(config: ExperimentConfig, batch: Optional[PathBatch]) -> DiagnosticsReport:
    """Assumption verdicts plus the mode's statistic (CF distance, normality p, tail index)."""
    rep, kernel, trunc, grid = _build(config)
    diag = config.diagnostics
    report = check_assumptions(
        rep, kernel, diag.m_grid, diag.kappa_grid, seed=config.seed, n_samples=diag.n_samples
    )
    update: Dict[str, Any] = {}
    if config.mode == "validate":
        t = float(grid.times[-1])
        y_grid = _axis_grid(diag.y_grid, rep.dim)
        check = cf_distance_check(batch, rep, kernel, trunc.m, trunc.window, t, y_grid)
        update["cf_distance"] = check.distance
        update["cf_status"] = check.status
        update["tail_alpha_hat"] = _tail_or_none(batch, diag.top_fraction)
    elif config.mode == "qband" and batch.n_paths >= 1000:
        sigma = _band_sigma(rep, trunc.m, config.band.M, config.seed, diag.n_samples)
        times = [float(t) for t in grid.times if t > 0 and kernel.square_integral(float(t), trunc.window) > 0]
        if times:
            update["normality_p"] = normality_test(batch, sigma, times, kernel, trunc.window).min_p
    elif config.mode == "rband" and batch.n_paths >= 1000:
        update["tail_alpha_hat"] = _tail_or_none(batch, diag.top_fraction)
    return report.model_copy(update=update)


def _tail_or_none(batch: PathBatch, top_fraction: float):
    try:
        return tail_exponent(path_sup(batch), top_fraction)
    except DomainError as e:
        logger.warning(f"No tail estimate: {e}")
        return None


# --- Writers ---


def paths_frame(batch: PathBatch) -> pd.DataFrame:
    """Long-form table, one row per (path, grid time, coordinate), ordered by path id."""
    n, n_times, d = batch.values.shape
    ids = np.array([m.path_id for m in batch.metas])
    return pd.DataFrame(
        {
            "path_id": np.repeat(ids, n_times * d),
            "t": np.tile(np.repeat(batch.grid, d), n),
            "dim": np.tile(np.arange(d), n * n_times),
            "value": batch.values.reshape(-1),
        }
    )


def summary_frame(paths: pd.DataFrame) -> pd.DataFrame:
    """Mean and sample variance of the paths at each grid time and coordinate."""
    grouped = paths.groupby(["t", "dim"], sort=True)["value"]
    return grouped.agg(n="count", mean="mean", var="var").reset_index()


def _write_frame(frame: pd.DataFrame, path: Path, schema: str, fmt: str) -> Path:
    if fmt == "csv":
        path = path.with_suffix(".csv")
        with path.open("w", newline="") as fh:
            fh.write(f"# {schema}\n")
            frame.to_csv(fh, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    else:
        path = path.with_suffix(".json")
        split = frame.to_dict(orient="split")
        body = {"schema_version": schema, "columns": split["columns"], "data": split["data"]}
        path.write_text(json.dumps(body, allow_nan=True) + "\n")
    return path


def read_paths(path: Union[str, Path]) -> pd.DataFrame:
    """Load a paths (or summary) file written by the runner, CSV or JSON."""
    path = Path(path)
    if path.suffix == ".json":
        body = json.loads(path.read_text())
        return pd.DataFrame(body["data"], columns=body["columns"])
    return pd.read_csv(path, comment="#")


def write_error(out_dir: Path, error: IdpathError) -> Dict[str, Any]:
    """Write error.json carrying the error's code and exit status."""
    out_dir.mkdir(parents=True, exist_ok=True)
    payload = {
        "schema_version": ERROR_SCHEMA,
        "code": error.code,
        "exit_code": error.exit_code,
        "message": str(error),
        "violations": list(getattr(error, "violations", [])),
    }
    (out_dir / "error.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return payload


def resolve_out_dir(config: Optional[ExperimentConfig], out: Optional[Union[str, Path]] = None) -> Path:
    if out is not None:
        return Path(out)
    if config is not None and config.output.dir:
        return Path(config.output.dir)
    return Path(settings.output_dir)


def run(config: ExperimentConfig, out: Optional[Union[str, Path]] = None) -> RunResult:
    """
    Execute one configured run and write its artifacts.

    Identical config and seed give byte-identical files. Errors raised by the
    library become error.json plus the error's exit code; nothing else is
    written for a failed run.

    Args:
        config: Validated experiment config.
        out: Output directory; overrides config.output.dir and settings.output_dir.

    Returns:
        RunResult with exit code 0 on success.
    """
    out_dir = resolve_out_dir(config, out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "error.json").unlink(missing_ok=True)
    logger.info(f"Run mode={config.mode} seed={config.seed} n_paths={config.n_paths} -> {out_dir}")

    try:
        batch = simulate_batch(config)
        report = build_report(config, batch) if config.mode in REPORT_MODES else None
    except IdpathError as e:
        logger.error(f"Run failed with {e.code}: {e}")
        payload = write_error(out_dir, e)
        return RunResult(exit_code=e.exit_code, out_dir=out_dir, artifacts={"error": out_dir / "error.json"}, error=payload)

    result = RunResult(exit_code=0, out_dir=out_dir, report=report)
    config_path = out_dir / "config.yaml"
    config_path.write_text(emit_config(config))
    result.artifacts["config"] = config_path

    fmt = config.output.format
    if batch is not None:
        paths = paths_frame(batch)
        result.artifacts["paths"] = _write_frame(paths, out_dir / "paths", PATHS_SCHEMA, fmt)
        result.rows["paths"] = len(paths)
        summary = summary_frame(paths)
        result.artifacts["summary"] = _write_frame(summary, out_dir / "summary", SUMMARY_SCHEMA, fmt)
        result.rows["summary"] = len(summary)
    if report is not None:
        report_path = out_dir / "report.json"
        report_path.write_text(report.to_json() + "\n")
        result.artifacts["report"] = report_path

    logger.info(f"Run finished: {', '.join(str(p) for p in result.artifacts.values())}")
    return result
