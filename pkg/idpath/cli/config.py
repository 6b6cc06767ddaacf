"""Experiment configs: pydantic models loaded from YAML or JSON files."""

from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union
import logging

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from idpath.errors import ConfigError
from idpath.kernels import get_kernel
from idpath.levy import get_representation
from idpath.settings import settings

logger = logging.getLogger(__name__)

Mode = Literal["simulate", "diagnose", "validate", "qband", "rband", "refine"]
# Modes that write a DiagnosticsReport.
REPORT_MODES = ("diagnose", "validate", "qband", "rband")
# Empirical CF and Hill need this many paths.
MIN_VALIDATE_PATHS = 1000


def _finite_pair(value: List[float], name: str) -> List[float]:
    if len(value) != 2:
        raise ValueError(f"{name} must be [lo, hi], got {value}")
    lo, hi = float(value[0]), float(value[1])
    if not (np.isfinite(lo) and np.isfinite(hi)):
        raise ValueError(f"{name} must be finite, got {value}")
    if hi <= lo:
        raise ValueError(f"{name} needs lo < hi, got {value}")
    return [lo, hi]


class TruncConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    m: float = Field(ge=0.0)
    window: List[float]

    @field_validator("window")
    @classmethod
    def _window_finite(cls, v: List[float]) -> List[float]:
        return _finite_pair(v, "trunc.window")


class GridConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    J: int = Field(ge=1)
    T: float = Field(default=1.0, gt=0.0)


class BandConfig(BaseModel):
    """Q band upper level M, its centering, and the outer window of the R band."""

    model_config = ConfigDict(extra="forbid")

    M: Optional[float] = Field(default=None, ge=0.0)
    centering: Literal["truncated", "full", "none"] = "truncated"
    outer: Optional[List[float]] = None

    @field_validator("outer")
    @classmethod
    def _outer_finite(cls, v: Optional[List[float]]) -> Optional[List[float]]:
        return None if v is None else _finite_pair(v, "band.outer")


class RefineConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    resolution: int = Field(default_factory=lambda: settings.refine_resolution, ge=1)


class DiagnosticsConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    m_grid: Optional[List[float]] = None
    kappa_grid: List[float] = Field(default_factory=lambda: [0.1, 0.5, 1.0])
    n_samples: int = Field(default=20_000, ge=100)
    # CF evaluation points for validate, per coordinate axis
    y_grid: List[float] = Field(default_factory=lambda: np.linspace(-2.0, 2.0, 21).tolist())
    top_fraction: float = Field(default=0.05, gt=0.01, lt=0.2)


class OutputConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dir: Optional[str] = None
    format: Literal["csv", "json"] = "csv"


class ExperimentConfig(BaseModel):
    """One batch run: what to simulate, on which grid, with which seed, and where to write it."""

    model_config = ConfigDict(extra="forbid")

    rep: Dict[str, Any]
    kernel: Dict[str, Any]
    trunc: TruncConfig
    grid: GridConfig
    n_paths: int = Field(default=100, ge=1)
    seed: int = Field(default=0, ge=0)
    mode: Mode = "simulate"
    band: BandConfig = Field(default_factory=BandConfig)
    refine: RefineConfig = Field(default_factory=RefineConfig)
    diagnostics: DiagnosticsConfig = Field(default_factory=DiagnosticsConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)

    @model_validator(mode="after")
    def _fill_defaults(self) -> "ExperimentConfig":
        if self.band.M is None:
            self.band.M = settings.band_factor * self.trunc.m
        if self.diagnostics.m_grid is None and self.trunc.m > 0:
            self.diagnostics.m_grid = [self.trunc.m * 2.0**-k for k in (3, 2, 1, 0)]
        return self

    def violations(self) -> List[str]:
        """Cross-field checks that pydantic field validation cannot express."""
        found = []
        if self.band.M < self.trunc.m:
            found.append(f"band.M must be >= trunc.m, got M={self.band.M}, m={self.trunc.m}")
        if self.mode == "rband":
            if self.band.outer is None:
                found.append("mode rband needs band.outer = [lo, hi]")
            else:
                lo, hi = self.band.outer
                if not (lo <= self.trunc.window[0] and self.trunc.window[1] <= hi):
                    found.append(f"band.outer {self.band.outer} must contain trunc.window {self.trunc.window}")
        if self.mode == "validate" and self.n_paths < MIN_VALIDATE_PATHS:
            found.append(f"mode validate needs n_paths >= {MIN_VALIDATE_PATHS}, got {self.n_paths}")
        if self.mode in REPORT_MODES:
            m_grid = self.diagnostics.m_grid
            if not m_grid:
                found.append("diagnostics.m_grid is required when trunc.m = 0")
            elif any(m <= 0 for m in m_grid) or any(b <= a for a, b in zip(m_grid, m_grid[1:])):
                found.append(f"diagnostics.m_grid must be positive and increasing, got {m_grid}")
            if any(k <= 0 for k in self.diagnostics.kappa_grid):
                found.append(f"diagnostics.kappa_grid must be positive, got {self.diagnostics.kappa_grid}")
        return found


# --- YAML loading ---


class DuplicateKeyLoader(yaml.SafeLoader):
    """SafeLoader that logs repeated mapping keys; the last value wins as in plain YAML loading."""

    def construct_mapping(self, node, deep=False):
        seen = set()
        for key_node, _ in node.value:
            key = self.construct_object(key_node, deep=deep)
            try:
                duplicate = key in seen
                seen.add(key)
            except TypeError:
                continue
            if duplicate:
                logger.warning(
                    f"Duplicate config key '{key}' at line {key_node.start_mark.line + 1}; the last value wins"
                )
        return super().construct_mapping(node, deep=deep)


def load_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    """Read a YAML or JSON config file into a plain mapping."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigError([f"cannot read config file {path}: {e}"]) from e
    try:
        raw = yaml.load(text, Loader=DuplicateKeyLoader)
    except yaml.YAMLError as e:
        raise ConfigError([f"config file {path} is not valid YAML/JSON: {e}"]) from e
    if not isinstance(raw, dict):
        raise ConfigError([f"config file {path} must hold a mapping at the top level"])
    return raw


def _format_error(err: Dict[str, Any]) -> str:
    loc = ".".join(str(p) for p in err.get("loc", ())) or "config"
    return f"{loc}: {err.get('msg')}"


def _check_factory(build, spec: Any, label: str) -> Optional[str]:
    if not isinstance(spec, dict):
        return f"{label} must be a mapping with a 'type' field"
    try:
        build(spec)
    except (ValueError, TypeError, KeyError) as e:
        return f"{label}: {e}"
    return None


def validate_config(raw: Dict[str, Any]) -> ExperimentConfig:
    """
    Validate a raw mapping into an ExperimentConfig.

    Field errors, unknown rep/kernel types and parameter-region violations are
    collected together, so one ConfigError lists every problem.

    Raises:
        ConfigError holding all violations.
    """
    violations: List[str] = []
    config: Optional[ExperimentConfig] = None
    try:
        config = ExperimentConfig.model_validate(raw)
    except ValidationError as e:
        violations.extend(_format_error(err) for err in e.errors())

    horizon = config.grid.T if config is not None else 1.0
    for label, build, key in (
        ("rep", get_representation, "rep"),
        ("kernel", lambda spec: get_kernel(spec, horizon=horizon), "kernel"),
    ):
        if key in raw:
            problem = _check_factory(build, raw[key], label)
            if problem:
                violations.append(problem)

    if config is not None:
        violations.extend(config.violations())
    if violations:
        for v in violations:
            logger.error(f"Config violation: {v}")
        raise ConfigError(violations)
    return config


def parse_config(path: Union[str, Path]) -> ExperimentConfig:
    """
    Load and validate an experiment config file (YAML, or JSON as a subset of YAML).

    Args:
        path: Config file.

    Returns:
        The validated config with defaults filled (M = band_factor·m,
        resolution = settings.refine_resolution).

    Raises:
        ConfigError listing every violation found.
    """
    config = validate_config(load_config_file(path))
    logger.info(f"Loaded config {path}: mode={config.mode}, rep={config.rep.get('type')}, kernel={config.kernel.get('type')}")
    return config


def emit_config(config: ExperimentConfig) -> str:
    """YAML text that parse_config reads back to an equal config."""
    return yaml.safe_dump(config.model_dump(mode="json"), sort_keys=False)
