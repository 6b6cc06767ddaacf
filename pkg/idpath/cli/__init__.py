"""Config-driven batch runner and the `idpath` command line."""

from .config import ExperimentConfig, emit_config, parse_config, validate_config
from .runner import RunResult, run

__all__ = ["ExperimentConfig", "emit_config", "parse_config", "validate_config", "RunResult", "run"]
