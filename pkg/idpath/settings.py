from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import Field, PositiveFloat, PositiveInt
from pathlib import Path
import logging

logger = logging.getLogger(__name__)

# Get the project root directory
PROJECT_ROOT = Path(__file__).parent.parent


class Settings(BaseSettings):
    # Automatically load from .env file and IDPATH_* environment variables
    model_config = SettingsConfigDict(
        env_file=".env", env_prefix="IDPATH_", extra="ignore", case_sensitive=False
    )

    # --- Runtime ---
    # IDPATH_THREADS caps the worker pool used for batch generation
    threads: PositiveInt = 1
    log_level: str = "INFO"
    output_dir: Path = PROJECT_ROOT / "runs"

    # --- Quadrature ---
    quadrature_tol: PositiveFloat = 1e-8
    center_nodes: PositiveInt = 20
    center_marks: PositiveInt = 100_000

    # --- Characteristic function oracle ---
    cf_r_nodes: PositiveInt = 1000
    cf_marks: PositiveInt = 2**14
    cf_outer_rtol: PositiveFloat = 1e-6

    # --- Simulation guards ---
    expected_jump_guard: PositiveFloat = 5e7
    band_factor: PositiveFloat = 10.0
    refine_resolution: PositiveInt = 2**14

    # --- Numerical tolerances ---
    pd_tol: PositiveFloat = 1e-12
    # Entries kept per kernel or representation for integrals and compensators
    cache_size: PositiveInt = 4096
    # Eigenvalues of a companion matrix resolve a double root only to ~sqrt(eps)
    carma_root_gap: PositiveFloat = Field(default=1e-6)


# Create a single instance to be imported by other modules
settings = Settings()

logger.debug("Settings loaded:")
logger.debug(f"  THREADS: {settings.threads}")
logger.debug(f"  QUADRATURE_TOL: {settings.quadrature_tol}")
logger.debug(f"  CF_MARKS: {settings.cf_marks}, CF_R_NODES: {settings.cf_r_nodes}")
logger.debug(f"  OUTPUT_DIR: {settings.output_dir}")
