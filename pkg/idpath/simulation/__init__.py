from .params import GridSpec, PathBatch, PathMeta, SamplePath, TruncationParams
from .series import (
    band_covariance,
    direct_compound_poisson,
    generate_path,
    path_sup,
    sample_q_band,
    sample_r_band,
)
from .gaussian import covariance_factor, gaussian_refinement, refined_path
from .batch import generate_batch

__all__ = [
    "GridSpec",
    "PathBatch",
    "PathMeta",
    "SamplePath",
    "TruncationParams",
    "band_covariance",
    "covariance_factor",
    "direct_compound_poisson",
    "gaussian_refinement",
    "generate_batch",
    "generate_path",
    "path_sup",
    "refined_path",
    "sample_q_band",
    "sample_r_band",
]
