"""Gaussian replacement of the discarded small jumps."""

from dataclasses import replace
from typing import Optional
import logging
import warnings

import numpy as np

from idpath.errors import Assumption3AError, DomainError, GaussianInvalidWarning
from idpath.kernels.base import Interval, Kernel
from idpath.levy.representation import LevyRepresentation
from idpath.settings import settings
from idpath.simulation.params import GridSpec, PathMeta, SamplePath, TruncationParams
from idpath.simulation.series import ensure_simulatable, generate_path

logger = logging.getLogger(__name__)


def covariance_factor(sigma: np.ndarray) -> np.ndarray:
    """
    Lower Cholesky factor of a covariance matrix.

    Raises:
        Assumption3AError when the matrix is not symmetric positive definite
        (smallest eigenvalue at or below pd_tol times the largest).
    """
    sigma = np.atleast_2d(np.asarray(sigma, dtype=float))
    if sigma.shape[0] != sigma.shape[1]:
        raise DomainError(f"covariance must be square, got shape {sigma.shape}")
    if not np.allclose(sigma, sigma.T, rtol=1e-10, atol=1e-14):
        raise Assumption3AError("covariance matrix is not symmetric")
    eig = np.linalg.eigvalsh(sigma)
    if eig[0] <= settings.pd_tol * max(abs(eig[-1]), 1e-300):
        raise Assumption3AError(
            f"covariance is not positive definite (eigenvalues {eig.tolist()})"
        )
    return np.linalg.cholesky(sigma)


def gaussian_refinement(
    kernel: Kernel,
    sigma_m: np.ndarray,
    window: Interval,
    grid: GridSpec,
    resolution: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
    rep: Optional[LevyRepresentation] = None,
) -> SamplePath:
    """
    σ_m·G with G_t = Σ_j f(t, s_j) √Δ Z_j over `resolution` uniform cells of the window.

    The s_j are the cell midpoints and the Z_j are iid standard normal
    d-vectors, so Cov(G_{t1}, G_{t2}) tends to ∫ f(t1,s) f(t2,s) ds.

    Args:
        kernel: Kernel f(t, s).
        sigma_m: d × d covariance of the discarded small jumps.
        window: Finite integration window.
        grid: Evaluation grid.
        resolution: Number of cells; defaults to settings.refine_resolution.
        rng: Random stream.
        rep: Representation that produced sigma_m; refinement of one that fails
            the small-jump Gaussian limit is allowed but warned about.

    Raises:
        Assumption3AError if sigma_m is nonzero and not positive definite.
    """
    ensure_simulatable(kernel)
    resolution = settings.refine_resolution if resolution is None else int(resolution)
    if resolution < 1:
        raise DomainError(f"resolution must be a positive integer, got {resolution}")
    if not window.is_finite or window.length <= 0:
        raise DomainError(f"refinement window must be finite with positive length, got {window.to_list()}")
    rng = rng if rng is not None else np.random.default_rng()

    sigma = np.atleast_2d(np.asarray(sigma_m, dtype=float))
    times = grid.times
    meta = PathMeta(
        seed=None,
        path_id=None,
        m=float("nan"),
        window=window.to_list(),
        rep_id=rep.rep_id if rep is not None else "gaussian",
        kernel_id=kernel.kernel_id,
        refined=True,
        component="refinement",
        extra={"resolution": resolution},
    )
    if not np.any(sigma):
        return SamplePath(grid=times, values=np.zeros((times.size, sigma.shape[0])), meta=meta)

    if rep is not None and rep.gaussian_limit_valid is False:
        msg = (
            f"{rep.rep_id} violates the small-jump Gaussian limit; "
            "the refinement does not approximate the discarded jumps"
        )
        logger.warning(msg)
        warnings.warn(msg, GaussianInvalidWarning, stacklevel=2)

    factor = covariance_factor(sigma)
    d = factor.shape[0]
    delta = window.length / resolution
    mids = window.lo + (np.arange(resolution) + 0.5) * delta
    z = rng.standard_normal((resolution, d))
    weights = kernel.values(times[:, None], mids[None, :]) * np.sqrt(delta)
    values = (weights @ z) @ factor.T
    return SamplePath(grid=times, values=values, meta=meta)


def refined_path(
    rep: LevyRepresentation,
    kernel: Kernel,
    trunc: TruncationParams,
    grid: GridSpec,
    rng: np.random.Generator,
    resolution: Optional[int] = None,
) -> SamplePath:
    """
    Principal path plus an independent Gaussian refinement scaled by σ_m².

    Both parts draw from `rng`, principal first.
    """
    principal = generate_path(rep, kernel, trunc, grid, rng)
    sigma = rep.residual_covariance(trunc.m)
    refinement = gaussian_refinement(kernel, sigma, trunc.window, grid, resolution, rng, rep)
    meta = replace(principal.meta, refined=True, extra={**principal.meta.extra, **refinement.meta.extra})
    logger.debug(f"refined path for {rep.rep_id} with trace(σ_m²)={np.trace(np.atleast_2d(sigma)):.3g}")
    return SamplePath(grid=principal.grid, values=principal.values + refinement.values, meta=meta)
