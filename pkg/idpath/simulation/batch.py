from typing import Callable, Optional
import logging

import numpy as np
from joblib import Parallel, delayed

from idpath import streams
from idpath.settings import settings
from idpath.simulation.params import PathBatch, SamplePath

logger = logging.getLogger(__name__)

PathJob = Callable[[np.random.Generator], SamplePath]


def _run_one(job: PathJob, seed: int, path_id: int, component: int) -> SamplePath:
    rng = streams.path_stream(seed, path_id, component)
    return job(rng).with_ids(seed, path_id)


def generate_batch(
    job: PathJob,
    n_paths: int,
    seed: int,
    component: int = streams.PRINCIPAL,
    n_jobs: Optional[int] = None,
    first_id: int = 0,
) -> PathBatch:
    """
    Run `job` once per path on its own counter-based stream.

    Args:
        job: Callable taking a Generator and returning a SamplePath, e.g.
            ``lambda rng: generate_path(rep, kernel, trunc, grid, rng)``.
        n_paths: Number of paths.
        seed: Master seed.
        component: Stream tag from idpath.streams.
        n_jobs: Worker threads; defaults to settings.threads.
        first_id: Path id of the first path.

    Returns:
        A PathBatch ordered by path id whatever the completion order.
    """
    if n_paths < 1:
        raise ValueError(f"n_paths must be >= 1, got {n_paths}")
    n_jobs = settings.threads if n_jobs is None else n_jobs
    ids = range(first_id, first_id + n_paths)
    logger.info(f"Generating {n_paths} paths (seed={seed}, component={component}, threads={n_jobs})")
    if n_jobs == 1:
        paths = [_run_one(job, seed, i, component) for i in ids]
    else:
        paths = Parallel(n_jobs=n_jobs, prefer="threads")(
            delayed(_run_one)(job, seed, i, component) for i in ids
        )
    return PathBatch.from_paths(paths)
