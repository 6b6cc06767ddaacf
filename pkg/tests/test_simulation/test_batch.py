import numpy as np
import pytest

from idpath.errors import DomainError, GridError
from idpath.kernels import IndicatorKernel, Interval
from idpath.simulation import GridSpec, PathBatch, TruncationParams, generate_batch, generate_path


def _job(rep):
    trunc = TruncationParams(10.0, Interval(0.0, 1.0))
    grid = GridSpec(J=4)
    return lambda r: generate_path(rep, IndicatorKernel(), trunc, grid, r)


def test_batch_ordered_by_path_id(gamma_rep):
    batch = generate_batch(_job(gamma_rep), n_paths=6, seed=4, first_id=10)
    assert [m.path_id for m in batch.metas] == list(range(10, 16))
    assert all(m.seed == 4 for m in batch.metas)
    assert batch.values.shape == (6, 5, 1)


def test_thread_pool_matches_serial(gamma_rep):
    """Path values depend only on (seed, path id), not on scheduling."""
    serial = generate_batch(_job(gamma_rep), n_paths=8, seed=12, n_jobs=1)
    pooled = generate_batch(_job(gamma_rep), n_paths=8, seed=12, n_jobs=3)
    assert np.array_equal(serial.values, pooled.values)


def test_threads_setting_is_default(gamma_rep, monkeypatch):
    from idpath.settings import settings

    monkeypatch.setattr(settings, "threads", 2)
    batch = generate_batch(_job(gamma_rep), n_paths=3, seed=1)
    assert batch.n_paths == 3


def test_rejects_empty_batch(gamma_rep):
    with pytest.raises(ValueError):
        generate_batch(_job(gamma_rep), n_paths=0, seed=1)


def test_batch_at_off_grid(gamma_rep):
    batch = generate_batch(_job(gamma_rep), n_paths=2, seed=1)
    with pytest.raises(GridError):
        batch.at(0.3)


def test_grid_spec_explicit_times():
    grid = GridSpec.from_times([0.0, 0.1, 0.5, 1.0])
    assert grid.J == 3
    assert grid.index_of(0.5) == 2
    with pytest.raises(GridError):
        grid.index_of(0.2)
    with pytest.raises(DomainError):
        GridSpec.from_times([0.0, 0.5, 0.4])


def test_batches_must_share_grid(gamma_rep):
    a = generate_batch(_job(gamma_rep), n_paths=2, seed=1)
    b = PathBatch(grid=np.linspace(0.0, 1.0, 3), values=np.zeros((2, 3, 1)), metas=a.metas)
    with pytest.raises(DomainError):
        a + b


@pytest.mark.statistical
def test_independent_seeds_and_path_ids_are_uncorrelated(gamma_rep):
    """Different seeds, or disjoint path ids under one seed, give uncorrelated paths."""
    n = 4000
    trunc = TruncationParams(10.0, Interval(0.0, 1.0))
    grid = GridSpec(J=2)
    job = lambda r: generate_path(gamma_rep, IndicatorKernel(), trunc, grid, r)  # noqa: E731
    base = generate_batch(job, n_paths=n, seed=101, n_jobs=1)
    other_seed = generate_batch(job, n_paths=n, seed=202, n_jobs=1)
    other_ids = generate_batch(job, n_paths=n, seed=101, n_jobs=1, first_id=n)
    for other in (other_seed, other_ids):
        for t in (0.5, 1.0):
            corr = np.corrcoef(base.at(t)[:, 0], other.at(t)[:, 0])[0, 1]
            assert abs(corr) < 3.0 / np.sqrt(n)
