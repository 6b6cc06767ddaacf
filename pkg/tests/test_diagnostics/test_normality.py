import numpy as np
import pytest

from idpath.diagnostics import mardia_skewness, normality_test
from idpath.errors import Assumption3AError, DomainError
from idpath.kernels import Interval, OUKernel
from idpath.levy import GammaRep, StableRep
from idpath.simulation import GridSpec, PathBatch, PathMeta, generate_batch, sample_q_band

UNIT = Interval(0.0, 1.0)
TIMES = [0.25, 0.5, 1.0]


def _q_batch(rep, m, M, n, seed):
    kernel = OUKernel(lam=1.0)
    grid = GridSpec(J=4)
    job = lambda r: sample_q_band(rep, kernel, m, M, UNIT, grid, r, centering="full")  # noqa: E731
    return generate_batch(job, n_paths=n, seed=seed, n_jobs=1), kernel


def test_mardia_accepts_gaussian_sample(rng):
    x = rng.multivariate_normal([0.0, 0.0], [[1.0, 0.6], [0.6, 2.0]], size=5000)
    b1, p = mardia_skewness(x)
    assert b1 < 0.02
    assert p > 0.01


def test_mardia_rejects_skewed_sample(rng):
    x = rng.exponential(size=(2000, 2))
    _, p = mardia_skewness(x)
    assert p < 1e-6


def _gaussian_batch(rng, n):
    meta = PathMeta(seed=None, path_id=None, m=1.0, window=[0.0, 1.0], rep_id="x", kernel_id="y")
    values = rng.normal(size=(n, 3, 1))
    return PathBatch(grid=np.array([0.0, 0.5, 1.0]), values=values, metas=[meta] * n)


def test_singular_sigma_raises(rng):
    batch = _gaussian_batch(rng, 1000)
    with pytest.raises(Assumption3AError):
        normality_test(batch, np.zeros((1, 1)), [1.0], OUKernel(lam=1.0), UNIT)


def test_needs_enough_paths_and_times(rng):
    with pytest.raises(DomainError):
        normality_test(_gaussian_batch(rng, 999), np.eye(1), [1.0], OUKernel(lam=1.0), UNIT)
    with pytest.raises(DomainError):
        normality_test(_gaussian_batch(rng, 1000), np.eye(1), [], OUKernel(lam=1.0), UNIT)


@pytest.mark.statistical
def test_stable_band_is_asymptotically_gaussian():
    """The σ-scaled stable band over (10³, 10⁴] passes KS and Mardia at three times."""
    rep = StableRep(alpha=1.5, atoms=[([1.0], 1.0), ([-1.0], 1.0)])
    batch, kernel = _q_batch(rep, 1e3, 1e4, n=10_000, seed=41)
    result = normality_test(batch, rep.band_covariance(1e3, 1e4), TIMES, kernel, UNIT)
    assert all(p > 0.01 for p in result.ks_p.values())
    assert result.mardia_p > 0.01
    for ratio in result.variance_ratio.values():
        assert ratio == pytest.approx(1.0, abs=0.05)


@pytest.mark.statistical
def test_gamma_band_is_not_gaussian():
    """Gamma jumps beyond index 10³ underflow, so the rejection runs on the (5, 50] band."""
    rep = GammaRep(a=1.0, beta=1.0)
    batch, kernel = _q_batch(rep, 5.0, 50.0, n=2000, seed=42)
    result = normality_test(batch, rep.band_covariance(5.0, 50.0), [1.0], kernel, UNIT)
    assert result.ks_p[1.0] < 0.01
