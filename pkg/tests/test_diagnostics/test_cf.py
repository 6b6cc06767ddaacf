import logging

import numpy as np
import pytest

from idpath.diagnostics import cf_distance, cf_distance_check, empirical_cf, theoretical_cf, theoretical_cf_estimate
from idpath.errors import DomainError, GridError, KernelUnboundedError
from idpath.kernels import IndicatorKernel, Interval, LogFracKernel, OUKernel
from idpath.levy import GammaRep, StableRep
from idpath.simulation import GridSpec, PathBatch, PathMeta, TruncationParams, generate_batch, generate_path

UNIT = Interval(0.0, 1.0)


def _zero_batch(n: int, J: int = 4) -> PathBatch:
    meta = PathMeta(seed=None, path_id=None, m=1.0, window=[0.0, 1.0], rep_id="x", kernel_id="y")
    return PathBatch(grid=np.linspace(0.0, 1.0, J + 1), values=np.zeros((n, J + 1, 1)), metas=[meta] * n)


def test_cf_at_zero_is_one(gamma_rep):
    est = theoretical_cf_estimate(gamma_rep, IndicatorKernel(), 10.0, UNIT, 1.0, [0.0])
    assert est.value == 1.0 + 0j
    assert est.converged


def test_exp_cp_matches_compound_poisson_cf(exp_cp):
    """m ≥ 1 covers the whole Lévy measure: φ(y) = exp(t(1/(1−iy) − 1))."""
    for y in [0.5, 1.0, 3.0]:
        value = theoretical_cf(exp_cp, IndicatorKernel(), 2.0, UNIT, 1.0, [y])
        assert value == pytest.approx(np.exp(1.0 / (1.0 - 1j * y) - 1.0), abs=1e-5)


def test_gamma_matches_closed_form():
    rep = GammaRep(a=2.0, beta=3.0)
    for y in [0.5, 1.5, 3.0]:
        value = theoretical_cf(rep, IndicatorKernel(), 50.0, UNIT, 1.0, [y])
        assert abs(value - (1.0 - 1j * y / 3.0) ** -2.0) < 1e-3


def test_conjugate_symmetry_and_modulus(gamma_rep, symmetric_stable):
    for rep, kernel in [(gamma_rep, IndicatorKernel()), (symmetric_stable, OUKernel(lam=1.0))]:
        for y in [0.3, 2.0]:
            plus = theoretical_cf(rep, kernel, 20.0, UNIT, 1.0, [y])
            minus = theoretical_cf(rep, kernel, 20.0, UNIT, 1.0, [-y])
            assert abs(minus - np.conj(plus)) < 1e-12
            assert abs(plus) <= 1.0 + 1e-12


@pytest.mark.parametrize("alpha", [0.8, 1.2, 1.7])
def test_stable_log_modulus_scales_with_alpha(alpha):
    """
    −log|φ(y)| ∝ |y|^α once the discarded small jumps are added back.

    Beyond m the jumps are below x_m = (m/‖λ‖)^{-1/α}, so they contribute
    ½σ_m²y² up to an O(y⁴x_m^{4−α}) remainder that is negligible at m = 10³.
    """
    rep = StableRep(alpha=alpha, atoms=[([1.0], 1.0), ([-1.0], 1.0)])
    m = 1e3
    sigma2 = rep.residual_covariance(m)[0, 0]
    ys = np.geomspace(0.2, 2.0, 6)
    logs = [
        -np.log(abs(theoretical_cf(rep, IndicatorKernel(), m, UNIT, 1.0, [y]))) + 0.5 * sigma2 * y**2
        for y in ys
    ]
    slope = np.polyfit(np.log(ys), np.log(logs), 1)[0]
    assert slope == pytest.approx(alpha, abs=0.02)


def test_offset_enters_as_phase(symmetric_stable):
    plain = theoretical_cf(symmetric_stable, OUKernel(lam=1.0), 20.0, UNIT, 1.0, [0.7])
    shifted = theoretical_cf(symmetric_stable, OUKernel(lam=1.0, mu=2.0), 20.0, UNIT, 1.0, [0.7])
    offset = 2.0 * (1.0 - np.exp(-1.0))
    assert shifted == pytest.approx(plain * np.exp(0.7j * offset), abs=1e-12)


def test_cf_refuses_unbounded_kernel(symmetric_stable):
    with pytest.raises(KernelUnboundedError):
        theoretical_cf(symmetric_stable, LogFracKernel(), 10.0, UNIT, 0.5, [1.0])


def test_cf_rejects_bad_arguments(gamma_rep):
    with pytest.raises(DomainError):
        theoretical_cf(gamma_rep, IndicatorKernel(), 10.0, UNIT, 1.0, [1.0, 2.0])
    with pytest.raises(DomainError):
        theoretical_cf(gamma_rep, IndicatorKernel(), 10.0, UNIT, 1.0, [1e7])


def test_empirical_cf_of_zero_paths():
    batch = _zero_batch(1000)
    values = empirical_cf(batch, 0.5, [[0.0], [1.0], [-4.0]])
    assert np.allclose(values, 1.0)


def test_empirical_cf_needs_enough_paths():
    with pytest.raises(DomainError):
        empirical_cf(_zero_batch(999), 1.0, [[1.0]])


def test_empirical_cf_off_grid():
    with pytest.raises(GridError):
        empirical_cf(_zero_batch(1000), 0.3, [[1.0]])


def test_distance_check_pass_and_fail(gamma_rep):
    batch = _zero_batch(1000)
    assert cf_distance_check(batch, gamma_rep, IndicatorKernel(), 10.0, UNIT, 1.0, [[0.0]]).status == "pass"
    check = cf_distance_check(batch, gamma_rep, IndicatorKernel(), 10.0, UNIT, 1.0, [[0.0], [1.0]])
    assert check.converged
    assert check.distance > check.tolerance
    assert check.status == "fail"


def test_unconverged_quadrature_is_flagged(gamma_rep, mocker, caplog):
    quad = mocker.patch("idpath.diagnostics.cf.integrate").quad
    quad.return_value = (0.1, 1.0)
    with caplog.at_level(logging.WARNING):
        est = theoretical_cf_estimate(gamma_rep, IndicatorKernel(), 10.0, UNIT, 1.0, [1.0])
    assert est.converged is False
    assert est.abserr == pytest.approx(2.0)
    assert "did not reach tolerance" in caplog.text


def test_unconverged_oracle_makes_distance_inconclusive(gamma_rep, mocker):
    mocker.patch("idpath.diagnostics.cf.integrate").quad.return_value = (0.0, 1.0)
    check = cf_distance_check(_zero_batch(1000), gamma_rep, IndicatorKernel(), 10.0, UNIT, 1.0, [[0.5], [1.0]])
    assert check.converged is False
    assert check.status == "inconclusive"


@pytest.mark.statistical
def test_gamma_paths_match_theoretical_cf():
    rep = GammaRep(a=2.0, beta=3.0)
    kernel = IndicatorKernel()
    trunc = TruncationParams(50.0, UNIT)
    grid = GridSpec(J=4)
    n = 4000
    batch = generate_batch(lambda r: generate_path(rep, kernel, trunc, grid, r), n_paths=n, seed=31, n_jobs=1)
    y_grid = [[0.5], [1.0], [2.0], [4.0]]
    assert cf_distance(batch, rep, kernel, 50.0, UNIT, 1.0, y_grid) < 4.0 / np.sqrt(n) + 1e-3


@pytest.mark.statistical
def test_stable_ou_paths_match_theoretical_cf(symmetric_stable):
    kernel = OUKernel(lam=1.0)
    trunc = TruncationParams(200.0, UNIT)
    grid = GridSpec(J=4)
    n = 4000
    batch = generate_batch(
        lambda r: generate_path(symmetric_stable, kernel, trunc, grid, r), n_paths=n, seed=32, n_jobs=1
    )
    y_grid = [[y] for y in np.linspace(-2.0, 2.0, 9)]
    for t in [0.5, 1.0]:
        assert cf_distance(batch, symmetric_stable, kernel, 200.0, UNIT, t, y_grid) < 4.0 / np.sqrt(n) + 1e-3


@pytest.mark.statistical
@pytest.mark.parametrize("alpha, seed", [(0.8, 33), (1.2, 34), (1.7, 35)])
def test_stable_paths_match_theoretical_cf(alpha, seed):
    rep = StableRep(alpha=alpha, atoms=[([1.0], 1.0), ([-1.0], 1.0)])
    kernel = IndicatorKernel()
    m, n = 1e3, 10_000
    trunc = TruncationParams(m, UNIT)
    grid = GridSpec(J=4)
    batch = generate_batch(lambda r: generate_path(rep, kernel, trunc, grid, r), n_paths=n, seed=seed, n_jobs=1)
    y_grid = [[y] for y in np.linspace(-2.0, 2.0, 21)]
    check = cf_distance_check(batch, rep, kernel, m, UNIT, 1.0, y_grid)
    assert check.converged
    assert check.distance <= 4.0 / np.sqrt(n) + 1e-3
    assert check.status == "pass"
