import numpy as np
import pytest

from idpath.diagnostics import SCHEMA_VERSION, DiagnosticsReport, check_assumptions
from idpath.errors import DomainError
from idpath.kernels import FracKHAKernel, IndicatorKernel, LogFracKernel, OUKernel
from idpath.levy import StableRep

KAPPAS = [0.1, 0.5, 1.0]


def test_gamma_fails_lindeberg_check(gamma_rep):
    """Scaled gamma small jumps keep a fixed shape, so 3(b) fails."""
    report = check_assumptions(gamma_rep, IndicatorKernel(), [1.0, 2.0, 5.0, 10.0], KAPPAS)
    assert report.assumption_3b.status == "fail"
    assert report.assumption_3a.status == "pass"
    assert report.assumption_2a.status == "pass"
    assert report.assumption_2c.status == "pass"
    # the estimate stabilizes instead of vanishing
    at = {(c["m"], c["kappa"]): c["estimate"] for c in report.assumption_3b.curve}
    assert at[(10.0, 0.5)] == pytest.approx(at[(5.0, 0.5)], rel=0.2)
    assert at[(10.0, 0.5)] > 0.1


def test_stable_passes_gaussian_checks(symmetric_stable):
    report = check_assumptions(symmetric_stable, OUKernel(lam=1.0), [10.0, 100.0, 1000.0], KAPPAS)
    assert report.assumption_3a.status == "pass"
    assert report.assumption_3b.status == "pass"
    assert report.assumption_3a.method == "analytic"


def test_two_dimensional_stable_passes():
    rep = StableRep(
        alpha=1.5,
        atoms=[([1.0, 0.0], 1.0), ([0.0, 1.0], 2.0), ([-1.0, 0.0], 1.0), ([0.0, -1.0], 2.0)],
    )
    report = check_assumptions(rep, IndicatorKernel(), [10.0, 100.0, 10_000.0], KAPPAS)
    assert report.assumption_3a.status == "pass"
    assert report.assumption_3b.status == "pass"


def test_degenerate_stable_fails_positive_definiteness():
    rep = StableRep(alpha=1.5, atoms=[([1.0, 0.0], 1.0), ([-1.0, 0.0], 1.0)])
    report = check_assumptions(rep, IndicatorKernel(), [10.0, 100.0], KAPPAS)
    assert report.assumption_3a.status == "fail"
    assert report.assumption_3b.status == "inconclusive"


def test_log_fractional_kernel_fails_boundedness(symmetric_stable):
    report = check_assumptions(symmetric_stable, LogFracKernel(), [10.0, 100.0], KAPPAS)
    assert report.assumption_2a.status == "fail"
    assert report.assumption_2b.status == "pass"


def test_frac_kha_regions(symmetric_stable):
    """H above 1/α keeps the kernel bounded; H below 1/α does not."""
    alpha = 1.2
    good = check_assumptions(symmetric_stable, FracKHAKernel(H=1 / alpha + 0.2, alpha=alpha), [10.0, 100.0], KAPPAS)
    assert good.assumption_2a.status == "pass"
    assert good.assumption_2b.status == "pass"
    bad = check_assumptions(symmetric_stable, FracKHAKernel(H=1 / alpha - 0.2, alpha=alpha), [10.0, 100.0], KAPPAS)
    assert bad.assumption_2a.status == "fail"


def test_tail_statistic_is_monotone(symmetric_stable):
    report = check_assumptions(symmetric_stable, IndicatorKernel(), [1.0, 10.0, 100.0, 1000.0], KAPPAS)
    stats = [c["statistic"] for c in report.assumption_2c.curve]
    assert all(b <= a for a, b in zip(stats, stats[1:]))


def test_exp_cp_has_no_small_jumps(exp_cp):
    report = check_assumptions(exp_cp, IndicatorKernel(), [0.5, 1.0, 2.0], KAPPAS)
    assert report.assumption_3a.status == "fail"


def test_check_is_deterministic(gamma_rep):
    a = check_assumptions(gamma_rep, IndicatorKernel(), [1.0, 3.0], KAPPAS, seed=4)
    b = check_assumptions(gamma_rep, IndicatorKernel(), [1.0, 3.0], KAPPAS, seed=4)
    assert a == b


def test_report_json_round_trip(gamma_rep):
    report = check_assumptions(gamma_rep, IndicatorKernel(), [1.0, 3.0], KAPPAS)
    text = report.to_json()
    assert f'"schema_version": "{SCHEMA_VERSION}"' in text
    assert DiagnosticsReport.from_json(text) == report


@pytest.mark.parametrize("m_grid", [[], [2.0, 1.0], [0.0, 1.0]])
def test_rejects_bad_m_grid(gamma_rep, m_grid):
    with pytest.raises(DomainError):
        check_assumptions(gamma_rep, IndicatorKernel(), m_grid, KAPPAS)


def test_rejects_nonpositive_kappa(gamma_rep):
    with pytest.raises(DomainError):
        check_assumptions(gamma_rep, IndicatorKernel(), [1.0], [0.0])


def test_regularity_slopes_reported():
    rep = StableRep(alpha=1.5, atoms=[([1.0], 1.0), ([-1.0], 1.0)])
    report = check_assumptions(rep, OUKernel(lam=2.0), [10.0], KAPPAS)
    assert report.regularity_c1 == [1.0]
    assert np.isfinite(report.assumption_2c.value)
