import numpy as np
import pytest

from idpath.errors import DomainError
from idpath.kernels import (
    REAL_LINE,
    CallableKernel,
    Interval,
    IndicatorKernel,
    Kernel,
    OUKernel,
    ReverseOUKernel,
)


def test_indicator_evaluate():
    k = IndicatorKernel()
    assert k.evaluate(1.0, 0.5) == 1.0
    assert k.evaluate(1.0, 1.5) == 0.0


def test_ou_evaluate():
    assert OUKernel(lam=1.0).evaluate(1.0, 0.0) == pytest.approx(np.exp(-1.0))


def test_reverse_ou_evaluate():
    k = ReverseOUKernel(lam=2.0)
    assert k.evaluate(1.0, 1.0) == 1.0
    assert k.evaluate(1.0, 0.5) == 0.0


def test_time_integrals_closed_form():
    assert IndicatorKernel().time_integral(0.7, Interval(0.0, 1.0)) == pytest.approx(0.7)
    assert OUKernel(lam=2.0).time_integral(1.0, Interval(0.0, 1.0)) == pytest.approx(
        (1 - np.exp(-2.0)) / 2
    )
    assert ReverseOUKernel(lam=1.0).time_integral(0.0, Interval(-5.0, 1.0)) == pytest.approx(
        1 - np.exp(-1.0)
    )


def test_closed_time_integrals_match_quadrature():
    """Closed forms agree with the generic adaptive quadrature."""
    cases = [
        (OUKernel(lam=2.0), 0.8, Interval(0.1, 0.6)),
        (ReverseOUKernel(lam=1.5, horizon=2.0), 1.2, Interval(-3.0, 4.0)),
        (IndicatorKernel(), 0.4, Interval(0.2, 0.9)),
    ]
    for kernel, t, window in cases:
        closed = kernel.time_integral(t, window)
        quad = Kernel._time_integral(kernel, t, window)
        assert closed == pytest.approx(quad, rel=1e-8)


def test_time_integral_rejects_window_outside_domain():
    with pytest.raises(ValueError):
        OUKernel(lam=1.0).time_integral(0.5, Interval(-1.0, 1.0))


def test_indicator_increment_is_time_step():
    k = IndicatorKernel()
    assert k.increment_l2(0.2, 0.65) == pytest.approx(0.45)


def test_ou_increment_bound(rng):
    """∫(f(t2,s) − f(t1,s))² ds ≤ (3/2)(t2 − t1)."""
    k = OUKernel(lam=3.0)
    for _ in range(50):
        t1, t2 = np.sort(rng.uniform(0.0, 1.0, size=2))
        assert k.increment_l2(t1, t2) <= 1.5 * (t2 - t1) + 1e-15


def test_ou_increment_closed_form_matches_quadrature():
    k = OUKernel(lam=1.7)
    for t1, t2 in [(0.1, 0.3), (0.0, 1.0), (0.55, 0.6)]:
        closed = k.increment_l2(t1, t2)
        quad = Kernel._increment_l2(k, t1, t2, Interval(0.0, 1.0))
        assert closed == pytest.approx(quad, rel=1e-6)


def test_reverse_ou_increment_identity():
    """(1 − e^{−λ(t2−t1)})/λ exactly, cross-checked by quadrature."""
    k = ReverseOUKernel(lam=1.3)
    for t1, t2 in [(0.0, 0.5), (0.2, 0.9), (0.7, 0.71)]:
        closed = k.increment_l2(t1, t2)
        assert closed == pytest.approx((1 - np.exp(-1.3 * (t2 - t1))) / 1.3, rel=1e-14)
        quad = Kernel._increment_l2(k, t1, t2, REAL_LINE)
        assert closed == pytest.approx(quad, rel=1e-6)


def test_ou_cross_integral_matches_quadrature():
    k = OUKernel(lam=0.8)
    window = Interval(0.0, 1.0)
    closed = k.cross_integral(0.3, 0.9, window)
    quad = Kernel.cross_integral(k, 0.3, 0.9, window)
    assert closed == pytest.approx(quad, rel=1e-8)


def test_ou_offset():
    k = OUKernel(lam=2.0, mu=1.5, x0=-1.0)
    t = np.array([0.0, 0.5, 1.0])
    expected = np.exp(-2 * t) * -1.0 + 1.5 * (1 - np.exp(-2 * t))
    np.testing.assert_allclose(k.offset(t), expected)
    assert np.all(IndicatorKernel().offset(t) == 0.0)


def test_regularity_of_ou():
    report = OUKernel(lam=1.0).regularity_report()
    assert report.bounded and report.square_integrable
    assert report.c1 == (1.0,)


def test_elementary_kernels_vanish_off_support(rng):
    n = 100_000
    t = rng.uniform(0.0, 1.0, size=n)
    below = t - rng.uniform(1e-9, 5.0, size=n)
    above = t + rng.uniform(1e-9, 5.0, size=n)
    assert np.all(IndicatorKernel().values(t, above) == 0.0)
    assert np.all(IndicatorKernel().values(t, -rng.uniform(1e-9, 5.0, size=n)) == 0.0)
    assert np.all(OUKernel(lam=1.0).values(t, above) == 0.0)
    assert np.all(ReverseOUKernel(lam=1.0).values(t, below) == 0.0)


def test_callable_kernel_numeric_scan_of_ou_shape():
    k = CallableKernel(
        lambda t, s: np.where((s >= 0) & (s < t), np.exp(-(t - s)), 0.0),
        natural_domain=Interval(0.0, 1.0),
        name="ou_like",
    )
    report = k.regularity_report()
    assert report.method == "numeric"
    assert report.bounded is True
    assert report.square_integrable is True
    assert report.c1[0] == pytest.approx(1.0, abs=0.15)


def test_callable_kernel_numeric_scan_flags_blow_up():
    k = CallableKernel(lambda t, s: np.exp(50.0 * s) + 0 * t, natural_domain=REAL_LINE)
    assert k.regularity_report().bounded is False


def test_callable_kernel_scalar_function():
    k = CallableKernel(
        lambda t, s: 2.0 if 0 <= s <= t else 0.0,
        natural_domain=Interval(0.0, 1.0),
        vectorized=False,
    )
    assert k.evaluate(0.5, 0.25) == 2.0
    assert k.time_integral(0.5, Interval(0.0, 1.0)) == pytest.approx(1.0, rel=1e-8)


def test_public_domain_checks_and_breakpoints():
    kernel = OUKernel(lam=1.0)
    kernel.check_time(1.0)
    kernel.check_window(Interval(0.0, 1.0))
    with pytest.raises(DomainError):
        kernel.check_time(1.5)
    with pytest.raises(DomainError):
        kernel.check_window(Interval(-1.0, 1.0))
    assert kernel.breakpoints(0.25, 0.5) == [0.0, 0.25, 0.5]
