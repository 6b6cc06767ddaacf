"""Fractional kernels: K_{H,α}, the n-th order linear fractional kernel and the log-fractional kernel."""

from typing import Any, Dict
import logging

import numpy as np
from scipy import integrate, special

from idpath.errors import DomainError
from idpath.kernels.base import REAL_LINE, Interval, Kernel, Regularity

logger = logging.getLogger(__name__)


class FracKHAKernel(Kernel):
    """
    Fractional Lévy motion kernel on [0, T], with γ = H − 1/α:

        K(t,s) = c [ (t/s)^γ (t−s)^γ − γ s^{−γ} ∫_s^t u^{γ−1}(u−s)^γ du ] 𝟙_{[0,t)}(s)

    The inner integral is computed by adaptive quadrature after the
    substitution u = s + v², which removes the algebraic endpoint at u = s.
    """

    type_name = "frac_kha"

    def __init__(self, H: float, alpha: float, c: float = 1.0, horizon: float = 1.0):
        super().__init__(horizon)
        if not (0.0 < alpha < 2.0):
            raise DomainError(f"alpha must lie in (0, 2), got {alpha}")
        gamma = H - 1.0 / alpha
        if not (-0.5 < gamma < 0.5):
            raise DomainError(
                f"H−1/α must lie in (−1/2, 1/2) (H in (1/α−1/2, 1/α+1/2)), got {gamma:.6g}"
            )
        self.H = float(H)
        self.alpha = float(alpha)
        self.c = float(c)
        self.gamma = float(gamma)
        self._values = np.vectorize(self._value, otypes=[float])

    @property
    def natural_domain(self) -> Interval:
        return Interval(0.0, self.horizon)

    def inner_integral(self, s: float, t: float) -> float:
        """∫_s^t u^{γ−1}(u−s)^γ du for 0 < s < t."""
        g = self.gamma

        def integrand(v: float) -> float:
            return 2.0 * v ** (2.0 * g + 1.0) * (s + v * v) ** (g - 1.0)

        value, _ = integrate.quad(integrand, 0.0, np.sqrt(t - s), epsabs=1e-10, epsrel=1e-12, limit=200)
        return value

    def _value(self, t: float, s: float) -> float:
        if not (0.0 < s < t):
            return 0.0
        g = self.gamma
        if g == 0.0:
            return self.c
        first = (t / s) ** g * (t - s) ** g
        second = g * s ** (-g) * self.inner_integral(s, t)
        return self.c * (first - second)

    def values(self, t, s):
        return self._values(np.asarray(t, dtype=float), np.asarray(s, dtype=float))

    def support(self, t: float) -> Interval:
        return Interval(0.0, float(t))

    def regularity_report(self) -> Regularity:
        bounded = self.gamma >= 0.0
        notes = {}
        if not bounded:
            notes["reason"] = "|K(t,s)| → ∞ as s → t− when H < 1/α"
        return Regularity(
            bounded=bounded,
            square_integrable=True,
            c1=(2.0 * self.gamma + 1.0,),
            notes=notes,
        )

    def to_spec(self) -> Dict[str, Any]:
        return {"type": self.type_name, "H": self.H, "alpha": self.alpha, "c": self.c}


def generalized_binomial(g: float, k: int) -> float:
    """binom(g, k) via log-gamma with sign tracking."""
    if k == 0:
        return 1.0
    log_mag = special.gammaln(g + 1.0) - special.gammaln(k + 1.0) - special.gammaln(g - k + 1.0)
    sign = special.gammasgn(g + 1.0) * special.gammasgn(g - k + 1.0)
    return float(sign * np.exp(log_mag))


def _pos_power(x: np.ndarray, p: float) -> np.ndarray:
    """x_+^p with the zero-power convention 0^0 = 0 off the positive axis."""
    pos = x > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(pos, np.where(pos, x, 1.0) ** p, 0.0)


class LinearFracKernel(Kernel):
    """
    n-th order moving-average kernel on R, with γ = H − 1/α:

        f_n(t,s) = [ (t−s)_+^γ − Σ_{k<n} binom(γ,k) t^k (−s)_+^{γ−k} ] / Γ(γ+1)

    Admissible region γ ∈ (n−1, n−1/2); γ = 0 with n = 1 gives 𝟙_{[0,t)}(s).
    For s far below zero the bracket is evaluated through the tail of its
    binomial series to avoid cancellation.
    """

    type_name = "linear_frac"
    # -s/t above which the series tail is used.
    SERIES_RATIO = 4.0
    SERIES_TERMS = 60

    def __init__(self, n: int, H: float, alpha: float, horizon: float = 1.0):
        super().__init__(horizon)
        if int(n) != n or n < 1:
            raise DomainError(f"order n must be a positive integer, got {n}")
        if not (0.0 < alpha < 2.0):
            raise DomainError(f"alpha must lie in (0, 2), got {alpha}")
        n = int(n)
        gamma = H - 1.0 / alpha
        indicator_case = n == 1 and abs(gamma) < 1e-14
        if not indicator_case and not (n - 1 < gamma < n - 0.5):
            raise DomainError(
                f"H−1/α must lie in (n−1, n−1/2) = ({n - 1}, {n - 0.5}), got {gamma:.6g}"
            )
        self.n = n
        self.H = float(H)
        self.alpha = float(alpha)
        self.gamma = 0.0 if indicator_case else float(gamma)
        self._norm = 1.0 / special.gamma(self.gamma + 1.0)
        self._binom = np.array([generalized_binomial(self.gamma, k) for k in range(n)])
        self._tail_binom = np.array(
            [generalized_binomial(self.gamma, k) for k in range(n, n + self.SERIES_TERMS)]
        )

    @property
    def natural_domain(self) -> Interval:
        return REAL_LINE

    def values(self, t, s):
        t, s = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(s, dtype=float))
        shape = t.shape
        t, s = t.ravel(), s.ravel()
        g = self.gamma
        if g == 0.0:
            return ((s >= 0.0) & (s < t)).astype(float).reshape(shape)

        out = _pos_power(t - s, g)
        for k, b in enumerate(self._binom):
            out = out - b * t**k * _pos_power(-s, g - k)

        # Cancellation-free tail Σ_{k≥n} binom(γ,k) t^k (−s)^{γ−k} for −s ≫ t.
        far = (s < 0) & (t > 0) & (-s > self.SERIES_RATIO * t)
        if np.any(far):
            xf = -s[far]
            ratio = t[far] / xf
            tail = np.zeros_like(xf)
            for j, b in enumerate(self._tail_binom):
                tail += b * ratio ** (self.n + j)
            out[far] = xf**g * tail
        return (self._norm * out).reshape(shape)

    def support(self, t: float) -> Interval:
        return Interval(-np.inf, float(t))

    def regularity_report(self) -> Regularity:
        slope = 2.0 * self.gamma + 1.0
        if self.n == 1:
            return Regularity(bounded=True, square_integrable=True, c1=(slope,))
        return Regularity(
            bounded=True,
            square_integrable=True,
            c1=(2.0, slope),
            split=(Interval(-np.inf, 0.0), Interval(0.0, np.inf)),
        )

    def to_spec(self) -> Dict[str, Any]:
        return {"type": self.type_name, "n": self.n, "H": self.H, "alpha": self.alpha}


class LogFracKernel(Kernel):
    """f(t, s) = ln|t − s| − ln|s| on R; square-integrable but unbounded."""

    type_name = "log_frac"

    @property
    def natural_domain(self) -> Interval:
        return REAL_LINE

    def values(self, t, s):
        t, s = np.asarray(t, dtype=float), np.asarray(s, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.log(np.abs(t - s)) - np.log(np.abs(s))
        # f(0, ·) ≡ 0, including s = 0.
        return np.where(t == 0.0, 0.0, out)

    def support(self, t: float) -> Interval:
        return REAL_LINE

    def regularity_report(self) -> Regularity:
        return Regularity(
            bounded=False,
            square_integrable=True,
            c1=(1.0,),
            notes={"reason": "unbounded on every interval of positive length"},
        )

    def to_spec(self) -> Dict[str, Any]:
        return {"type": self.type_name}
