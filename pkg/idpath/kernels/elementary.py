"""Indicator, Ornstein–Uhlenbeck and reverse Ornstein–Uhlenbeck kernels."""

from typing import Any, Dict
import logging

import numpy as np

from idpath.errors import DomainError
from idpath.kernels.base import REAL_LINE, Interval, Kernel, Regularity

logger = logging.getLogger(__name__)


def _overlap(a: float, b: float, window: Interval) -> float:
    return max(0.0, min(b, window.hi) - max(a, window.lo))


class IndicatorKernel(Kernel):
    """f(t, s) = 𝟙_{[0,t]}(s): the integral is the Lévy process L itself."""

    type_name = "indicator"

    @property
    def natural_domain(self) -> Interval:
        return Interval(0.0, self.horizon)

    def values(self, t, s):
        t, s = np.asarray(t, dtype=float), np.asarray(s, dtype=float)
        return ((s >= 0.0) & (s <= t)).astype(float)

    def support(self, t: float) -> Interval:
        return Interval(0.0, float(t))

    def _time_integral(self, t: float, window: Interval) -> float:
        return _overlap(0.0, t, window)

    def cross_integral(self, t1: float, t2: float, window: Interval) -> float:
        self.check_time(t1)
        self.check_time(t2)
        return _overlap(0.0, min(t1, t2), window)

    def _increment_l2(self, t1: float, t2: float, region: Interval) -> float:
        return _overlap(t1, t2, region)

    def regularity_report(self) -> Regularity:
        return Regularity(bounded=True, square_integrable=True, c1=(1.0,))

    def to_spec(self) -> Dict[str, Any]:
        return {"type": self.type_name}


class OUKernel(Kernel):
    """
    Lévy-driven OU process dX = λ(μ − X)dt + dL started at X₀.

    f(t, s) = e^{-λ(t-s)} 𝟙_{[0,t)}(s), with deterministic offset
    e^{-λt}X₀ + μ(1 − e^{-λt}).
    """

    type_name = "ou"

    def __init__(self, lam: float, mu: float = 0.0, x0: float = 0.0, horizon: float = 1.0):
        super().__init__(horizon)
        if not (np.isfinite(lam) and lam > 0):
            raise DomainError(f"OU rate lambda must be > 0, got {lam}")
        self.lam = float(lam)
        self.mu = float(mu)
        self.x0 = float(x0)

    @property
    def natural_domain(self) -> Interval:
        return Interval(0.0, self.horizon)

    def values(self, t, s):
        t, s = np.asarray(t, dtype=float), np.asarray(s, dtype=float)
        inside = (s >= 0.0) & (s < t)
        with np.errstate(over="ignore"):
            return np.where(inside, np.exp(-self.lam * np.where(inside, t - s, 0.0)), 0.0)

    def support(self, t: float) -> Interval:
        return Interval(0.0, float(t))

    def offset(self, t):
        decay = np.exp(-self.lam * np.asarray(t, dtype=float))
        return decay * self.x0 + self.mu * (1.0 - decay)

    def _time_integral(self, t: float, window: Interval) -> float:
        a, b = max(0.0, window.lo), min(t, window.hi)
        if b <= a:
            return 0.0
        return float((np.exp(-self.lam * (t - b)) - np.exp(-self.lam * (t - a))) / self.lam)

    def cross_integral(self, t1: float, t2: float, window: Interval) -> float:
        self.check_time(t1)
        self.check_time(t2)
        a, b = max(0.0, window.lo), min(t1, t2, window.hi)
        if b <= a:
            return 0.0
        lam = self.lam
        return float(
            (np.exp(-lam * (t1 + t2 - 2 * b)) - np.exp(-lam * (t1 + t2 - 2 * a))) / (2 * lam)
        )

    def _increment_l2(self, t1: float, t2: float, region: Interval) -> float:
        if not region.covers(Interval(0.0, t2)):
            return super()._increment_l2(t1, t2, region)
        x = np.exp(-self.lam * (t2 - t1))
        return float(
            (2.0 * (1.0 - x) - np.exp(-2.0 * self.lam * t1) * (1.0 - x) ** 2) / (2.0 * self.lam)
        )

    def regularity_report(self) -> Regularity:
        return Regularity(bounded=True, square_integrable=True, c1=(1.0,))

    def to_spec(self) -> Dict[str, Any]:
        return {"type": self.type_name, "lambda": self.lam, "mu": self.mu, "x0": self.x0}


class ReverseOUKernel(Kernel):
    """f(t, s) = e^{-λ(s-t)} 𝟙_{[t,∞)}(s), integrating over the future."""

    type_name = "reverse_ou"

    def __init__(self, lam: float, horizon: float = 1.0):
        super().__init__(horizon)
        if not (np.isfinite(lam) and lam > 0):
            raise DomainError(f"reverse OU rate lambda must be > 0, got {lam}")
        self.lam = float(lam)

    @property
    def natural_domain(self) -> Interval:
        return REAL_LINE

    def values(self, t, s):
        t, s = np.asarray(t, dtype=float), np.asarray(s, dtype=float)
        inside = s >= t
        return np.where(inside, np.exp(-self.lam * np.where(inside, s - t, 0.0)), 0.0)

    def support(self, t: float) -> Interval:
        return Interval(float(t), np.inf)

    def _time_integral(self, t: float, window: Interval) -> float:
        a, b = max(t, window.lo), window.hi
        if b <= a:
            return 0.0
        return float((np.exp(-self.lam * (a - t)) - np.exp(-self.lam * (b - t))) / self.lam)

    def cross_integral(self, t1: float, t2: float, window: Interval) -> float:
        self.check_time(t1)
        self.check_time(t2)
        a, b = max(t1, t2, window.lo), window.hi
        if b <= a:
            return 0.0
        lam = self.lam
        return float(
            (np.exp(-lam * (2 * a - t1 - t2)) - np.exp(-lam * (2 * b - t1 - t2))) / (2 * lam)
        )

    def _increment_l2(self, t1: float, t2: float, region: Interval) -> float:
        if not region.covers(Interval(t1, np.inf)):
            return super()._increment_l2(t1, t2, region)
        return float((1.0 - np.exp(-self.lam * (t2 - t1))) / self.lam)

    def regularity_report(self) -> Regularity:
        return Regularity(bounded=True, square_integrable=True, c1=(1.0,))

    def to_spec(self) -> Dict[str, Any]:
        return {"type": self.type_name, "lambda": self.lam}
