from typing import Any, Dict, Sequence
import logging

import numpy as np

from idpath.errors import CarmaRootError, DomainError
from idpath.kernels.base import Interval, Kernel, Regularity
from idpath.settings import settings

logger = logging.getLogger(__name__)


class CarmaKernel(Kernel):
    """
    Stationary CARMA(p, q) kernel as a sum of exponentials,

        f(t, s) = Σ_k c_k e^{λ_k (t−s)} 𝟙_{(−∞,t)}(s),  c_k = b(λ_k)/a'(λ_k).

    Build it with `build_carma`, which validates the roots of a(z).
    """

    type_name = "carma"

    def __init__(
        self,
        a_coeffs: Sequence[float],
        b_coeffs: Sequence[float],
        roots: np.ndarray,
        weights: np.ndarray,
        horizon: float = 1.0,
    ):
        super().__init__(horizon)
        self.a_coeffs = [float(x) for x in a_coeffs]
        self.b_coeffs = [float(x) for x in b_coeffs]
        self.roots = np.asarray(roots, dtype=float)
        self.weights = np.asarray(weights, dtype=float)

    @property
    def natural_domain(self) -> Interval:
        return Interval(-np.inf, self.horizon)

    def values(self, t, s):
        t, s = np.asarray(t, dtype=float), np.asarray(s, dtype=float)
        lag = t - s
        inside = lag > 0
        lag = np.where(inside, lag, 0.0)
        total = np.zeros(np.broadcast(t, s).shape)
        for lam, c in zip(self.roots, self.weights):
            total = total + c * np.exp(lam * lag)
        return np.where(inside, total, 0.0)

    def support(self, t: float) -> Interval:
        return Interval(-np.inf, float(t))

    def _time_integral(self, t: float, window: Interval) -> float:
        a, b = window.lo, min(t, window.hi)
        if b <= a:
            return 0.0
        total = 0.0
        for lam, c in zip(self.roots, self.weights):
            upper = np.exp(lam * (t - b))
            lower = np.exp(lam * (t - a)) if np.isfinite(a) else 0.0
            total += c * (upper - lower) / (-lam)
        return float(total)

    def _increment_l2(self, t1: float, t2: float, region: Interval) -> float:
        if not region.covers(Interval(-np.inf, t2)):
            return super()._increment_l2(t1, t2, region)
        lam, c = self.roots, self.weights
        dt = t2 - t1
        pair = lam[:, None] + lam[None, :]
        d = c * np.expm1(lam * dt)
        # (−∞, t1): the difference is Σ d_k e^{λ_k (t1−s)}.
        past = np.sum(np.outer(d, d) / (-pair))
        # [t1, t2): only f(t2, ·) is nonzero.
        recent = np.sum(np.outer(c, c) * (-np.expm1(pair * dt)) / (-pair))
        return float(past + recent)

    def lipschitz_constant(self) -> float:
        """C with increment_l2(t1, t2) ≤ C (t2 − t1) over (−∞, T]."""
        return float(np.sum(np.abs(self.weights)) ** 2)

    def regularity_report(self) -> Regularity:
        return Regularity(bounded=True, square_integrable=True, c1=(1.0,))

    def to_spec(self) -> Dict[str, Any]:
        return {"type": self.type_name, "a": self.a_coeffs, "b": self.b_coeffs}


def build_carma(a_coeffs: Sequence[float], b_coeffs: Sequence[float], horizon: float = 1.0) -> CarmaKernel:
    """
    Build the CARMA kernel for a(z) = z^p + a₁z^{p−1} + … + a_p and b(z) = b₀ + … + b_q z^q.

    Args:
        a_coeffs: a₁ … a_p.
        b_coeffs: b₀ … b_q with b_q = 1 and q < p.
        horizon: Time horizon T of the evaluation grid.

    Returns:
        A CarmaKernel.

    Raises:
        DomainError if p ≤ q or b_q ≠ 1; CarmaRootError naming the first root
        that is repeated, complex or nonnegative.
    """
    a = [float(x) for x in a_coeffs]
    b = [float(x) for x in b_coeffs]
    p, q = len(a), len(b) - 1
    if p < 1 or q < 0:
        raise DomainError("CARMA needs at least one a-coefficient and one b-coefficient")
    if p <= q:
        raise DomainError(f"CARMA order needs p > q, got p={p}, q={q}")
    if b[-1] != 1.0:
        raise DomainError(f"CARMA needs b_q = 1, got b_q={b[-1]}")

    a_poly = np.array([1.0] + a)
    # np.roots takes the eigenvalues of the companion matrix.
    roots = np.roots(a_poly)
    gap = settings.carma_root_gap
    for i in range(p):
        for j in range(i + 1, p):
            if abs(roots[i] - roots[j]) <= gap * max(1.0, abs(roots[i])):
                raise CarmaRootError(
                    f"a(z) has a repeated root near {roots[i].real:.6g}", root=roots[i]
                )
    for r in roots:
        if abs(r.imag) > 1e-9 * max(1.0, abs(r)):
            raise CarmaRootError(f"a(z) has a complex root {r:.6g}", root=r)
    for r in roots:
        if r.real >= 0.0:
            raise CarmaRootError(f"a(z) has a nonnegative root {r.real:.6g}", root=r)

    lam = np.sort(roots.real)
    b_poly = np.array(b[::-1])
    weights = np.polyval(b_poly, lam) / np.polyval(np.polyder(a_poly), lam)
    logger.debug(f"CARMA roots {lam.tolist()} with weights {weights.tolist()}")
    return CarmaKernel(a, b, lam, weights, horizon=horizon)
