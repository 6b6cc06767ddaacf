from typing import Any, Dict, List, Sequence, Tuple
import logging

import numpy as np
from scipy import integrate

from idpath.errors import DomainError
from idpath.levy.representation import LevyRepresentation
from idpath.settings import settings

logger = logging.getLogger(__name__)

Atom = Tuple[Sequence[float], float]


def _normalize_directions(xi: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(xi, axis=1)
    if np.any(norms == 0):
        raise DomainError("spectral atoms need nonzero directions")
    if np.any(np.abs(norms - 1.0) > 1e-9):
        logger.debug("Normalizing spectral directions onto the unit sphere")
    return xi / norms[:, None]


def _is_mirror_symmetric(xi: np.ndarray, *attrs: np.ndarray, tol: float = 1e-12) -> bool:
    """True if every atom has a partner at -ξ carrying the same attributes."""
    unmatched = list(range(len(xi)))
    while unmatched:
        i = unmatched.pop(0)
        partner = None
        for j in unmatched:
            if np.allclose(xi[j], -xi[i], atol=tol) and all(
                abs(a[j] - a[i]) <= tol * max(1.0, abs(a[i])) for a in attrs
            ):
                partner = j
                break
        if partner is None:
            return False
        unmatched.remove(partner)
    return True


class StableRep(LevyRepresentation):
    """
    α-stable integrator with a discrete spectral measure λ = Σ w_i δ_{ξ_i}.

    H(r, ξ) = (r/‖λ‖)^{-1/α} ξ with ξ drawn from λ/‖λ‖.
    """

    type_name = "stable"
    centered = True
    uniform_dim = 1

    def __init__(self, alpha: float, atoms: Sequence[Atom]):
        super().__init__()
        if not (0.0 < alpha < 2.0):
            raise DomainError(f"stable index alpha must lie in (0, 2), got {alpha}")
        if len(atoms) == 0:
            raise DomainError("spectral measure needs at least one atom")
        xi = np.atleast_2d(np.asarray([np.atleast_1d(a[0]) for a in atoms], dtype=float))
        w = np.asarray([a[1] for a in atoms], dtype=float)
        if np.any(~np.isfinite(w)) or np.any(w <= 0):
            raise DomainError(f"spectral weights must be > 0, got {w.tolist()}")

        self.alpha = float(alpha)
        self.xi = _normalize_directions(xi)
        self.weights = w
        self.total_mass = float(w.sum())
        self.dim = self.xi.shape[1]
        self.mark_width = self.dim
        self._cum_probs = np.cumsum(w) / self.total_mass
        self.mean_direction = (w[:, None] * self.xi).sum(axis=0) / self.total_mass
        self.Lambda = np.einsum("k,ki,kj->ij", w, self.xi, self.xi)
        self.is_symmetric = _is_mirror_symmetric(self.xi, w)
        eig = np.linalg.eigvalsh(self.Lambda)
        self.gaussian_limit_valid = bool(eig.min() > settings.pd_tol * max(eig.max(), 1.0))

    def _atom_index(self, u: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self._cum_probs, u, side="right")
        return np.minimum(idx, len(self.weights) - 1)

    def marks_from_uniform(self, u: np.ndarray) -> np.ndarray:
        return self.xi[self._atom_index(np.asarray(u)[:, 0])]

    def _radial(self, r: np.ndarray) -> np.ndarray:
        return (np.asarray(r, dtype=float) / self.total_mass) ** (-1.0 / self.alpha)

    def jumps(self, r: np.ndarray, marks: np.ndarray) -> np.ndarray:
        return self._radial(r)[:, None] * marks

    def truncated_mean(self, r: np.ndarray, cap: float = 1.0) -> np.ndarray:
        a = self._radial(np.atleast_1d(r))
        return (a * (a <= cap))[:, None] * self.mean_direction[None, :]

    def _radial_integral(self, lo: float, hi: float) -> float:
        """∫_lo^hi (r/‖λ‖)^{-1/α} dr."""
        if hi <= lo:
            return 0.0
        L, p = self.total_mass, 1.0 - 1.0 / self.alpha
        if lo == 0.0 and p <= 0.0:
            raise DomainError(
                f"E[H] is not integrable at r=0 for alpha={self.alpha} without truncation"
            )
        if abs(p) < 1e-14:
            return L * (np.log(hi) - np.log(lo))
        return L ** (1.0 / self.alpha) * (hi**p - lo**p) / p

    def compensator(self, lo: float, hi: float, cap: float = 1.0) -> np.ndarray:
        if lo < 0 or hi < lo:
            raise DomainError(f"compensator needs 0 <= lo <= hi, got ({lo}, {hi})")
        if self.is_symmetric or hi == lo:
            return np.zeros(self.dim)
        # ‖H(r,ξ)‖ ≤ cap iff r ≥ ‖λ‖ cap^{-α}
        r_cap = 0.0 if np.isinf(cap) else self.total_mass * cap ** (-self.alpha)
        return self._radial_integral(max(lo, r_cap), hi) * self.mean_direction

    def log_cf_series(self, z: np.ndarray, m: float) -> complex:
        """
        Exact radial form of the characteristic exponent of ν_m.

        With x = (r/‖λ‖)^{-1/α} each atom contributes
        w α ∫_{x_m}^∞ (e^{iωx} − 1 − iωx𝟙(x≤1)) x^{-α-1} dx, ω = ⟨z, ξ⟩.
        The oscillatory tail beyond B = max(1, x_m, 40/|ω|) uses the
        Fourier-weighted rule of scipy.integrate.quad.
        """
        z = np.atleast_1d(np.asarray(z, dtype=float))
        if m <= 0 or not np.any(z):
            return 0j
        alpha = self.alpha
        x_m = (m / self.total_mass) ** (-1.0 / alpha)
        total = 0j
        for xi, w in zip(self.xi, self.weights):
            om = float(z @ xi)
            if om == 0.0:
                continue
            a = abs(om)
            edge = max(1.0, x_m, 40.0 / a)
            points = [1.0] if x_m < 1.0 < edge else None
            body_re, _ = integrate.quad(
                lambda x: -2.0 * np.sin(0.5 * a * x) ** 2 * x ** (-alpha - 1.0),
                x_m, edge, points=points, limit=500,
            )
            body_im, _ = integrate.quad(
                lambda x: (np.sin(a * x) - a * x * (x <= 1.0)) * x ** (-alpha - 1.0),
                x_m, edge, points=points, limit=500,
            )
            tail_cos, _ = integrate.quad(lambda x: x ** (-alpha - 1.0), edge, np.inf, weight="cos", wvar=a)
            tail_sin, _ = integrate.quad(lambda x: x ** (-alpha - 1.0), edge, np.inf, weight="sin", wvar=a)
            re = body_re + tail_cos - edge ** (-alpha) / alpha
            im = np.sign(om) * (body_im + tail_sin)
            total += w * alpha * complex(re, im)
        return total

    def residual_covariance(self, m: float) -> np.ndarray:
        if m < 0:
            raise DomainError(f"m must be nonnegative, got {m}")
        if m == 0:
            raise DomainError("stable residual covariance is infinite at m=0")
        q = 2.0 / self.alpha
        return m ** (1.0 - q) * self.total_mass ** (q - 1.0) / (q - 1.0) * self.Lambda

    def to_spec(self) -> Dict[str, Any]:
        atoms: List[Dict[str, Any]] = [
            {"xi": x.tolist(), "w": float(w)} for x, w in zip(self.xi, self.weights)
        ]
        return {"type": self.type_name, "alpha": self.alpha, "atoms": atoms}
