from typing import Any, Dict, List, Sequence, Tuple
import logging

import numpy as np
from scipy import integrate

from idpath.errors import DomainError
from idpath.levy.representation import LevyRepresentation
from idpath.levy.stable import _is_mirror_symmetric, _normalize_directions
from idpath.settings import settings

logger = logging.getLogger(__name__)

TemperedAtom = Tuple[Sequence[float], float, float]


class TemperedStableRep(LevyRepresentation):
    """
    Tempered stable integrator with exponential tempering q(r, ξ) = e^{-θ(ξ) r}.

    Marks are (u₁, u₂, u₃) with u₁ ~ Exp(1), u₂ ~ U[0,1] and u₃ = θ_i ξ_i for an
    atom drawn from λ/‖λ‖; stored as rows [u₁, u₂, u₃...] of width 2 + d.

        H(r, u) = min((r/‖λ‖)^{-1/α}, u₁ u₂^{1/α} / ‖u₃‖) · u₃/‖u₃‖
    """

    type_name = "tempered_stable"
    centered = True
    uniform_dim = 3

    def __init__(self, alpha: float, atoms: Sequence[TemperedAtom]):
        super().__init__()
        if not (0.0 < alpha < 2.0):
            raise DomainError(f"stable index alpha must lie in (0, 2), got {alpha}")
        if len(atoms) == 0:
            raise DomainError("spectral measure needs at least one atom")
        xi = np.atleast_2d(np.asarray([np.atleast_1d(a[0]) for a in atoms], dtype=float))
        w = np.asarray([a[1] for a in atoms], dtype=float)
        theta = np.asarray([a[2] for a in atoms], dtype=float)
        if np.any(~np.isfinite(w)) or np.any(w <= 0):
            raise DomainError(f"spectral weights must be > 0, got {w.tolist()}")
        if np.any(~np.isfinite(theta)) or np.any(theta <= 0):
            raise DomainError(f"tempering rates theta must be > 0, got {theta.tolist()}")

        self.alpha = float(alpha)
        self.xi = _normalize_directions(xi)
        self.weights = w
        self.theta = theta
        self.total_mass = float(w.sum())
        self.dim = self.xi.shape[1]
        self.mark_width = 2 + self.dim
        self._cum_probs = np.cumsum(w) / self.total_mass
        self.Lambda = np.einsum("k,ki,kj->ij", w, self.xi, self.xi)
        self.is_symmetric = _is_mirror_symmetric(self.xi, w, theta)
        eig = np.linalg.eigvalsh(self.Lambda)
        self.gaussian_limit_valid = bool(eig.min() > settings.pd_tol * max(eig.max(), 1.0))

    def marks_from_uniform(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u)
        u1 = -np.log1p(-u[:, 0])
        idx = np.minimum(
            np.searchsorted(self._cum_probs, u[:, 2], side="right"), len(self.weights) - 1
        )
        u3 = self.theta[idx, None] * self.xi[idx]
        return np.column_stack([u1, u[:, 1], u3])

    def jumps(self, r: np.ndarray, marks: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        u3 = marks[:, 2:]
        norm3 = np.linalg.norm(u3, axis=1)
        stable_part = (r / self.total_mass) ** (-1.0 / self.alpha)
        tempered_part = marks[:, 0] * marks[:, 1] ** (1.0 / self.alpha) / norm3
        return (np.minimum(stable_part, tempered_part) / norm3)[:, None] * u3

    def _atom_second_moment(self, m: float, theta: float) -> float:
        """E over (u₁, u₂) of ∫_m^∞ min((r/L)^{-1/α}, V)² dr with V = u₁u₂^{1/α}/θ."""
        L, a = self.total_mass, self.alpha
        q = 2.0 / a

        def integrand(u1: float, u2: float) -> float:
            v = u1 * u2 ** (1.0 / a) / theta
            if v <= 0.0:
                return 0.0
            # Below r* the tempered bound V is the smaller term.
            r_star = L * v ** (-a)
            flat = v * v * max(r_star - m, 0.0)
            tail = L**q * max(m, r_star) ** (1.0 - q) / (q - 1.0)
            return (flat + tail) * np.exp(-u1)

        value, err = integrate.dblquad(
            integrand, 0.0, 1.0, 0.0, np.inf, epsabs=1e-12, epsrel=settings.quadrature_tol
        )
        logger.debug(f"tempered second moment m={m} theta={theta}: {value:.8g} (err {err:.1g})")
        return value

    def residual_covariance(self, m: float) -> np.ndarray:
        if m < 0:
            raise DomainError(f"m must be nonnegative, got {m}")
        key = ("residual_covariance", float(m))
        cached = self._cache.get(key)
        if cached is not None:
            return cached.copy()
        out = np.zeros((self.dim, self.dim))
        moments: Dict[float, float] = {}
        for x, w, th in zip(self.xi, self.weights, self.theta):
            if th not in moments:
                moments[th] = self._atom_second_moment(float(m), float(th))
            out += (w / self.total_mass) * moments[th] * np.outer(x, x)
        self._cache.put(key, out)
        return out.copy()

    def to_spec(self) -> Dict[str, Any]:
        atoms: List[Dict[str, Any]] = [
            {"xi": x.tolist(), "w": float(w), "theta": float(t)}
            for x, w, t in zip(self.xi, self.weights, self.theta)
        ]
        return {"type": self.type_name, "alpha": self.alpha, "atoms": atoms}
