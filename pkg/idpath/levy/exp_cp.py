from typing import Any, Dict
import logging

import numpy as np

from idpath.errors import DomainError
from idpath.levy.representation import LevyRepresentation

logger = logging.getLogger(__name__)


class ExponentialCPRep(LevyRepresentation):
    """
    Compound Poisson subordinator with ν(dz) = e^{-z} dz on (0, ∞).

    Inverse Lévy measure: H(r) = -ln r for r ≤ 1 and 0 beyond the total mass 1.
    The mark is empty. Simulated drift-free, so a window of length ℓ with m ≥ 1
    is an exact compound Poisson path.
    """

    type_name = "exp_cp"
    dim = 1
    is_symmetric = False
    centered = False
    finite_total_mass = 1.0
    uniform_dim = 0
    mark_width = 0
    gaussian_limit_valid = False

    def marks_from_uniform(self, u: np.ndarray) -> np.ndarray:
        return np.empty((np.asarray(u).shape[0], 0))

    def sample_marks(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return np.empty((size, 0))

    def jumps(self, r: np.ndarray, marks: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return np.where(r < 1.0, -np.log(np.minimum(r, 1.0)), 0.0)[:, None]

    def compensator(self, lo: float, hi: float, cap: float = 1.0) -> np.ndarray:
        if lo < 0 or hi < lo:
            raise DomainError(f"compensator needs 0 <= lo <= hi, got ({lo}, {hi})")
        # -ln r ≤ cap iff r ≥ e^{-cap}; the antiderivative of -ln r is r - r ln r.
        a = max(lo, float(np.exp(-cap)))
        b = min(hi, 1.0)
        if b <= a:
            return np.zeros(1)

        def primitive(x: float) -> float:
            return x - x * np.log(x) if x > 0 else 0.0

        return np.array([primitive(b) - primitive(a)])

    def residual_covariance(self, m: float) -> np.ndarray:
        if m < 0:
            raise DomainError(f"m must be nonnegative, got {m}")
        if m >= 1.0:
            return np.zeros((1, 1))
        if m == 0.0:
            return np.array([[2.0]])
        lm = np.log(m)
        return np.array([[2.0 - m * (lm * lm - 2.0 * lm + 2.0)]])

    def to_spec(self) -> Dict[str, Any]:
        return {"type": self.type_name}
