from typing import Any, Dict
import logging

import numpy as np
from scipy import special

from idpath.errors import DomainError
from idpath.levy.representation import LevyRepresentation

logger = logging.getLogger(__name__)


class GammaRep(LevyRepresentation):
    """
    Gamma subordinator, ν(dx) = a x⁻¹ e^{-βx} dx on x > 0.

    H(r, U) = β⁻¹ e^{-r/a} U with U ~ Exp(1). Simulated drift-free, so the
    series is uncentered and the process mean is a/β per unit time.
    """

    type_name = "gamma"
    dim = 1
    is_symmetric = False
    centered = False
    uniform_dim = 1
    mark_width = 1
    # Scaled small jumps stay exponential, no Gaussian limit.
    gaussian_limit_valid = False

    def __init__(self, a: float, beta: float):
        super().__init__()
        if not (np.isfinite(a) and a > 0):
            raise DomainError(f"gamma shape a must be > 0, got {a}")
        if not (np.isfinite(beta) and beta > 0):
            raise DomainError(f"gamma rate beta must be > 0, got {beta}")
        self.a = float(a)
        self.beta = float(beta)

    def marks_from_uniform(self, u: np.ndarray) -> np.ndarray:
        return -np.log1p(-np.asarray(u)[:, :1])

    def jumps(self, r: np.ndarray, marks: np.ndarray) -> np.ndarray:
        scale = np.exp(-np.asarray(r, dtype=float) / self.a) / self.beta
        return (scale * marks[:, 0])[:, None]

    def truncated_mean(self, r: np.ndarray, cap: float = 1.0) -> np.ndarray:
        r = np.atleast_1d(np.asarray(r, dtype=float))
        scale = np.exp(-r / self.a) / self.beta
        if np.isinf(cap):
            return scale[:, None]
        # E[U 𝟙(U ≤ x)] for U ~ Exp(1) is the regularized lower gamma P(2, x).
        with np.errstate(over="ignore"):
            x = cap * self.beta * np.exp(r / self.a)
        return (scale * special.gammainc(2.0, x))[:, None]

    def residual_covariance(self, m: float) -> np.ndarray:
        if m < 0:
            raise DomainError(f"m must be nonnegative, got {m}")
        return np.array([[self.a / self.beta**2 * np.exp(-2.0 * m / self.a)]])

    def to_spec(self) -> Dict[str, Any]:
        return {"type": self.type_name, "a": self.a, "beta": self.beta}
