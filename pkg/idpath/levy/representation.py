from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, Optional
import logging
import warnings

import numpy as np
from scipy.stats import qmc

from idpath.cache import LRUCache
from idpath.errors import DomainError, TailMassWarning, UnsupportedError
from idpath.settings import settings
from idpath import streams

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CovarianceEstimate:
    """Monte Carlo estimate of a residual covariance matrix."""

    matrix: np.ndarray
    stderr: np.ndarray
    tail_estimate: float
    n_samples: int


class LevyRepresentation(ABC):
    """
    Interface for decompositions ν(B) = ∫₀^∞ P(H(r,U) ∈ B) dr of a Lévy measure.

    Subclasses supply the mark law (as a map from uniforms, so both pseudo- and
    quasi-random draws work) and the jump function H. Everything else, the
    centers c_k, the compensator of ν_m and the residual covariance oracle, is
    derived here and may be overridden where a closed form exists.

    Marks are always 2-D arrays of shape (n, mark_width); jumps are (n, dim).
    """

    type_name: str = ""
    dim: int = 1
    is_symmetric: bool = False
    # Centered representations subtract the compensator of ν_m in the series;
    # subordinators are simulated drift-free.
    centered: bool = True
    finite_total_mass: Optional[float] = None
    # Number of uniforms consumed per mark and number of columns of a mark.
    uniform_dim: int = 1
    mark_width: int = 1
    # Whether the scaled small jumps admit the Gaussian limit (Assumption 3(b)).
    gaussian_limit_valid: Optional[bool] = None

    def __init__(self):
        self._cache = LRUCache()

    # --- Mark law and jump function ---

    @abstractmethod
    def marks_from_uniform(self, u: np.ndarray) -> np.ndarray:
        """Map uniforms of shape (n, uniform_dim) to marks of shape (n, mark_width)."""
        ...

    @abstractmethod
    def jumps(self, r: np.ndarray, marks: np.ndarray) -> np.ndarray:
        """Vectorized H(r_i, u_i) for r of shape (n,) and marks (n, mark_width)."""
        ...

    @abstractmethod
    def to_spec(self) -> Dict[str, Any]:
        """JSON-serializable constructor spec (inverse of the factory)."""
        ...

    @property
    def rep_id(self) -> str:
        spec = self.to_spec()
        params = ",".join(f"{k}={spec[k]}" for k in sorted(spec) if k != "type")
        return f"{self.type_name}({params})"

    def sample_marks(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Draw `size` independent marks."""
        return self.marks_from_uniform(rng.random((size, self.uniform_dim)))

    def sample_mark(self, rng: np.random.Generator) -> np.ndarray:
        """Draw one mark U."""
        return self.sample_marks(rng, 1)[0]

    def jump_magnitude(self, r: float, u: Any = None) -> np.ndarray:
        """
        Evaluate H(r, u) for a single arrival.

        Args:
            r: Positive series index (arrival time scaled by the window length).
            u: One mark; scalars are accepted for one-column marks.

        Returns:
            The jump as a vector of length `dim`.

        Raises:
            DomainError if r is not strictly positive.
        """
        if not np.isfinite(r) or r <= 0:
            raise DomainError(f"H(r,u) requires r > 0, got r={r}")
        mark = np.zeros(self.mark_width) if u is None else np.atleast_1d(
            np.asarray(u, dtype=float)
        )
        if mark.shape != (self.mark_width,):
            raise DomainError(
                f"{self.type_name} marks have width {self.mark_width}, got shape {mark.shape}"
            )
        return self.jumps(np.array([float(r)]), mark[None, :])[0]

    # --- Centers and compensators ---

    @cached_property
    def _reference_marks(self) -> np.ndarray:
        """Fixed mark sample for Monte Carlo inner expectations."""
        rng = streams.path_stream(0, 0, streams.DIAGNOSTICS)
        return self.sample_marks(rng, settings.center_marks)

    def truncated_mean(self, r: np.ndarray, cap: float = 1.0) -> np.ndarray:
        """
        E[H(r,U) 𝟙(‖H(r,U)‖ ≤ cap)] for each r, shape (len(r), dim).

        The default averages over a fixed Monte Carlo mark sample; `cap=inf`
        gives the plain mean.
        """
        r = np.atleast_1d(np.asarray(r, dtype=float))
        marks = self._reference_marks
        out = np.empty((r.size, self.dim))
        for i, ri in enumerate(r):
            h = self.jumps(np.full(marks.shape[0], ri), marks)
            keep = np.linalg.norm(h, axis=1) <= cap
            out[i] = (h * keep[:, None]).mean(axis=0)
        return out

    def compensator(self, lo: float, hi: float, cap: float = 1.0) -> np.ndarray:
        """
        ∫_lo^hi E[H(s,U) 𝟙(‖H(s,U)‖ ≤ cap)] ds by composite Gauss–Legendre.

        Panels are unit length below 1 and geometric above, so long bands
        (m, M] stay cheap.
        """
        if lo < 0 or hi < lo:
            raise DomainError(f"compensator needs 0 <= lo <= hi, got ({lo}, {hi})")
        if hi == lo or self.is_symmetric:
            return np.zeros(self.dim)
        key = ("compensator", float(lo), float(hi), float(cap))
        cached = self._cache.get(key)
        if cached is not None:
            return cached.copy()

        edges = _panel_edges(lo, hi)
        nodes, weights = np.polynomial.legendre.leggauss(settings.center_nodes)
        total = np.zeros(self.dim)
        for a, b in zip(edges[:-1], edges[1:]):
            s = 0.5 * (b - a) * nodes + 0.5 * (a + b)
            total += 0.5 * (b - a) * (weights[:, None] * self.truncated_mean(s, cap)).sum(axis=0)

        self._cache.put(key, total)
        return total.copy()

    def center(self, k: int) -> np.ndarray:
        """c_k = ∫_{k-1}^k E[H(s,U) 𝟙_{(0,1]}(‖H(s,U)‖)] ds."""
        if int(k) != k or k < 1:
            raise DomainError(f"center index must be a positive integer, got {k}")
        return self.compensator(float(k - 1), float(k), 1.0)

    def cumulative_center(self, m: float) -> np.ndarray:
        """∫₀^m E[H 𝟙(‖H‖≤1)] ds, the compensator of ν_m (= Σ_{k≤m} c_k for integer m)."""
        if m < 0:
            raise DomainError(f"m must be nonnegative, got {m}")
        return self.compensator(0.0, float(m), 1.0)

    # --- Characteristic exponent ---

    @cached_property
    def _cf_marks(self) -> np.ndarray:
        """Scrambled Sobol marks for the mark expectation in log_cf_series."""
        if self.uniform_dim == 0:
            return self.marks_from_uniform(np.zeros((1, 0)))
        sobol = qmc.Sobol(d=self.uniform_dim, scramble=True, seed=0)
        u = sobol.random_base2(int(np.ceil(np.log2(settings.cf_marks))))
        return self.marks_from_uniform(u)

    def log_cf_series(self, z: np.ndarray, m: float) -> complex:
        """
        ∫₀^m E[e^{i⟨z,H⟩} − 1 − i⟨z,H⟩𝟙(‖H‖≤1)] dr, the compensator term only for centered representations.

        This is the log characteristic function contribution of a unit time
        mass with kernel value folded into z. The r-integral uses Gauss–Legendre
        in log r with settings.cf_r_nodes nodes on [r₀, m], r₀ = 10⁻¹⁰ min(m, 1),
        and a rectangle on (0, r₀]; the mark expectation is a quasi Monte Carlo
        average.
        """
        z = np.atleast_1d(np.asarray(z, dtype=float))
        if m <= 0 or not np.any(z):
            return 0j
        r0 = 1e-10 * min(m, 1.0)
        nodes, weights = np.polynomial.legendre.leggauss(settings.cf_r_nodes)
        lo, hi = np.log(r0), np.log(m)
        v = 0.5 * (hi - lo) * nodes + 0.5 * (hi + lo)
        r = np.exp(v)
        w = 0.5 * (hi - lo) * weights * r
        r = np.append(r, r0)
        w = np.append(w, r0)

        marks = self._cf_marks
        n_marks = marks.shape[0]
        step = max(1, (1 << 19) // n_marks)
        total = 0j
        for start in range(0, r.size, step):
            rb, wb = r[start : start + step], w[start : start + step]
            h = self.jumps(np.repeat(rb, n_marks), np.tile(marks, (rb.size, 1)))
            phase = h @ z
            val = np.expm1(1j * phase)
            if self.centered:
                val -= 1j * phase * (np.linalg.norm(h, axis=1) <= 1.0)
            total += np.sum(wb * val.reshape(rb.size, n_marks).mean(axis=1))
        return complex(total)

    # --- Residual covariance ---

    def residual_covariance(self, m: float) -> np.ndarray:
        """σ_m² = ∫_m^∞ E[H(r,U)^{⊗2}] dr in closed form."""
        raise UnsupportedError(
            f"{self.type_name} has no closed-form residual covariance; "
            "use residual_covariance_numeric"
        )

    def band_covariance(self, m: float, M: float) -> np.ndarray:
        """Covariance σ_m² − σ_M² of the jumps with index in (m, M]."""
        if M < m:
            raise DomainError(f"band needs M >= m, got m={m}, M={M}")
        return self.residual_covariance(m) - self.residual_covariance(M)

    def residual_covariance_numeric(
        self,
        m: float,
        n_samples: int = 10_000,
        r_max: Optional[float] = None,
        rng: Optional[np.random.Generator] = None,
    ) -> CovarianceEstimate:
        """
        Stratified Monte Carlo oracle for ∫_m^{r_max} E[H(r,U)^{⊗2}] dr.

        Strata are uniform in log r when m > 0 (uniform in r otherwise) with two
        draws per stratum, which gives an unbiased estimate and a within-stratum
        standard error. The mass beyond r_max is extrapolated from the local
        power-law decay of E‖H(r,U)‖²; a TailMassWarning is raised when it is
        not small against the standard error.
        """
        if m < 0:
            raise DomainError(f"m must be nonnegative, got {m}")
        if n_samples < 1000:
            raise DomainError(f"n_samples must be at least 1000, got {n_samples}")
        if r_max is None:
            r_max = max(m, 1.0) * 1e6
        if r_max < m:
            raise DomainError(f"r_max must be >= m, got r_max={r_max}, m={m}")

        d = self.dim
        if r_max == m:
            zeros = np.zeros((d, d))
            return CovarianceEstimate(zeros, zeros.copy(), 0.0, n_samples)
        rng = rng if rng is not None else streams.path_stream(0, 1, streams.DIAGNOSTICS)

        n_strata = n_samples // 2
        v = (np.arange(n_strata)[:, None] + rng.random((n_strata, 2))) / n_strata
        v = v.ravel()
        if m > 0:
            log_span = np.log(r_max / m)
            r = m * np.exp(v * log_span)
            weight = r * log_span
        else:
            r = r_max * v
            weight = np.full_like(r, r_max)
        # Guard against r == 0 on the linear scale.
        r = np.maximum(r, np.finfo(float).tiny)

        h = self.jumps(r, self.sample_marks(rng, r.size))
        outer = weight[:, None, None] * h[:, :, None] * h[:, None, :]
        pairs = outer.reshape(n_strata, 2, d, d)
        estimate = pairs.mean(axis=(0, 1))
        within = 0.5 * (pairs[:, 0] - pairs[:, 1]) ** 2
        stderr = np.sqrt(within.sum(axis=0) / (2.0 * n_strata**2))

        tail = self._tail_beyond(r_max, rng, n_samples)
        tol = max(float(np.trace(stderr)), 1e-12 * max(float(np.trace(estimate)), 1.0))
        if tail > tol:
            msg = (
                f"{self.rep_id}: estimated second-moment mass beyond r_max={r_max:g} "
                f"is {tail:.3g}, above the standard error {tol:.3g}"
            )
            logger.warning(msg)
            warnings.warn(msg, TailMassWarning, stacklevel=2)

        logger.debug(
            f"residual_covariance_numeric({self.rep_id}, m={m}) -> trace "
            f"{np.trace(estimate):.6g} ± {np.trace(stderr):.2g}"
        )
        return CovarianceEstimate(estimate, stderr, tail, n_samples)

    def _tail_beyond(self, r_max: float, rng: np.random.Generator, n: int) -> float:
        marks = self.sample_marks(rng, n)
        g = []
        for r in (0.5 * r_max, r_max):
            h = self.jumps(np.full(n, r), marks)
            g.append(float((h**2).sum(axis=1).mean()))
        g_half, g_full = g
        if g_full <= 0.0:
            return 0.0
        if g_half <= g_full:
            return float("inf")
        p = np.log2(g_half / g_full)
        if p <= 1.0:
            return float("inf")
        return g_full * r_max / (p - 1.0)


def _panel_edges(lo: float, hi: float) -> np.ndarray:
    """Unit panels below 1, doubling panels above."""
    edges = [lo]
    x = lo
    while x < min(hi, 1.0):
        x = min(np.floor(x) + 1.0, hi)
        edges.append(x)
    while x < hi:
        x = min(2.0 * x, hi)
        edges.append(x)
    return np.asarray(edges)
