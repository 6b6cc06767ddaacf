from dataclasses import dataclass, field
from typing import Dict, Sequence
import logging

import numpy as np
from scipy import stats

from idpath.errors import DomainError
from idpath.kernels.base import Interval, Kernel
from idpath.simulation.gaussian import covariance_factor
from idpath.simulation.params import PathBatch

logger = logging.getLogger(__name__)

MIN_PATHS = 1000


@dataclass(frozen=True)
class NormalityResult:
    """KS p-value per time (Bonferroni over components), Mardia skewness p-value for the first/last pair."""

    ks_p: Dict[float, float]
    mardia_p: float
    variance_ratio: Dict[float, float] = field(default_factory=dict)

    @property
    def min_p(self) -> float:
        return min([*self.ks_p.values(), self.mardia_p])


def mardia_skewness(x: np.ndarray):
    """
    Mardia's multivariate skewness b₁ and its asymptotic χ² p-value.

    b₁ is the sum of squared third-order moments of the whitened sample,
    and n·b₁/6 is χ² with k(k+1)(k+2)/6 degrees of freedom.
    """
    n, k = x.shape
    centered = x - x.mean(axis=0)
    cov = np.cov(centered, rowvar=False, bias=True).reshape(k, k)
    white = np.linalg.solve(np.linalg.cholesky(cov), centered.T).T
    third = np.einsum("ni,nj,nl->ijl", white, white, white) / n
    b1 = float(np.sum(third**2))
    dof = k * (k + 1) * (k + 2) / 6.0
    return b1, float(stats.chi2.sf(n * b1 / 6.0, dof))


def normality_test(
    q_paths: PathBatch,
    sigma_m: np.ndarray,
    t_list: Sequence[float],
    kernel: Kernel,
    window: Interval,
) -> NormalityResult:
    """
    Test the σ⁻¹-scaled small-jump band against its Gaussian limit.

    Each component of σ⁻¹Q_t is compared by a KS test with N(0, ∫_window f(t,s)² ds);
    the pair (σ⁻¹Q_{t₁}, σ⁻¹Q_{t₂}) at the first and last time is tested by
    Mardia's skewness. For a finite band (m, M] pass σ_m² − σ_M² as sigma_m.

    Raises:
        Assumption3AError if sigma_m is singular; DomainError with fewer than
        1000 paths or an empty time list.
    """
    if q_paths.n_paths < MIN_PATHS:
        raise DomainError(f"normality_test needs at least {MIN_PATHS} paths, got {q_paths.n_paths}")
    if not t_list:
        raise DomainError("normality_test needs at least one time")
    factor = covariance_factor(sigma_m)

    scaled: Dict[float, np.ndarray] = {}
    ks_p: Dict[float, float] = {}
    ratios: Dict[float, float] = {}
    for t in t_list:
        y = np.linalg.solve(factor, q_paths.at(t).T).T
        scaled[t] = y
        var = kernel.square_integral(float(t), window)
        if var <= 0.0:
            raise DomainError(f"∫f(t,s)² ds vanishes at t={t}; nothing to test")
        sd = np.sqrt(var)
        p = min(stats.kstest(y[:, j], "norm", args=(0.0, sd)).pvalue for j in range(y.shape[1]))
        ks_p[float(t)] = float(min(1.0, p * y.shape[1]))
        ratios[float(t)] = float(np.mean(np.var(y, axis=0, ddof=1)) / var)

    first, last = t_list[0], t_list[-1]
    pair = np.hstack([scaled[first], scaled[last]]) if first != last else scaled[first]
    _, mardia_p = mardia_skewness(pair)
    logger.info(f"Normality: KS p={ks_p}, Mardia p={mardia_p:.3g}")
    return NormalityResult(ks_p=ks_p, mardia_p=mardia_p, variance_ratio=ratios)
