from typing import Sequence
import logging

import numpy as np
from scipy import stats

from idpath.diagnostics.report import TailEstimate
from idpath.errors import DomainError

logger = logging.getLogger(__name__)

MIN_SAMPLES = 1000


def tail_exponent(sup_samples: Sequence[float], top_fraction: float = 0.05) -> TailEstimate:
    """
    Hill estimate of the power-law tail exponent.

        α̂ = k / Σ_{i≤k} ln(X_(i) / X_(k+1))

    over the k = ⌊top_fraction·n⌋ largest order statistics, with asymptotic
    standard error α̂/√k.

    Raises:
        DomainError for fewer than 1000 samples, top_fraction outside (0.01, 0.2),
        or nonpositive values among the top k+1.
    """
    x = np.asarray(sup_samples, dtype=float).ravel()
    if x.size < MIN_SAMPLES:
        raise DomainError(f"tail_exponent needs at least {MIN_SAMPLES} samples, got {x.size}")
    if not (0.01 < top_fraction < 0.2):
        raise DomainError(f"top_fraction must lie in (0.01, 0.2), got {top_fraction}")
    k = int(np.floor(top_fraction * x.size))
    top = np.sort(x)[::-1][: k + 1]
    if np.any(top <= 0.0):
        raise DomainError("Hill estimator needs positive values among the top order statistics")
    logs = np.log(top[:k]) - np.log(top[k])
    alpha_hat = float(k / np.sum(logs))
    logger.debug(f"Hill estimate {alpha_hat:.4g} from k={k} of n={x.size}")
    return TailEstimate(alpha_hat=alpha_hat, se=alpha_hat / np.sqrt(k), k=k)


def stochastic_order_test(smaller: Sequence[float], larger: Sequence[float]) -> float:
    """One-sided Mann–Whitney p-value for `smaller` being stochastically smaller than `larger`."""
    return float(stats.mannwhitneyu(smaller, larger, alternative="less").pvalue)
