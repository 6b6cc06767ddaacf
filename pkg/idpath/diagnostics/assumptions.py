"""
Executable checks of the simulation assumptions.

2(a) bounded kernel, 2(b) square-integrable kernel, 2(c) vanishing
small-jump tail, 3(a) positive definite σ_m², 3(b) Lindeberg-type condition
on the σ_m⁻¹-scaled small jumps.
"""

from typing import List, Optional, Sequence, Tuple
import logging

import numpy as np

from idpath import streams
from idpath.diagnostics.report import DiagnosticsReport, Verdict
from idpath.errors import DomainError, UnsupportedError
from idpath.kernels.base import Kernel
from idpath.levy.representation import LevyRepresentation
from idpath.settings import settings

logger = logging.getLogger(__name__)

# 3(b) passes once the scaled tail mass at the largest m is below this.
LINDEBERG_THRESHOLD = 1e-3
# Ratio r_max / r_lo of the log-stratified part of the 3(b) integral.
TAIL_SPAN = 1e6


def _from_flag(flag: Optional[bool], method: str, notes=None) -> Verdict:
    status = {True: "pass", False: "fail", None: "inconclusive"}[flag]
    return Verdict(status=status, method=method, notes=notes or {})


def residual_curve(
    rep: LevyRepresentation, m_grid: Sequence[float], seed: int = 0
) -> Tuple[List[np.ndarray], str]:
    """σ_m² along the grid, closed form where available, else the Monte Carlo oracle."""
    try:
        return [np.atleast_2d(rep.residual_covariance(m)) for m in m_grid], "analytic"
    except UnsupportedError:
        logger.info(f"{rep.rep_id}: no closed-form σ_m², using the Monte Carlo oracle")
    curve = [
        rep.residual_covariance_numeric(m, rng=streams.path_stream(seed, i, streams.DIAGNOSTICS)).matrix
        for i, m in enumerate(m_grid)
    ]
    return curve, "numeric"


def _kernel_energy(kernel: Kernel) -> Optional[float]:
    """∫ f(T, s)² ds over the natural domain, None if quadrature fails."""
    try:
        with np.errstate(all="ignore"):
            value = kernel.square_integral(kernel.horizon, kernel.natural_domain)
    except Exception as e:
        logger.warning(f"{kernel.kernel_id}: ∫f² quadrature failed: {e}")
        return None
    return value if np.isfinite(value) else None


def check_2c(
    kernel: Kernel, sigmas: List[np.ndarray], m_grid: Sequence[float], method: str, square_integrable: Verdict
) -> Verdict:
    """tr(σ_m²)·∫f(T,s)²ds must decrease along m."""
    if square_integrable.status == "fail":
        return Verdict(status="fail", method=square_integrable.method, notes={"reason": "2(b) fails"})
    energy = _kernel_energy(kernel)
    if energy is None:
        return Verdict(status="inconclusive", method="numeric", notes={"reason": "∫f² not computable"})
    stats = np.array([float(np.trace(s)) * energy for s in sigmas])
    curve = [{"m": float(m), "statistic": float(v)} for m, v in zip(m_grid, stats)]
    if not np.all(np.isfinite(stats)):
        return Verdict(status="fail", value=float("inf"), method=method, curve=curve)
    monotone = bool(np.all(stats[1:] <= stats[:-1] * (1 + 1e-9) + 1e-300))
    decreasing = stats[-1] < stats[0] or stats[0] == 0.0
    if monotone and decreasing:
        status = "pass"
    else:
        status = "inconclusive" if method == "numeric" else "fail"
    return Verdict(status=status, value=float(stats[-1]), method=method, curve=curve)


def _is_pd(sigma: np.ndarray) -> Tuple[bool, float]:
    eig = np.linalg.eigvalsh(0.5 * (sigma + sigma.T))
    if eig[-1] <= 0.0:
        return False, 0.0
    ratio = float(eig[0] / eig[-1])
    return ratio > settings.pd_tol, ratio


def check_3a(sigmas: List[np.ndarray], m_grid: Sequence[float], method: str) -> Verdict:
    checks = [_is_pd(s) for s in sigmas]
    curve = [{"m": float(m), "eig_ratio": r, "pd": ok} for m, (ok, r) in zip(m_grid, checks)]
    status = "pass" if all(ok for ok, _ in checks) else "fail"
    return Verdict(status=status, value=min(r for _, r in checks), method=method, curve=curve)


def _tail_strata(m: float, n: int, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """
    Stratified indices r on (m, ∞) with integration weights.

    Half the strata are uniform on (m, 2m+1], the rest uniform in log r on
    (2m+1, (2m+1)·TAIL_SPAN].
    """
    half = max(n // 2, 1)
    split = 2.0 * m + 1.0
    u = (np.arange(half) + rng.random(half)) / half
    r_lin = m + u * (split - m)
    w_lin = np.full(half, (split - m) / half)
    v = (np.arange(half) + rng.random(half)) / half
    log_span = np.log(TAIL_SPAN)
    r_log = split * np.exp(v * log_span)
    w_log = r_log * log_span / half
    return np.concatenate([r_lin, r_log]), np.concatenate([w_lin, w_log])


def scaled_tail_mass(
    rep: LevyRepresentation,
    m: float,
    sigma: np.ndarray,
    kappas: Sequence[float],
    rng: np.random.Generator,
    n_samples: int = 20_000,
) -> np.ndarray:
    """∫_m^∞ E[‖σ⁻¹H(r,U)‖² 𝟙(‖σ⁻¹H(r,U)‖ > κ)] dr for each κ, σ the Cholesky factor of σ_m²."""
    factor = np.linalg.cholesky(sigma)
    r, w = _tail_strata(m, n_samples, rng)
    h = rep.jumps(r, rep.sample_marks(rng, r.size))
    scaled = np.linalg.solve(factor, h.T).T
    sq = np.sum(scaled**2, axis=1)
    norm = np.sqrt(sq)
    return np.array([float(np.sum(w * sq * (norm > k))) for k in kappas])


def check_3b(
    rep: LevyRepresentation,
    sigmas: List[np.ndarray],
    m_grid: Sequence[float],
    kappa_grid: Sequence[float],
    seed: int = 0,
    n_samples: int = 20_000,
) -> Verdict:
    curve = []
    last: Optional[np.ndarray] = None
    for i, (m, sigma) in enumerate(zip(m_grid, sigmas)):
        ok, _ = _is_pd(sigma)
        if not ok:
            return Verdict(
                status="inconclusive",
                method="numeric",
                curve=curve,
                notes={"reason": f"σ_m² is not positive definite at m={m}"},
            )
        rng = streams.path_stream(seed, 1000 + i, streams.DIAGNOSTICS)
        last = scaled_tail_mass(rep, m, sigma, kappa_grid, rng, n_samples)
        curve.extend({"m": float(m), "kappa": float(k), "estimate": float(e)} for k, e in zip(kappa_grid, last))
    value = float(np.max(last))
    status = "pass" if value < LINDEBERG_THRESHOLD else "fail"
    return Verdict(status=status, value=value, method="numeric", curve=curve)


def check_assumptions(
    rep: LevyRepresentation,
    kernel: Kernel,
    m_grid: Sequence[float],
    kappa_grid: Sequence[float],
    seed: int = 0,
    n_samples: int = 20_000,
) -> DiagnosticsReport:
    """
    Verdicts on Assumptions 2(a–c) and 3(a–b) for a representation and kernel.

    Args:
        rep: Lévy representation.
        kernel: Kernel f(t, s).
        m_grid: Increasing positive truncation levels.
        kappa_grid: Positive thresholds for the Lindeberg-type check.
        seed: Seed of the Monte Carlo sub-estimators.
        n_samples: Draws per m for the 3(b) estimate.

    Returns:
        A DiagnosticsReport; failures are verdicts, never exceptions.
    """
    m_grid = [float(m) for m in m_grid]
    kappa_grid = [float(k) for k in kappa_grid]
    if not m_grid or any(m <= 0 for m in m_grid) or any(b <= a for a, b in zip(m_grid, m_grid[1:])):
        raise DomainError(f"m_grid must be positive and strictly increasing, got {m_grid}")
    if not kappa_grid or any(k <= 0 for k in kappa_grid):
        raise DomainError(f"kappa_grid must be positive, got {kappa_grid}")

    logger.info(f"Checking assumptions for {rep.rep_id} with {kernel.kernel_id}")
    reg = kernel.regularity_report()
    a2a = _from_flag(reg.bounded, reg.method, reg.notes)
    a2b = _from_flag(reg.square_integrable, reg.method)

    sigmas, method = residual_curve(rep, m_grid, seed)
    a2c = check_2c(kernel, sigmas, m_grid, method, a2b)
    a3a = check_3a(sigmas, m_grid, method)
    a3b = check_3b(rep, sigmas, m_grid, kappa_grid, seed, n_samples)

    report = DiagnosticsReport(
        rep_id=rep.rep_id,
        kernel_id=kernel.kernel_id,
        assumption_2a=a2a,
        assumption_2b=a2b,
        assumption_2c=a2c,
        assumption_3a=a3a,
        assumption_3b=a3b,
        regularity_c1=[float(c) if np.isfinite(c) else None for c in reg.c1],
        extra={"regularity": reg.to_dict(), "m_grid": m_grid, "kappa_grid": kappa_grid},
    )
    logger.info(
        f"Assumptions: 2a={a2a.status} 2b={a2b.status} 2c={a2c.status} "
        f"3a={a3a.status} 3b={a3b.status}"
    )
    return report
