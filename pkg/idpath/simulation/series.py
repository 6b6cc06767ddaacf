"""
Truncated shot noise series for X_t = ∫ f(t,s) dL_s.

The principal path keeps the arrivals Γ_k ≤ ℓ·m with times T_k uniform on the
window of length ℓ; the band samplers reuse the same sum over a different
index band (Q) or time set (R).
"""

from dataclasses import replace
from typing import List, Literal, Optional, Sequence
import logging

import numpy as np

from idpath.errors import DomainError, KernelUnboundedError
from idpath.kernels.base import Interval, Kernel
from idpath.levy.representation import LevyRepresentation
from idpath.settings import settings
from idpath.simulation.params import GridSpec, PathBatch, PathMeta, SamplePath, TruncationParams

logger = logging.getLogger(__name__)

Centering = Literal["truncated", "full", "none"]

# Grid-by-jump blocks are evaluated in chunks of about this many kernel values.
_BLOCK = 1 << 18


def ensure_simulatable(kernel: Kernel) -> None:
    """Refuse kernels whose regularity rules out simulation."""
    report = kernel.regularity_report()
    if not report.simulatable:
        raise KernelUnboundedError(
            f"{kernel.kernel_id} is not simulatable: bounded={report.bounded}, "
            f"square_integrable={report.square_integrable}"
        )
    if report.bounded is None:
        logger.warning(f"{kernel.kernel_id}: boundedness is inconclusive, simulating anyway")


def poisson_arrivals(rng: np.random.Generator, start: float, stop: float) -> np.ndarray:
    """
    Arrival epochs of a unit-rate Poisson process on (start, stop].

    Epochs are cumulative sums of standard exponentials beginning at `start`;
    the first epoch beyond `stop` ends the draw.
    """
    span = stop - start
    if span <= 0:
        return np.empty(0)
    chunk = int(span + 5.0 * np.sqrt(span) + 16)
    epochs: List[np.ndarray] = []
    last = start
    while True:
        gamma = last + np.cumsum(rng.standard_exponential(chunk))
        done = gamma[-1] > stop
        keep = gamma[gamma <= stop]
        epochs.append(keep)
        if done:
            break
        last = gamma[-1]
    return np.concatenate(epochs)


def uniform_on_pieces(rng: np.random.Generator, pieces: Sequence[Interval], size: int) -> np.ndarray:
    """Uniform draws on a finite union of disjoint intervals."""
    lengths = np.array([p.length for p in pieces])
    u = rng.random(size) * lengths.sum()
    edges = np.cumsum(lengths)
    which = np.minimum(np.searchsorted(edges, u, side="right"), len(pieces) - 1)
    offset = u - np.concatenate([[0.0], edges[:-1]])[which]
    lows = np.array([p.lo for p in pieces])
    return lows[which] + offset


def window_integrals(kernel: Kernel, times: np.ndarray, pieces: Sequence[Interval]) -> np.ndarray:
    """∫_{∪ pieces} f(t_j, s) ds for every grid time."""
    return np.array([sum(kernel.time_integral(float(t), p) for p in pieces) for t in times])


def _accumulate(kernel: Kernel, times: np.ndarray, arrival_times: np.ndarray, jumps: np.ndarray) -> np.ndarray:
    """Σ_k f(t_j, T_k) H_k accumulated in extended precision."""
    n_t, d = times.size, jumps.shape[1]
    total = np.zeros((n_t, d), dtype=np.longdouble)
    if arrival_times.size == 0:
        return total
    step = max(1, _BLOCK // n_t)
    for start in range(0, arrival_times.size, step):
        sl = slice(start, start + step)
        f = kernel.values(times[:, None], arrival_times[None, sl])
        total += f.astype(np.longdouble) @ jumps[sl].astype(np.longdouble)
    return total


def shot_noise_sum(
    rep: LevyRepresentation,
    kernel: Kernel,
    times: np.ndarray,
    pieces: Sequence[Interval],
    r_lo: float,
    r_hi: float,
    rng: np.random.Generator,
    centering: Centering = "truncated",
):
    """
    Sum the series terms with index Γ_k/ℓ in (r_lo, r_hi] and times in `pieces`.

    Args:
        rep: Lévy representation supplying H and the marks.
        kernel: Kernel f(t, s).
        times: Grid times.
        pieces: Disjoint finite intervals making up the time set; ℓ is their total length.
        r_lo, r_hi: Index band.
        rng: Random stream; consumed in the order arrivals, times, marks.
        centering: "truncated" subtracts ∫ f ds · ∫_{r_lo}^{r_hi} E[H 𝟙(‖H‖≤1)] dr for
            centered, non-symmetric representations; "full" subtracts the full mean
            ∫ f ds · ∫ E[H] dr for every representation; "none" subtracts nothing.

    The truncated centering is the compensator of the retained index band taken
    in one deterministic term, Σ_{k≤m} c_k ∫ f ds for integer m with
    c_k = rep.center(k). Subtracting c_k once per retained arrival instead has
    the same mean; the deterministic term is the one the CF oracle describes.

    Returns:
        (values of shape (len(times), d), number of arrivals)
    """
    ell = float(sum(p.length for p in pieces))
    if ell * (r_hi - r_lo) > settings.expected_jump_guard:
        raise DomainError(
            f"ℓ·(band width) = {ell * (r_hi - r_lo):.3g} expected jumps exceeds the guard"
        )
    gamma = poisson_arrivals(rng, ell * r_lo, ell * r_hi)
    n = gamma.size
    arrival_times = uniform_on_pieces(rng, pieces, n)
    marks = rep.sample_marks(rng, n)
    jumps = rep.jumps(gamma / ell, marks) if n else np.zeros((0, rep.dim))

    total = _accumulate(kernel, times, arrival_times, jumps)

    drift: Optional[np.ndarray] = None
    if centering == "full":
        drift = rep.compensator(r_lo, r_hi, cap=np.inf)
    elif centering == "truncated" and rep.centered and not rep.is_symmetric:
        drift = rep.compensator(r_lo, r_hi, cap=1.0)
    if drift is not None and np.any(drift != 0):
        integrals = window_integrals(kernel, times, pieces)
        total -= np.outer(integrals, drift).astype(np.longdouble)

    logger.debug(f"shot noise band ({r_lo:g}, {r_hi:g}] over ℓ={ell:g}: {n} arrivals")
    return np.asarray(total, dtype=float), n


def _zero_path(rep: LevyRepresentation, grid: GridSpec, meta: PathMeta) -> SamplePath:
    return SamplePath(grid=grid.times, values=np.zeros((grid.J + 1, rep.dim)), meta=meta)


def generate_path(
    rep: LevyRepresentation,
    kernel: Kernel,
    trunc: TruncationParams,
    grid: GridSpec,
    rng: np.random.Generator,
) -> SamplePath:
    """
    Principal truncation X_t(m, n) on the grid.

    Arrivals Γ_k ≤ ℓ·m of a unit-rate Poisson process, T_k uniform on the
    window, jumps H(Γ_k/ℓ, U_k), minus the compensator of ν_m integrated
    against f(t, ·) over the window. The kernel's deterministic offset is added.

    Raises:
        KernelUnboundedError for kernels failing boundedness or square integrability.
        DomainError when ℓ·m = 0 or the window leaves the kernel's natural domain.
    """
    ensure_simulatable(kernel)
    if trunc.expected_jumps == 0:
        raise DomainError("generate_path refuses ℓ·m = 0")
    _check_inside(kernel, trunc.window)
    times = grid.times
    values, n = shot_noise_sum(rep, kernel, times, [trunc.window], 0.0, trunc.m, rng)
    values = values + kernel.offset(times)[:, None]
    meta = PathMeta(
        seed=None,
        path_id=None,
        m=trunc.m,
        window=trunc.window.to_list(),
        rep_id=rep.rep_id,
        kernel_id=kernel.kernel_id,
        component="principal",
        n_jumps=n,
    )
    return SamplePath(grid=times, values=values, meta=meta)


def sample_q_band(
    rep: LevyRepresentation,
    kernel: Kernel,
    m: float,
    M: float,
    window: Interval,
    grid: GridSpec,
    rng: np.random.Generator,
    centering: Centering = "truncated",
) -> SamplePath:
    """Finite-M proxy of the small-jump residual Q_t(m): indices Γ_k/ℓ in (m, M]."""
    ensure_simulatable(kernel)
    if M < m or m < 0:
        raise DomainError(f"Q band needs 0 <= m <= M, got m={m}, M={M}")
    _check_inside(kernel, window)
    if not window.is_finite:
        raise DomainError("Q band window must be finite")
    meta = PathMeta(
        seed=None,
        path_id=None,
        m=m,
        window=window.to_list(),
        rep_id=rep.rep_id,
        kernel_id=kernel.kernel_id,
        component="q_band",
        extra={"M": M, "centering": centering},
    )
    if M == m:
        return _zero_path(rep, grid, meta)
    values, n = shot_noise_sum(rep, kernel, grid.times, [window], m, M, rng, centering)
    return SamplePath(grid=grid.times, values=values, meta=_with_count(meta, n))


def sample_r_band(
    rep: LevyRepresentation,
    kernel: Kernel,
    m: float,
    inner: Interval,
    outer: Interval,
    grid: GridSpec,
    rng: np.random.Generator,
) -> SamplePath:
    """
    Time-truncation residual R_t(m, n): retained-size jumps with times in outer \\ inner.

    Parts of the band outside the kernel's natural domain carry f ≡ 0 and are
    dropped before sampling; restricting the Poisson random measure to the
    rest leaves the law unchanged. An empty remainder gives the zero path.
    """
    ensure_simulatable(kernel)
    if not outer.covers(inner):
        raise DomainError(f"R band needs inner {inner.to_list()} inside outer {outer.to_list()}")
    band = outer.minus(inner)
    if any(not p.is_finite for p in band):
        raise DomainError(f"R band {outer.to_list()} \\ {inner.to_list()} must have finite length")
    pieces = [p for p in (b.intersect(kernel.natural_domain) for b in band) if p is not None]
    meta = PathMeta(
        seed=None,
        path_id=None,
        m=m,
        window=None,
        rep_id=rep.rep_id,
        kernel_id=kernel.kernel_id,
        component="r_band",
        extra={"pieces": [p.to_list() for p in pieces]},
    )
    if not pieces or m == 0:
        return _zero_path(rep, grid, meta)
    values, n = shot_noise_sum(rep, kernel, grid.times, pieces, 0.0, m, rng)
    return SamplePath(grid=grid.times, values=values, meta=_with_count(meta, n))


def direct_compound_poisson(rng: np.random.Generator, times: np.ndarray, rate: float = 1.0) -> np.ndarray:
    """
    Exact compound Poisson path with Exp(1) jumps, drawn without the series.

    Jump epochs are those of a rate-`rate` Poisson process on [0, max(times)];
    each jump is −ln V with V uniform.
    """
    horizon = float(np.max(times))
    n = rng.poisson(rate * horizon)
    epochs = rng.uniform(0.0, horizon, size=n)
    sizes = -np.log(rng.random(n))
    return np.array([sizes[epochs <= t].sum() for t in times])


def _check_inside(kernel: Kernel, window: Interval) -> None:
    if not kernel.natural_domain.covers(window):
        raise DomainError(
            f"window {window.to_list()} is not inside the natural domain "
            f"{kernel.natural_domain.to_list()} of {kernel.kernel_id}"
        )


def _with_count(meta: PathMeta, n: int) -> PathMeta:
    return replace(meta, n_jumps=n)


def band_covariance(rep: LevyRepresentation, m: float, M: float) -> np.ndarray:
    """σ_m² − σ_M², the covariance of the H-terms with index in (m, M]."""
    return rep.band_covariance(m, M)


def path_sup(batch: PathBatch) -> np.ndarray:
    """sup_t ‖X_t‖ over the grid for every path in the batch."""
    return np.linalg.norm(batch.values, axis=2).max(axis=1)
