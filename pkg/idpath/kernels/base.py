from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple
import logging

import numpy as np
from scipy import integrate

from idpath.cache import LRUCache
from idpath.errors import DomainError
from idpath.settings import settings

logger = logging.getLogger(__name__)

# Integrals above this are treated as divergent.
OVERFLOW_GUARD = 1e12


@dataclass(frozen=True)
class Interval:
    """Real interval; endpoints may be infinite. Endpoint inclusion is immaterial here."""

    lo: float
    hi: float

    def __post_init__(self):
        if np.isnan(self.lo) or np.isnan(self.hi) or self.hi < self.lo:
            raise DomainError(f"invalid interval ({self.lo}, {self.hi})")

    @classmethod
    def of(cls, bounds: Sequence[float]) -> "Interval":
        lo, hi = bounds
        return cls(float(lo), float(hi))

    @property
    def length(self) -> float:
        return self.hi - self.lo

    @property
    def is_finite(self) -> bool:
        return bool(np.isfinite(self.lo) and np.isfinite(self.hi))

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def covers(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def intersect(self, other: "Interval") -> Optional["Interval"]:
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if hi <= lo:
            return None
        return Interval(lo, hi)

    def minus(self, inner: "Interval") -> List["Interval"]:
        """Pieces of self outside `inner` with positive length."""
        pieces = []
        if inner.lo > self.lo:
            pieces.append(Interval(self.lo, min(inner.lo, self.hi)))
        if inner.hi < self.hi:
            pieces.append(Interval(max(inner.hi, self.lo), self.hi))
        return [p for p in pieces if p.length > 0]

    def to_list(self) -> List[float]:
        return [self.lo, self.hi]


REAL_LINE = Interval(-np.inf, np.inf)


@dataclass(frozen=True)
class Regularity:
    """
    Regularity metadata of a kernel.

    `bounded` is None when a numeric scan could not decide.
    """

    bounded: Optional[bool]
    square_integrable: Optional[bool]
    c1: Tuple[float, ...]
    split: Optional[Tuple[Interval, Interval]] = None
    method: str = "analytic"
    notes: Dict[str, Any] = field(default_factory=dict)

    @property
    def simulatable(self) -> bool:
        return self.bounded is not False and self.square_integrable is not False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "bounded": self.bounded,
            "square_integrable": self.square_integrable,
            "c1": list(self.c1),
            "split": [p.to_list() for p in self.split] if self.split else None,
            "method": self.method,
        }


class Kernel(ABC):
    """
    Deterministic kernel f(t, s) of the stochastic integral X_t = ∫ f(t,s) dL_s.

    Subclasses implement the vectorized `values(t, s)` (numpy broadcasting)
    plus the closed forms they have; the quadrature defaults below cover the
    rest. Kernels are scalar and act componentwise on d-dimensional jumps.
    """

    type_name: str = ""

    def __init__(self, horizon: float = 1.0):
        if not (np.isfinite(horizon) and horizon > 0):
            raise DomainError(f"kernel horizon T must be > 0, got {horizon}")
        self.horizon = float(horizon)
        self._integral_cache = LRUCache()

    # --- Definition ---

    @abstractmethod
    def values(self, t: np.ndarray, s: np.ndarray) -> np.ndarray:
        """f(t, s) broadcast over numpy arrays."""
        ...

    @abstractmethod
    def support(self, t: float) -> Interval:
        """Interval of s where f(t, ·) may be nonzero."""
        ...

    @property
    @abstractmethod
    def natural_domain(self) -> Interval:
        ...

    @abstractmethod
    def regularity_report(self) -> Regularity:
        ...

    @abstractmethod
    def to_spec(self) -> Dict[str, Any]:
        ...

    @property
    def kernel_id(self) -> str:
        spec = self.to_spec()
        params = ",".join(f"{k}={spec[k]}" for k in sorted(spec) if k != "type")
        return f"{self.type_name}({params})"

    def offset(self, t: np.ndarray) -> np.ndarray:
        """Deterministic part of X_t not driven by L (zero unless the model has one)."""
        return np.zeros_like(np.asarray(t, dtype=float))

    def evaluate(self, t: float, s: float) -> float:
        """f(t, s) for a single pair; t must lie in [0, T]."""
        self.check_time(t)
        return float(self.values(np.asarray(float(t)), np.asarray(float(s))))

    def check_time(self, t: float) -> None:
        """Raise DomainError unless 0 ≤ t ≤ T."""
        if not (0.0 <= t <= self.horizon * (1 + 1e-12)):
            raise DomainError(f"t={t} outside [0, {self.horizon}]")

    def check_window(self, window: Interval) -> None:
        """Raise DomainError unless the window lies inside the natural domain."""
        if not self.natural_domain.covers(window):
            raise DomainError(
                f"window {window.to_list()} is not inside the natural domain "
                f"{self.natural_domain.to_list()} of {self.type_name}"
            )

    # --- Integrals ---

    def breakpoints(self, t1: float, t2: float) -> List[float]:
        """Points where f(t1,·) or f(t2,·) may be non-smooth."""
        return sorted({0.0, float(t1), float(t2)})

    def _quad(self, fn: Callable[[float], float], lo: float, hi: float, points: Sequence[float]) -> float:
        """Adaptive Gauss–Kronrod over [lo, hi] split at interior breakpoints."""
        if hi <= lo:
            return 0.0
        cuts = [lo] + [p for p in points if lo < p < hi] + [hi]
        total = 0.0
        for a, b in zip(cuts[:-1], cuts[1:]):
            val, _ = integrate.quad(
                fn, a, b, epsabs=1e-13, epsrel=settings.quadrature_tol, limit=200
            )
            total += val
        return total

    def time_integral(self, t: float, window: Interval) -> float:
        """∫_window f(t, s) ds."""
        self.check_time(t)
        self.check_window(window)
        key = ("time", float(t), window.lo, window.hi, settings.quadrature_tol)
        cached = self._integral_cache.get(key)
        if cached is not None:
            return cached
        value = self._time_integral(float(t), window)
        self._integral_cache.put(key, value)
        return value

    def _time_integral(self, t: float, window: Interval) -> float:
        region = window.intersect(self.support(t))
        if region is None:
            return 0.0
        return self._quad(
            lambda s: float(self.values(np.asarray(t), np.asarray(s))),
            region.lo,
            region.hi,
            self.breakpoints(t, t),
        )

    def cross_integral(self, t1: float, t2: float, window: Interval) -> float:
        """∫_window f(t1, s) f(t2, s) ds."""
        self.check_time(t1)
        self.check_time(t2)
        self.check_window(window)
        region = window.intersect(self.support(t1))
        region = region.intersect(self.support(t2)) if region else None
        if region is None:
            return 0.0
        return self._quad(
            lambda s: float(
                self.values(np.asarray(t1), np.asarray(s)) * self.values(np.asarray(t2), np.asarray(s))
            ),
            region.lo,
            region.hi,
            self.breakpoints(t1, t2),
        )

    def square_integral(self, t: float, window: Interval) -> float:
        """∫_window f(t, s)² ds."""
        return self.cross_integral(t, t, window)

    def increment_l2(self, t1: float, t2: float, subdomain: Optional[Interval] = None) -> float:
        """
        ∫_subdomain (f(t2,s) − f(t1,s))² ds.

        Args:
            t1, t2: Times with 0 ≤ t1 ≤ t2 ≤ T.
            subdomain: Region of integration; defaults to the natural domain.

        Returns:
            The integral, or inf when it exceeds the overflow guard (the kernel
            is then not square-integrable there).
        """
        if not (0.0 <= t1 <= t2):
            raise DomainError(f"increment_l2 needs 0 <= t1 <= t2, got ({t1}, {t2})")
        self.check_time(t2)
        domain = self.natural_domain if subdomain is None else subdomain
        region = domain.intersect(self.natural_domain)
        if region is None or t1 == t2:
            return 0.0
        value = self._increment_l2(float(t1), float(t2), region)
        if not np.isfinite(value) or value > OVERFLOW_GUARD:
            logger.warning(
                f"{self.kernel_id}: increment integral over {region.to_list()} diverges"
            )
            return float("inf")
        return value

    def _increment_l2(self, t1: float, t2: float, region: Interval) -> float:
        def integrand(s: float) -> float:
            d = self.values(np.asarray(t2), np.asarray(s)) - self.values(np.asarray(t1), np.asarray(s))
            return float(d * d)

        with np.errstate(all="ignore"):
            return self._quad(integrand, region.lo, region.hi, self.breakpoints(t1, t2))


class CallableKernel(Kernel):
    """
    User kernel wrapping a Python callable f(t, s).

    The callable should accept numpy arrays; scalar-only callables are wrapped
    with np.vectorize. Regularity comes from a numeric scan and is heuristic.
    """

    type_name = "callable"

    def __init__(
        self,
        fn: Callable[[Any, Any], Any],
        natural_domain: Interval,
        horizon: float = 1.0,
        name: str = "user",
        support_fn: Optional[Callable[[float], Interval]] = None,
        vectorized: bool = True,
    ):
        super().__init__(horizon)
        self._fn = fn if vectorized else np.vectorize(fn, otypes=[float])
        self._domain = natural_domain
        self._support_fn = support_fn
        self.name = name
        self._regularity: Optional[Regularity] = None

    @property
    def natural_domain(self) -> Interval:
        return self._domain

    def values(self, t: np.ndarray, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        out = np.asarray(self._fn(np.asarray(t, dtype=float), s), dtype=float)
        inside = (s >= self._domain.lo) & (s <= self._domain.hi)
        return np.where(inside, out, 0.0)

    def support(self, t: float) -> Interval:
        return self._support_fn(t) if self._support_fn else self._domain

    def regularity_report(self) -> Regularity:
        if self._regularity is None:
            self._regularity = numeric_regularity_scan(self)
        return self._regularity

    def to_spec(self) -> Dict[str, Any]:
        return {"type": self.type_name, "name": self.name}


def _scan_span(kernel: Kernel) -> Interval:
    """Finite stand-in for the natural domain used by numeric scans."""
    T = kernel.horizon
    dom = kernel.natural_domain
    lo = dom.lo if np.isfinite(dom.lo) else -10.0 * T
    hi = dom.hi if np.isfinite(dom.hi) else 11.0 * T
    return Interval(lo, hi)


def numeric_regularity_scan(
    kernel: Kernel, n_s: int = 10_000, n_t: int = 100, ratio_tol: float = 10.0
) -> Regularity:
    """
    Heuristic regularity scan on an n_t × n_s grid.

    Boundedness fails on non-finite values or values beyond the overflow guard
    and is inconclusive when the sup keeps growing under grid refinement
    (fine-grid sup above `ratio_tol` times the coarse-grid sup). Square
    integrability compares ∫f² over the scan span and over its doubled span.
    c₁ is the log-log slope of the increment integral at t = T/2.
    """
    T = kernel.horizon
    span = _scan_span(kernel)
    t_grid = np.linspace(T / n_t, T, n_t)
    s_grid = np.linspace(span.lo, span.hi, n_s)
    with np.errstate(all="ignore"):
        f = kernel.values(t_grid[:, None], s_grid[None, :])
    finite = np.isfinite(f)
    sup_fine = float(np.max(np.abs(np.where(finite, f, 0.0))))
    sup_coarse = float(np.max(np.abs(np.where(finite, f, 0.0)[:, ::10])))

    bounded: Optional[bool]
    if not finite.all() or sup_fine > OVERFLOW_GUARD:
        bounded = False
    elif sup_coarse > 0 and sup_fine > ratio_tol * sup_coarse:
        bounded = None
    else:
        bounded = True

    ds = s_grid[1] - s_grid[0]
    sq = np.sum(np.where(finite, f, 0.0) ** 2, axis=1) * ds
    wide = Interval(span.lo - span.length, span.hi + span.length).intersect(
        Interval(kernel.natural_domain.lo, kernel.natural_domain.hi)
    )
    s_wide = np.linspace(wide.lo, wide.hi, 2 * n_s)
    with np.errstate(all="ignore"):
        f_wide = kernel.values(np.asarray([T]), s_wide[None, :])[0]
    sq_wide = float(np.sum(np.where(np.isfinite(f_wide), f_wide, 0.0) ** 2) * (s_wide[1] - s_wide[0]))
    square_integrable: Optional[bool]
    if not np.all(np.isfinite(sq)) or sq.max() > OVERFLOW_GUARD:
        square_integrable = False
    elif sq[-1] > 0 and sq_wide > 1.5 * sq[-1]:
        square_integrable = None
    else:
        square_integrable = True

    deltas = np.geomspace(1e-3, 1e-1, 8) * T
    t1 = 0.5 * T
    incs = []
    for d in deltas:
        with np.errstate(all="ignore"):
            diff = kernel.values(np.asarray(min(t1 + d, T)), s_grid) - kernel.values(np.asarray(t1), s_grid)
        incs.append(float(np.sum(np.where(np.isfinite(diff), diff, 0.0) ** 2) * ds))
    incs = np.asarray(incs)
    if np.all(incs > 0):
        c1 = float(np.polyfit(np.log(deltas), np.log(incs), 1)[0])
    else:
        c1 = float("nan")

    logger.info(
        f"Numeric regularity scan of {kernel.kernel_id}: bounded={bounded}, "
        f"square_integrable={square_integrable}, c1~{c1:.3f}"
    )
    return Regularity(
        bounded=bounded,
        square_integrable=square_integrable,
        c1=(c1,),
        method="numeric",
        notes={"sup": sup_fine, "sup_coarse": sup_coarse},
    )
