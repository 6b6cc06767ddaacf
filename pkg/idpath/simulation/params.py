from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence
import logging

import numpy as np

from idpath.errors import DomainError, GridError
from idpath.kernels.base import Interval
from idpath.settings import settings

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TruncationParams:
    """Jump-size level m and time window T_n of the principal truncation X(m, n)."""

    m: float
    window: Interval

    def __post_init__(self):
        if not (np.isfinite(self.m) and self.m >= 0):
            raise DomainError(f"truncation level m must be a nonnegative real, got {self.m}")
        if not self.window.is_finite or self.window.length <= 0:
            raise DomainError(f"window must be a finite interval of positive length, got {self.window}")
        if self.expected_jumps > settings.expected_jump_guard:
            raise DomainError(
                f"ℓ·m = {self.expected_jumps:.3g} expected jumps exceeds the guard "
                f"{settings.expected_jump_guard:.3g}"
            )

    @property
    def length(self) -> float:
        return self.window.length

    @property
    def expected_jumps(self) -> float:
        return self.window.length * self.m


@dataclass(frozen=True)
class GridSpec:
    """Evaluation grid: J uniform steps on [0, T], or an explicit increasing time list."""

    J: int
    T: float = 1.0
    explicit: Optional[Sequence[float]] = None

    def __post_init__(self):
        if int(self.J) != self.J or self.J < 1:
            raise DomainError(f"grid needs J >= 1, got {self.J}")
        if not (np.isfinite(self.T) and self.T > 0):
            raise DomainError(f"grid horizon T must be > 0, got {self.T}")
        if self.explicit is not None:
            times = np.asarray(self.explicit, dtype=float)
            if times.size != self.J + 1:
                raise DomainError(f"explicit grid needs J+1={self.J + 1} times, got {times.size}")
            if np.any(np.diff(times) <= 0):
                raise DomainError("explicit grid times must be strictly increasing")
            if times[0] < 0 or times[-1] > self.T:
                raise DomainError(f"explicit grid times must lie in [0, {self.T}]")

    @classmethod
    def from_times(cls, times: Sequence[float], T: Optional[float] = None) -> "GridSpec":
        times = [float(x) for x in times]
        return cls(J=len(times) - 1, T=T if T is not None else times[-1], explicit=times)

    @property
    def times(self) -> np.ndarray:
        if self.explicit is not None:
            return np.asarray(self.explicit, dtype=float)
        return np.linspace(0.0, self.T, self.J + 1)

    def index_of(self, t: float, tol: float = 1e-12) -> int:
        """Grid index of time t; raises GridError when t is not a grid point."""
        times = self.times
        idx = int(np.argmin(np.abs(times - t)))
        if abs(times[idx] - t) > tol * max(1.0, abs(t)):
            raise GridError(f"t={t} is not on the evaluation grid")
        return idx


@dataclass(frozen=True)
class PathMeta:
    seed: Optional[int]
    path_id: Optional[int]
    m: float
    window: Optional[List[float]]
    rep_id: str
    kernel_id: str
    refined: bool = False
    component: str = "principal"
    n_jumps: int = 0
    extra: Dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class SamplePath:
    """Grid times and the d-dimensional values at each of them, shape (J+1, d)."""

    grid: np.ndarray
    values: np.ndarray
    meta: PathMeta

    def __post_init__(self):
        if self.values.shape[0] != self.grid.shape[0]:
            raise DomainError("path values must have one row per grid time")
        if not np.all(np.isfinite(self.values)):
            raise DomainError(f"non-finite path values for {self.meta.rep_id} / {self.meta.kernel_id}")

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    def with_ids(self, seed: Optional[int], path_id: Optional[int]) -> "SamplePath":
        return replace(self, meta=replace(self.meta, seed=seed, path_id=path_id))


@dataclass(frozen=True)
class PathBatch:
    """Paths sharing a grid, values of shape (n_paths, J+1, d), ordered by path id."""

    grid: np.ndarray
    values: np.ndarray
    metas: List[PathMeta]

    @classmethod
    def from_paths(cls, paths: Sequence[SamplePath]) -> "PathBatch":
        if not paths:
            raise DomainError("a batch needs at least one path")
        grid = paths[0].grid
        for p in paths[1:]:
            if not np.array_equal(p.grid, grid):
                raise DomainError("all paths in a batch must share the grid")
        return cls(grid=grid, values=np.stack([p.values for p in paths]), metas=[p.meta for p in paths])

    @property
    def n_paths(self) -> int:
        return self.values.shape[0]

    @property
    def dim(self) -> int:
        return self.values.shape[2]

    def at(self, t: float) -> np.ndarray:
        """Values at grid time t, shape (n_paths, d)."""
        times = self.grid
        idx = int(np.argmin(np.abs(times - t)))
        if abs(times[idx] - t) > 1e-12 * max(1.0, abs(t)):
            raise GridError(f"t={t} is not on the evaluation grid")
        return self.values[:, idx, :]

    def __add__(self, other: "PathBatch") -> "PathBatch":
        if not np.array_equal(self.grid, other.grid) or self.values.shape != other.values.shape:
            raise DomainError("batches must share grid and shape to be added")
        metas = [replace(a, refined=a.refined or b.refined) for a, b in zip(self.metas, other.metas)]
        return PathBatch(grid=self.grid, values=self.values + other.values, metas=metas)
