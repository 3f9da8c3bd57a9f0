"""Piecewise-constant functions on finite grids.

The inner-product calculus is exact on this class, so it is the only
deterministic-integrand representation the library exposes. Level i applies
on [t_i, t_{i+1}); the function is 0 outside [t_0, t_n].
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .grids import TimeGrid, format_float


@dataclass(frozen=True)
class StepFunction:
    """Right-open piecewise-constant function on its grid, 0 outside."""

    grid: TimeGrid
    levels: np.ndarray

    def __post_init__(self) -> None:
        lv = np.asarray(self.levels, dtype=float).copy()
        if lv.shape != (self.grid.n_intervals,):
            raise ValueError("need one level per grid interval")
        if not np.all(np.isfinite(lv)):
            raise ValueError("levels must be finite")
        lv.flags.writeable = False
        object.__setattr__(self, "levels", lv)

    # -- constructors -------------------------------------------------------

    @classmethod
    def constant(cls, level: float, horizon: float) -> "StepFunction":
        return cls(TimeGrid(np.array([0.0, float(horizon)])), np.array([float(level)]))

    @classmethod
    def indicator(cls, a: float, b: float) -> "StepFunction":
        """Indicator of [a, b) as a step function (a >= 0, b > a)."""
        if a < 0 or b <= a:
            raise ValueError("need 0 <= a < b")
        if a == 0.0:
            return cls(TimeGrid(np.array([0.0, b])), np.array([1.0]))
        return cls(TimeGrid(np.array([0.0, a, b])), np.array([0.0, 1.0]))

    @classmethod
    def from_callable(cls, fn: Callable[[np.ndarray], np.ndarray], grid: TimeGrid) -> "StepFunction":
        """Projection by midpoint sampling on the given grid."""
        mids = 0.5 * (grid.points[:-1] + grid.points[1:])
        return cls(grid, np.asarray(fn(mids), dtype=float))

    # -- evaluation and algebra ---------------------------------------------

    def __call__(self, u: float | np.ndarray) -> np.ndarray | float:
        uu = np.asarray(u, dtype=float)
        idx = np.searchsorted(self.grid.points, uu, side="right") - 1
        inside = (uu >= self.grid.points[0]) & (uu < self.grid.points[-1])
        out = np.where(inside, np.take(self.levels, np.clip(idx, 0, self.levels.size - 1)), 0.0)
        return float(out) if np.isscalar(u) else out

    def scaled(self, c: float) -> "StepFunction":
        return StepFunction(self.grid, c * self.levels)

    def __add__(self, other: "StepFunction") -> "StepFunction":
        pts = refine_breakpoints(self.grid, other.grid)
        return StepFunction(
            TimeGrid(pts), levels_on(self, pts) + levels_on(other, pts)
        )

    def truncated(self, s: float) -> "StepFunction":
        """Restriction to [0, s): this function times the indicator of [0, s)."""
        if s <= 0:
            raise ValueError("truncation point must be positive")
        pts = self.grid.points
        if s >= pts[-1]:
            return self
        k = int(np.searchsorted(pts, s, side="left"))
        new_pts = np.concatenate([pts[:k], [s]])
        return StepFunction(TimeGrid(new_pts), levels_on(self, new_pts))

    @property
    def horizon(self) -> float:
        return self.grid.horizon

    # -- CSV ------------------------------------------------------------------

    def to_csv(self, path: str) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["t_left", "t_right", "level"])
            pts = self.grid.points
            for i, level in enumerate(self.levels):
                writer.writerow(
                    [format_float(pts[i]), format_float(pts[i + 1]), format_float(level)]
                )

    @classmethod
    def from_csv(cls, path: str) -> "StepFunction":
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if header != ["t_left", "t_right", "level"]:
                raise ValueError(f"unexpected step-function CSV header: {header}")
            rows = [(float(a), float(b), float(c)) for a, b, c in reader]
        pts = [rows[0][0]] + [r[1] for r in rows]
        for i, (a, _, _) in enumerate(rows):
            if a != pts[i]:
                raise ValueError("step-function CSV cells must be contiguous")
        return cls(TimeGrid(np.array(pts)), np.array([r[2] for r in rows]))


def refine_breakpoints(*grids: TimeGrid) -> np.ndarray:
    """Sorted union of breakpoints. Distinct floats stay distinct: no
    tolerance-based merging, so nearly-equal points yield thin cells rather
    than silently moved mass."""
    pts = np.unique(np.concatenate([g.points for g in grids]))
    return pts


def levels_on(f: StepFunction, breakpoints: np.ndarray) -> np.ndarray:
    """Levels of f on the cells of a refined breakpoint array."""
    left = breakpoints[:-1]
    return np.asarray(f(left), dtype=float)


def common_refinement(f: StepFunction, g: StepFunction) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(breakpoints, levels of f, levels of g) on the union grid."""
    pts = refine_breakpoints(f.grid, g.grid)
    return pts, levels_on(f, pts), levels_on(g, pts)
