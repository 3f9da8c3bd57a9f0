"""Time grids and grid-indexed sample paths."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import GridMismatchError

# Significant digits used for every CSV float so files round-trip exactly.
CSV_FLOAT_FORMAT = ".17g"


def format_float(x: float) -> str:
    return format(float(x), CSV_FLOAT_FORMAT)


@dataclass(frozen=True)
class TimeGrid:
    """Strictly increasing partition 0 = t_0 < t_1 < ... < t_n of [0, T].

    Immutable; the points array is copied and write-locked at construction.
    """

    points: np.ndarray

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float).copy()
        if pts.ndim != 1 or pts.size < 2:
            raise ValueError("grid needs at least the two points t_0 = 0 and t_1")
        if pts[0] != 0.0:
            raise ValueError("grid must start at t_0 = 0")
        if not np.all(np.diff(pts) > 0.0):
            raise ValueError("grid points must be strictly increasing")
        if not np.all(np.isfinite(pts)):
            raise ValueError("grid points must be finite")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    @classmethod
    def uniform(cls, n: int, horizon: float) -> "TimeGrid":
        """Uniform grid with n intervals on [0, horizon]."""
        if n < 1:
            raise ValueError("need at least one interval")
        if horizon <= 0:
            raise ValueError("horizon must be positive")
        return cls(np.linspace(0.0, float(horizon), n + 1))

    @property
    def n_intervals(self) -> int:
        return self.points.size - 1

    @property
    def horizon(self) -> float:
        return float(self.points[-1])

    @property
    def spacings(self) -> np.ndarray:
        return np.diff(self.points)

    def is_uniform(self, rel_tol: float = 1e-12) -> bool:
        dt = self.spacings
        return bool(np.all(np.abs(dt - dt[0]) <= rel_tol * dt[0]))

    def restriction_indices(self, coarse: "TimeGrid") -> np.ndarray:
        """Indices mapping coarse grid points into this (finer) grid.

        Raises GridMismatchError unless every coarse point is a point of
        this grid (exact float equality; grids are meant to be constructed
        by refinement, not re-derived arithmetic).
        """
        idx = np.searchsorted(self.points, coarse.points)
        ok = (idx < self.points.size) & (self.points[np.minimum(idx, self.points.size - 1)] == coarse.points)
        if not np.all(ok):
            raise GridMismatchError("coarse grid is not a subset of the fine grid")
        return idx

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TimeGrid):
            return NotImplemented
        return self.points.shape == other.points.shape and bool(
            np.all(self.points == other.points)
        )

    def __hash__(self) -> int:
        return hash(self.points.tobytes())


@dataclass(frozen=True)
class SamplePath:
    """One trajectory observed at the points of a grid."""

    grid: TimeGrid
    values: np.ndarray
    label: str = ""

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float).copy()
        if vals.shape != self.grid.points.shape:
            raise GridMismatchError("path needs one value per grid point")
        if not np.all(np.isfinite(vals)):
            raise ValueError("path values must be finite")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def increments(self) -> np.ndarray:
        return np.diff(self.values)

    def restrict(self, coarse: TimeGrid) -> "SamplePath":
        """Restriction onto a sub-grid (exact point matching required)."""
        idx = self.grid.restriction_indices(coarse)
        return SamplePath(coarse, self.values[idx], label=self.label)

    def to_csv(self, path: str) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["t", "value"])
            for t, v in zip(self.grid.points, self.values):
                writer.writerow([format_float(t), format_float(v)])

    @classmethod
    def from_csv(cls, path: str, label: str = "") -> "SamplePath":
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if header != ["t", "value"]:
                raise ValueError(f"unexpected path CSV header: {header}")
            rows = [(float(t), float(v)) for t, v in reader]
        ts, vs = zip(*rows)
        return cls(TimeGrid(np.array(ts)), np.array(vs), label=label)


def write_ensemble_csv(paths: list[SamplePath], out_path: str) -> None:
    """Long-format CSV (replication, t, value) for a list of same-grid paths."""
    if not paths:
        raise ValueError("empty ensemble")
    grid = paths[0].grid
    with open(out_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["replication", "t", "value"])
        for k, p in enumerate(paths):
            if p.grid != grid:
                raise GridMismatchError("ensemble paths must share one grid")
            for t, v in zip(p.grid.points, p.values):
                writer.writerow([k, format_float(t), format_float(v)])
