"""Monte-Carlo estimates with honest error bars and verdicts.

Aggregation is order-independent: per-replication values are collected by
replication index and reduced with exactly-rounded summation (math.fsum),
so worker count and completion order cannot change a reported digit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# |z| below this is "consistent": under a correct implementation the
# per-check false-alarm probability is below 1e-4 (two-sided normal tail).
Z_THRESHOLD = 4.0

# Degenerate comparisons (stderr exactly 0) happen for deterministic cases,
# where estimate and oracle agree up to float rounding rather than to the
# last bit; gaps below this relative level count as exact.
EXACT_REL_TOL = 1e-12


def fsum(values: np.ndarray) -> float:
    """Exactly-rounded sum; result independent of accumulation order."""
    return math.fsum(np.asarray(values, dtype=float).ravel())


def fmean(values: np.ndarray) -> float:
    v = np.asarray(values, dtype=float).ravel()
    return fsum(v) / v.size


def sample_stderr(values: np.ndarray) -> float:
    """Standard error of the sample mean (ddof = 1)."""
    v = np.asarray(values, dtype=float).ravel()
    m = v.size
    if m < 2:
        raise ValueError("need at least two samples for a standard error")
    mu = fmean(v)
    var = fsum((v - mu) ** 2) / (m - 1)
    return math.sqrt(var / m)


def jackknife_stderr(values: np.ndarray) -> float:
    """Delete-one jackknife stderr of the sample mean.

    For the mean the jackknife variance collapses algebraically to s^2/m;
    evaluated in that reduced form (a property test checks it against an
    explicit delete-one loop).
    """
    return sample_stderr(values)


def variance_stderr(values: np.ndarray) -> float:
    """Large-sample stderr of the sample variance: sqrt((m4 - s^4)/m)."""
    v = np.asarray(values, dtype=float).ravel()
    m = v.size
    if m < 2:
        raise ValueError("need at least two samples")
    mu = fmean(v)
    centered = v - mu
    s2 = fsum(centered**2) / (m - 1)
    m4 = fsum(centered**4) / m
    return math.sqrt(max(m4 - s2 * s2, 0.0) / m)


@dataclass(frozen=True)
class MonteCarloReport:
    """One estimate against one target with a z-score verdict.

    stderr is >= 0; it is exactly 0 only for degenerate inputs (identical
    paired samples), in which case the z-score is defined as 0.
    """

    name: str
    estimate: float
    oracle: float
    stderr: float
    z_score: float
    n_paths: int
    verdict: bool

    @classmethod
    def build(cls, name: str, estimate: float, oracle: float, stderr: float, n_paths: int) -> "MonteCarloReport":
        if stderr < 0 or not np.isfinite(stderr):
            raise ValueError("stderr must be finite and >= 0")
        scale = max(1.0, abs(estimate), abs(oracle))
        if abs(estimate - oracle) <= EXACT_REL_TOL * scale:
            # agreement at float-rounding scale is exact no matter how
            # small the error bar is (deterministic cases hit this)
            z = 0.0
        elif stderr == 0.0:
            z = math.inf
        else:
            z = (estimate - oracle) / stderr
        return cls(
            name=name,
            estimate=float(estimate),
            oracle=float(oracle),
            stderr=float(stderr),
            z_score=float(z),
            n_paths=int(n_paths),
            verdict=bool(abs(z) < Z_THRESHOLD),
        )

    @classmethod
    def from_samples(cls, name: str, samples: np.ndarray, oracle: float) -> "MonteCarloReport":
        """Mean of iid per-path values against a fixed target."""
        s = np.asarray(samples, dtype=float).ravel()
        return cls.build(name, fmean(s), float(oracle), sample_stderr(s), s.size)

    @classmethod
    def from_paired(cls, name: str, lhs: np.ndarray, rhs: np.ndarray) -> "MonteCarloReport":
        """Common-random-number comparison: z-score of the paired differences."""
        a = np.asarray(lhs, dtype=float).ravel()
        b = np.asarray(rhs, dtype=float).ravel()
        if a.shape != b.shape:
            raise ValueError("paired samples must have equal length")
        diff = a - b
        spread = float(np.ptp(diff)) if diff.size else 0.0
        if spread == 0.0:
            # degenerate: every pair differs by the same constant, so the
            # z machinery has nothing to standardize; build() decides
            # whether the constant gap counts as exact.
            return cls.build(name, fmean(a), fmean(b), 0.0, a.size)
        se = sample_stderr(diff)
        est, orc = fmean(a), fmean(b)
        z = fmean(diff) / se
        return cls(
            name=name,
            estimate=est,
            oracle=orc,
            stderr=se,
            z_score=float(z),
            n_paths=a.size,
            verdict=bool(abs(z) < Z_THRESHOLD),
        )
