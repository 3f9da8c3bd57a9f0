"""Exact-law fractional Brownian motion on finite grids.

Three samplers, one law: dense Cholesky (any grid), circulant embedding
(uniform grids, O(n log n)), and the Durbin-Levinson recursion (uniform
grids, O(n^2) reference). All consume deterministic replication streams
from `rng.SeedSpec`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmbeddingFailureError, GridMismatchError, SingularCovarianceError
from .grids import SamplePath, TimeGrid
from .rng import SeedSpec

GENERATOR_NAMES = ("cholesky", "circulant", "hosking")

# Jitter schedule for near-singular covariance factorizations: start at
# 1e-12 relative to the largest diagonal entry, escalate by 10x, give up
# beyond 1e-8 relative.
_JITTER_START_REL = 1e-12
_JITTER_MAX_REL = 1e-8

# Circulant eigenvalues more negative than this (relative to the largest
# eigenvalue) mean the embedding genuinely failed; smaller negatives are
# rounding dust and are clamped to zero.
_EMBED_REL_TOL = 1e-9


@dataclass(frozen=True)
class HurstParameter:
    """Hurst exponent in (0, 1); > 1/2 is the long-memory regime."""

    value: float

    def __post_init__(self) -> None:
        v = float(self.value)
        if not 0.0 < v < 1.0:
            raise ValueError(f"Hurst parameter must lie in (0, 1), got {v}")
        object.__setattr__(self, "value", v)

    @property
    def is_long_memory(self) -> bool:
        return self.value > 0.5

    def __float__(self) -> float:
        return self.value


def covariance(s: float, t: float, h: HurstParameter) -> float:
    """R(s, t) = (t^2H + s^2H - |t - s|^2H) / 2, the fBm covariance.

    Reduces to min(s, t) at h = 1/2.
    """
    if s < 0 or t < 0:
        raise ValueError("covariance is defined for nonnegative times")
    two_h = 2.0 * h.value
    return 0.5 * (t**two_h + s**two_h - abs(t - s) ** two_h)


def covariance_grid(points: np.ndarray, h: HurstParameter) -> np.ndarray:
    """Matrix of R(p_i, p_j) over an array of nonnegative times."""
    p = np.asarray(points, dtype=float)
    if np.any(p < 0):
        raise ValueError("covariance is defined for nonnegative times")
    two_h = 2.0 * h.value
    pw = p**two_h
    return 0.5 * (pw[:, None] + pw[None, :] - np.abs(p[:, None] - p[None, :]) ** two_h)


class CovarianceMatrix:
    """Covariance of (W_{t_1}, ..., W_{t_n}) on a grid (t_0 = 0 excluded).

    The Cholesky factor is computed lazily with the jitter schedule and
    cached together with the jitter that was actually needed.
    """

    def __init__(self, grid: TimeGrid, h: HurstParameter):
        self.grid = grid
        self.h = h
        self.matrix = covariance_grid(grid.points[1:], h)
        self._chol: np.ndarray | None = None
        self.jitter_used: float = 0.0

    def cholesky(self) -> np.ndarray:
        """Lower-triangular factor L with L L^T = matrix (+ recorded jitter)."""
        if self._chol is not None:
            return self._chol
        base = self.matrix
        max_diag = float(np.max(np.diag(base)))
        try:
            self._chol = np.linalg.cholesky(base)
            return self._chol
        except np.linalg.LinAlgError:
            pass
        jitter = _JITTER_START_REL * max_diag
        while jitter <= _JITTER_MAX_REL * max_diag * (1.0 + 1e-15):
            try:
                self._chol = np.linalg.cholesky(base + jitter * np.eye(base.shape[0]))
                self.jitter_used = jitter
                return self._chol
            except np.linalg.LinAlgError:
                jitter *= 10.0
        smallest = float(np.linalg.eigvalsh(base)[0])
        raise SingularCovarianceError(
            f"covariance not positive definite within the jitter schedule "
            f"(smallest eigenvalue {smallest:.3e}, largest diagonal {max_diag:.3e})"
        )


# ---------------------------------------------------------------------------
# fractional Gaussian noise machinery (uniform grids)
# ---------------------------------------------------------------------------


def fgn_autocovariance(n_lags: int, h: HurstParameter) -> np.ndarray:
    """Autocovariance gamma(0..n_lags-1) of unit-spacing, unit-variance fGn."""
    k = np.arange(n_lags, dtype=float)
    two_h = 2.0 * h.value
    return 0.5 * ((k + 1.0) ** two_h - 2.0 * k**two_h + np.abs(k - 1.0) ** two_h)


def circulant_eigenvalues(n: int, h: HurstParameter) -> np.ndarray:
    """Eigenvalues of the size-2n circulant embedding of the fGn covariance.

    Raises EmbeddingFailureError on a materially negative eigenvalue; tiny
    negatives (rounding) are clamped to zero. No automatic padding retry.
    """
    gamma = fgn_autocovariance(n + 1, h)
    first_row = np.concatenate([gamma[:-1], gamma[-1:], gamma[-2:0:-1]])
    lam = np.fft.fft(first_row).real
    lam_max = float(np.max(lam))
    lam_min = float(np.min(lam))
    if lam_min < -_EMBED_REL_TOL * lam_max:
        raise EmbeddingFailureError(
            f"circulant embedding has negative eigenvalue {lam_min:.3e} "
            f"(relative {lam_min / lam_max:.3e}) at n={n}, H={h.value}"
        )
    return np.clip(lam, 0.0, None)


def _circulant_fgn(lam: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Map one block (or a matrix of blocks) of 2m standard normals to fGn.

    Draw layout per block of length 2m: z[0] feeds frequency 0, z[2k-1] and
    z[2k] feed frequency k for 1 <= k <= m-1, z[2m-1] feeds frequency m.
    Returns the first m noise values (rows when z is a matrix).
    """
    single = z.ndim == 1
    zz = np.atleast_2d(z)
    big_m = lam.size
    m = big_m // 2
    a = np.zeros((zz.shape[0], big_m), dtype=complex)
    a[:, 0] = np.sqrt(lam[0] / big_m) * zz[:, 0]
    a[:, m] = np.sqrt(lam[m] / big_m) * zz[:, 2 * m - 1]
    k = np.arange(1, m)
    scale = np.sqrt(lam[k] / (2.0 * big_m))
    a[:, k] = scale * (zz[:, 2 * k - 1] + 1j * zz[:, 2 * k])
    a[:, big_m - k] = np.conj(a[:, k])
    noise = np.fft.fft(a, axis=1).real[:, :m]
    return noise[0] if single else noise


def hosking_coefficients(n: int, h: HurstParameter) -> tuple[list[np.ndarray], np.ndarray]:
    """Durbin-Levinson prediction coefficients and innovation variances.

    Sample-independent: phis[k] predicts noise value k from the k previous
    values (most recent first); v[k] is the conditional variance.
    """
    gamma = fgn_autocovariance(n, h)
    v = np.empty(n)
    v[0] = gamma[0]
    phis: list[np.ndarray] = [np.empty(0)]
    phi_prev = np.empty(0)
    for k in range(1, n):
        if k == 1:
            refl = gamma[1] / gamma[0]
        else:
            refl = (gamma[k] - phi_prev @ gamma[k - 1 : 0 : -1]) / v[k - 1]
        phi = np.empty(k)
        phi[:-1] = phi_prev - refl * phi_prev[::-1]
        phi[-1] = refl
        v[k] = v[k - 1] * (1.0 - refl * refl)
        phis.append(phi)
        phi_prev = phi
    return phis, v


def _hosking_fgn(phis: list[np.ndarray], v: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Map standard normals (last axis = time) to unit-spacing fGn."""
    single = z.ndim == 1
    zz = np.atleast_2d(z)
    n = v.size
    x = np.empty_like(zz)
    sig = np.sqrt(v)
    x[:, 0] = sig[0] * zz[:, 0]
    for k in range(1, n):
        # phis[k] weights the history most-recent-first
        x[:, k] = x[:, k - 1 :: -1] @ phis[k] + sig[k] * zz[:, k]
    return x[0] if single else x


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


def _require_uniform(grid: TimeGrid, who: str) -> tuple[int, float]:
    if not grid.is_uniform():
        raise ValueError(f"{who} generator requires a uniform grid")
    return grid.n_intervals, grid.horizon


def generate_path_cholesky(grid: TimeGrid, h: HurstParameter, seed: SeedSpec) -> SamplePath:
    """Exact sampler on an arbitrary grid via the covariance Cholesky factor."""
    cov = CovarianceMatrix(grid, h)
    return _cholesky_path(cov, seed)


def _cholesky_path(cov: CovarianceMatrix, seed: SeedSpec) -> SamplePath:
    z = seed.generator().standard_normal(cov.grid.n_intervals)
    w = cov.cholesky() @ z
    values = np.concatenate([[0.0], w])
    return SamplePath(cov.grid, values, label=f"cholesky/{seed.master_seed}/{seed.stream_index}")


def generate_path_circulant(grid: TimeGrid, h: HurstParameter, seed: SeedSpec) -> SamplePath:
    """Exact sampler on uniform grids via circulant embedding of the noise."""
    n, horizon = _require_uniform(grid, "circulant")
    lam = circulant_eigenvalues(n, h)
    z = seed.generator().standard_normal(2 * n)
    noise = _circulant_fgn(lam, z) * (horizon / n) ** h.value
    values = np.concatenate([[0.0], np.cumsum(noise)])
    return SamplePath(grid, values, label=f"circulant/{seed.master_seed}/{seed.stream_index}")


def generate_path_hosking(grid: TimeGrid, h: HurstParameter, seed: SeedSpec) -> SamplePath:
    """Exact O(n^2) reference sampler via the Durbin-Levinson recursion."""
    n, horizon = _require_uniform(grid, "hosking")
    phis, v = hosking_coefficients(n, h)
    z = seed.generator().standard_normal(n)
    noise = _hosking_fgn(phis, v, z) * (horizon / n) ** h.value
    values = np.concatenate([[0.0], np.cumsum(noise)])
    return SamplePath(grid, values, label=f"hosking/{seed.master_seed}/{seed.stream_index}")


_GENERATORS = {
    "cholesky": generate_path_cholesky,
    "circulant": generate_path_circulant,
    "hosking": generate_path_hosking,
}


def generate_path(method: str, grid: TimeGrid, h: HurstParameter, seed: SeedSpec) -> SamplePath:
    try:
        gen = _GENERATORS[method]
    except KeyError:
        raise ValueError(f"unknown generator {method!r}; pick one of {GENERATOR_NAMES}")
    return gen(grid, h, seed)


def _draw_block_matrix(master_seed: int, n_paths: int, block: int) -> np.ndarray:
    """Row i holds the draws of replication stream i (one block per path)."""
    z = np.empty((n_paths, block))
    for i in range(n_paths):
        z[i] = SeedSpec(master_seed, i).generator().standard_normal(block)
    return z


def ensemble_values(
    method: str,
    grid: TimeGrid,
    h: HurstParameter,
    master_seed: int,
    n_paths: int,
) -> np.ndarray:
    """Matrix of n_paths trajectories (rows), replication i on stream i.

    Same law and same per-stream draws as the single-path generators; the
    linear-algebra transform is batched, so agreement with the per-path ops
    is to float accumulation order, not bitwise.
    """
    if n_paths < 1:
        raise ValueError("need at least one path")
    n = grid.n_intervals
    if method == "cholesky":
        cov = CovarianceMatrix(grid, h)
        chol = cov.cholesky()
        z = _draw_block_matrix(master_seed, n_paths, n)
        w = z @ chol.T
        return np.concatenate([np.zeros((n_paths, 1)), w], axis=1)
    if method == "circulant":
        _, horizon = _require_uniform(grid, "circulant")
        lam = circulant_eigenvalues(n, h)
        z = _draw_block_matrix(master_seed, n_paths, 2 * n)
        noise = _circulant_fgn(lam, z) * (horizon / n) ** h.value
        return np.concatenate([np.zeros((n_paths, 1)), np.cumsum(noise, axis=1)], axis=1)
    if method == "hosking":
        _, horizon = _require_uniform(grid, "hosking")
        phis, v = hosking_coefficients(n, h)
        z = _draw_block_matrix(master_seed, n_paths, n)
        noise = _hosking_fgn(phis, v, z) * (horizon / n) ** h.value
        return np.concatenate([np.zeros((n_paths, 1)), np.cumsum(noise, axis=1)], axis=1)
    raise ValueError(f"unknown generator {method!r}; pick one of {GENERATOR_NAMES}")


def generate_ensemble(
    method: str,
    grid: TimeGrid,
    h: HurstParameter,
    master_seed: int,
    n_paths: int,
) -> list[SamplePath]:
    vals = ensemble_values(method, grid, h, master_seed, n_paths)
    return [
        SamplePath(grid, vals[i], label=f"{method}/{master_seed}/{i}")
        for i in range(n_paths)
    ]


def empirical_covariance(values: np.ndarray | list[SamplePath]) -> tuple[np.ndarray, np.ndarray]:
    """Entrywise sample covariance E[W_i W_j] over t_1..t_n with jackknife stderr.

    Accepts an ensemble matrix (rows = paths, columns = grid points incl. t_0)
    or a list of same-grid SamplePaths. The estimator is a plain mean of
    products, for which the delete-one jackknife variance reduces to
    s^2 / m; implemented in that reduced (vectorized) form.
    """
    if isinstance(values, list):
        if not values:
            raise ValueError("empty ensemble")
        grid = values[0].grid
        for p in values[1:]:
            if p.grid != grid:
                raise GridMismatchError("ensemble paths must share one grid")
        mat = np.stack([p.values for p in values])
    else:
        mat = np.asarray(values, dtype=float)
    if mat.ndim != 2 or mat.shape[0] < 2:
        raise ValueError("need a (n_paths >= 2, n_points) value matrix")
    v = mat[:, 1:]
    m = v.shape[0]
    cov = v.T @ v / m
    sq = v * v
    second = sq.T @ sq / m
    var_products = np.maximum(second - cov * cov, 0.0)
    stderr = np.sqrt(var_products / (m - 1))
    return cov, stderr
