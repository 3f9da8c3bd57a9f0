"""Path generators: law, determinism, and cross-generator agreement."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

import oracles
from fracwick import (
    CovarianceMatrix,
    GridMismatchError,
    HurstParameter,
    SamplePath,
    SeedSpec,
    SingularCovarianceError,
    TimeGrid,
    covariance,
    covariance_grid,
    empirical_covariance,
    ensemble_values,
    generate_ensemble,
    generate_path,
)
from fracwick.fbm import circulant_eigenvalues, fgn_autocovariance

GENERATORS = ["cholesky", "circulant", "hosking"]


class TestCovariance:
    def test_frozen_values(self):
        h = HurstParameter(0.75)
        assert covariance(2.0, 2.0, h) == pytest.approx(2.8284271247461903, rel=1e-15)
        grid = covariance_grid(np.array([0.5, 1.0]), h)
        want = np.array([[0.35355339059327373, 0.5], [0.5, 1.0]])
        np.testing.assert_allclose(grid, want, rtol=1e-15)

    @given(s=st.floats(0.0, 10.0), t=st.floats(0.0, 10.0))
    @settings(max_examples=200, deadline=None)
    def test_reduces_to_min_at_half(self, s, t):
        got = covariance(s, t, HurstParameter(0.5))
        assert got == pytest.approx(min(s, t), abs=1e-12), (
            f"H=1/2 covariance({s},{t}) = {got}, want min = {min(s, t)}"
        )

    @given(
        h=st.floats(0.55, 0.95),
        c=st.floats(0.1, 4.0),
        pts=st.lists(st.floats(0.01, 5.0), min_size=1, max_size=6, unique=True),
    )
    @settings(max_examples=100, deadline=None)
    def test_scaling_self_similarity(self, h, c, pts):
        hp = HurstParameter(h)
        p = np.sort(np.array(pts))
        base = covariance_grid(p, hp)
        scaled = covariance_grid(c * p, hp)
        np.testing.assert_allclose(
            scaled,
            c ** (2.0 * h) * base,
            rtol=1e-10,
            err_msg=f"scaling law broken at h={h}, c={c}",
        )

    def test_symmetry_and_positive_semidefiniteness(self):
        pts = np.array([0.1, 0.35, 0.7, 1.0, 1.9])
        for h in (0.55, 0.7, 0.9):
            m = covariance_grid(pts, HurstParameter(h))
            np.testing.assert_allclose(m, m.T, rtol=1e-15)
            eig = np.linalg.eigvalsh(m)
            assert eig[0] > -1e-12 * eig[-1], f"negative eigenvalue {eig[0]} at H={h}"

    def test_negative_times_rejected(self):
        with pytest.raises(ValueError):
            covariance(-0.1, 1.0, HurstParameter(0.7))
        with pytest.raises(ValueError):
            covariance_grid(np.array([-1.0, 1.0]), HurstParameter(0.7))

    @pytest.mark.parametrize("bad", [0.0, 1.0, -0.3, 1.5])
    def test_hurst_range_enforced(self, bad):
        with pytest.raises(ValueError):
            HurstParameter(bad)

    def test_long_memory_flag(self):
        assert HurstParameter(0.51).is_long_memory
        assert not HurstParameter(0.5 - 1e-9).is_long_memory


class TestCovarianceMatrix:
    def test_cholesky_reconstructs_covariance(self):
        grid = TimeGrid(np.array([0.0, 0.2, 0.5, 0.55, 1.0]))
        cov = CovarianceMatrix(grid, HurstParameter(0.8))
        chol = cov.cholesky()
        np.testing.assert_allclose(chol @ chol.T, cov.matrix, rtol=0, atol=1e-12)
        assert cov.jitter_used == 0.0

    def test_factor_is_cached(self):
        cov = CovarianceMatrix(TimeGrid.uniform(8, 1.0), HurstParameter(0.7))
        assert cov.cholesky() is cov.cholesky()

    def test_singular_beyond_jitter_schedule_raises(self):
        cov = CovarianceMatrix(TimeGrid.uniform(2, 1.0), HurstParameter(0.7))
        # A matrix with eigenvalue -1 stays indefinite under every jitter in
        # the schedule (max 1e-8 * diag), so the factorization must give up.
        cov.matrix = np.array([[1.0, 2.0], [2.0, 1.0]])
        with pytest.raises(SingularCovarianceError, match="positive definite"):
            cov.cholesky()


class TestNoiseMachinery:
    def test_fgn_autocovariance_frozen(self):
        gamma = fgn_autocovariance(3, HurstParameter(0.75))
        assert gamma[0] == 1.0
        # 0.5 (2^{1.5} - 2) at lag 1 for H = 0.75
        assert gamma[1] == pytest.approx(0.41421356237309515, rel=1e-15)
        assert gamma[2] == pytest.approx(
            0.5 * (3.0**1.5 - 2.0 * 2.0**1.5 + 1.0), rel=1e-14
        )

    def test_fgn_autocovariance_positive_for_long_memory(self):
        gamma = fgn_autocovariance(64, HurstParameter(0.7))
        assert np.all(gamma > 0.0), "H > 1/2 increments are positively correlated"

    @pytest.mark.parametrize("h", [0.55, 0.7, 0.9])
    def test_circulant_eigenvalues_nonnegative_mean_one(self, h):
        lam = circulant_eigenvalues(64, HurstParameter(h))
        assert np.all(lam >= 0.0)
        # trace identity: the eigenvalue mean equals gamma(0) = 1
        assert lam.mean() == pytest.approx(1.0, rel=1e-12)

    def test_circulant_eigenvalues_iid_case(self):
        lam = circulant_eigenvalues(16, HurstParameter(0.5))
        np.testing.assert_allclose(lam, 1.0, rtol=1e-12)


class TestGenerators:
    @pytest.mark.parametrize("method", GENERATORS)
    def test_same_seed_is_byte_identical(self, method):
        grid = TimeGrid.uniform(32, 1.0)
        h = HurstParameter(0.7)
        a = generate_path(method, grid, h, SeedSpec(11, 3))
        b = generate_path(method, grid, h, SeedSpec(11, 3))
        assert a.values.tobytes() == b.values.tobytes()

    @pytest.mark.parametrize("method", GENERATORS)
    def test_streams_differ(self, method):
        grid = TimeGrid.uniform(16, 1.0)
        h = HurstParameter(0.7)
        a = generate_path(method, grid, h, SeedSpec(11, 0))
        b = generate_path(method, grid, h, SeedSpec(11, 1))
        assert not np.array_equal(a.values, b.values)

    @pytest.mark.parametrize("method", GENERATORS)
    def test_paths_start_at_zero(self, method):
        path = generate_path(method, TimeGrid.uniform(8, 1.0), HurstParameter(0.6), SeedSpec(0))
        assert path.values[0] == 0.0

    @pytest.mark.parametrize("method", GENERATORS)
    def test_ensemble_matches_per_stream_paths(self, method):
        grid = TimeGrid.uniform(16, 1.0)
        h = HurstParameter(0.75)
        vals = ensemble_values(method, grid, h, 5, 4)
        for i in range(4):
            single = generate_path(method, grid, h, SeedSpec(5, i))
            np.testing.assert_allclose(
                vals[i],
                single.values,
                rtol=1e-12,
                atol=1e-14,
                err_msg=f"{method} ensemble row {i} drifts from its stream path",
            )

    def test_unknown_method_rejected(self):
        with pytest.raises(ValueError, match="unknown generator"):
            generate_path("fft", TimeGrid.uniform(4, 1.0), HurstParameter(0.7), SeedSpec(0))

    @pytest.mark.parametrize("method", ["circulant", "hosking"])
    def test_uniform_grid_required(self, method):
        grid = TimeGrid(np.array([0.0, 0.4, 1.0]))
        with pytest.raises(ValueError, match="uniform"):
            generate_path(method, grid, HurstParameter(0.7), SeedSpec(0))

    def test_cholesky_accepts_irregular_grid(self):
        grid = TimeGrid(np.array([0.0, 0.4, 0.45, 1.0]))
        path = generate_path("cholesky", grid, HurstParameter(0.7), SeedSpec(0))
        assert path.values.shape == (4,)

    @pytest.mark.parametrize("method", GENERATORS)
    def test_brownian_increments_are_standard_normal(self, method):
        # At H = 1/2 the increments over a uniform grid are iid N(0, dt).
        grid = TimeGrid.uniform(64, 1.0)
        vals = ensemble_values(method, grid, HurstParameter(0.5), 202, 200)
        incs = np.diff(vals, axis=1).ravel() / np.sqrt(1.0 / 64.0)
        _, p = stats.kstest(incs, "norm")
        assert p > 0.01, f"{method} H=1/2 increments fail KS: p = {p:.4f}"

    @pytest.mark.parametrize(
        "pair", [("cholesky", "circulant"), ("cholesky", "hosking")]
    )
    def test_cross_generator_terminal_law(self, pair):
        grid = TimeGrid.uniform(32, 1.0)
        h = HurstParameter(0.8)
        x = ensemble_values(pair[0], grid, h, 31, 400)[:, -1]
        y = ensemble_values(pair[1], grid, h, 32, 400)[:, -1]
        p = oracles.energy_permutation_pvalue(x, y, n_perm=199, seed=1)
        assert p > 0.01, f"{pair} terminal-value energy test: p = {p:.4f}"

    def test_generate_ensemble_wraps_values(self):
        grid = TimeGrid.uniform(8, 1.0)
        paths = generate_ensemble("circulant", grid, HurstParameter(0.7), 3, 5)
        assert len(paths) == 5
        vals = ensemble_values("circulant", grid, HurstParameter(0.7), 3, 5)
        for i, p in enumerate(paths):
            assert p.grid == grid
            np.testing.assert_array_equal(p.values, vals[i])


class TestEmpiricalCovariance:
    def test_drops_time_zero_column(self):
        grid = TimeGrid.uniform(4, 1.0)
        paths = generate_ensemble("circulant", grid, HurstParameter(0.7), 0, 16)
        cov, stderr = empirical_covariance(paths)
        assert cov.shape == (4, 4) and stderr.shape == (4, 4)

    def test_matches_plain_mean_of_products(self):
        rng = np.random.default_rng(5)
        mat = np.concatenate([np.zeros((30, 1)), rng.normal(size=(30, 3))], axis=1)
        cov, _ = empirical_covariance(mat)
        v = mat[:, 1:]
        np.testing.assert_allclose(cov, v.T @ v / 30.0, rtol=1e-14)

    @given(seed=st.integers(0, 10_000), m=st.integers(3, 40), n=st.integers(1, 4))
    @settings(max_examples=40, deadline=None)
    def test_jackknife_reduces_to_delete_one(self, seed, m, n):
        rng = np.random.default_rng(seed)
        mat = np.concatenate([np.zeros((m, 1)), rng.normal(size=(m, n))], axis=1)
        _, stderr = empirical_covariance(mat)
        v = mat[:, 1:]
        for i in range(n):
            for j in range(n):
                want = oracles.jackknife_delete_one(v[:, i] * v[:, j])
                assert stderr[i, j] == pytest.approx(want, rel=1e-10, abs=1e-15), (
                    f"jackknife mismatch at entry ({i},{j}): "
                    f"{stderr[i, j]} vs delete-one {want}"
                )

    def test_mixed_grids_rejected(self):
        a = SamplePath(TimeGrid.uniform(2, 1.0), np.zeros(3))
        b = SamplePath(TimeGrid.uniform(3, 1.0), np.zeros(4))
        with pytest.raises(GridMismatchError):
            empirical_covariance([a, b])

    def test_single_path_rejected(self):
        with pytest.raises(ValueError):
            empirical_covariance(np.zeros((1, 5)))
