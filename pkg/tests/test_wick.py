"""Wick-Riemann integrals, exponential functionals, second-moment identity."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from fracwick import (
    CylinderFunction,
    GridMismatchError,
    HurstParameter,
    PhiContext,
    SamplePath,
    SeedSpec,
    StepFunction,
    TimeGrid,
    MonteCarloReport,
    ensemble_values,
    exponential_functional,
    generate_path,
    isometry_check,
    phi_norm_sq,
    phi_rect_integral,
    wick_integral_cylinder,
    wick_integral_deterministic,
)
from fracwick.mc import fmean, sample_stderr
from fracwick.wick import cylinder_integral_terms, left_corrections

CTX = PhiContext(HurstParameter(0.75))


class TestDeterministicIntegral:
    def test_hand_computed_sum(self):
        grid = TimeGrid(np.array([0.0, 0.5, 1.0]))
        path = SamplePath(grid, np.array([0.0, 2.0, -1.0]))
        f = StepFunction(grid, np.array([3.0, 10.0]))
        got = wick_integral_deterministic(f, path)
        assert got == pytest.approx(3.0 * 2.0 + 10.0 * (-3.0), rel=1e-15)

    def test_indicator_reads_off_increment(self):
        grid = TimeGrid.uniform(4, 1.0)
        path = SamplePath(grid, np.array([0.0, 1.0, 0.5, 2.0, 2.5]))
        f = StepFunction.indicator(0.25, 0.75)
        assert wick_integral_deterministic(f, path) == pytest.approx(
            2.0 - 1.0, rel=1e-15
        )

    @given(seed=st.integers(0, 10_000), c=st.floats(-4.0, 4.0))
    @settings(max_examples=50, deadline=None)
    def test_linear_in_integrand(self, seed, c):
        rng = np.random.default_rng(seed)
        grid = TimeGrid.uniform(8, 1.0)
        path = SamplePath(grid, np.concatenate([[0.0], rng.normal(size=8)]))
        f = StepFunction(grid, rng.uniform(-1, 1, size=8))
        g = StepFunction(grid, rng.uniform(-1, 1, size=8))
        lhs = wick_integral_deterministic(f.scaled(c) + g, path)
        rhs = c * wick_integral_deterministic(f, path) + wick_integral_deterministic(
            g, path
        )
        assert lhs == pytest.approx(rhs, rel=1e-11, abs=1e-13)

    def test_step_function_on_coarser_grid_is_accepted(self):
        fine = TimeGrid.uniform(8, 1.0)
        path = SamplePath(fine, np.linspace(0.0, 4.0, 9))
        f = StepFunction.constant(2.0, 1.0)
        assert wick_integral_deterministic(f, path) == pytest.approx(8.0, rel=1e-14)


class TestLeftCorrections:
    @pytest.mark.parametrize("h", [0.6, 0.75, 0.9])
    def test_cells_match_rectangle_integrals(self, h):
        # correction_i = integral of phi over [0, t_i] x [t_i, t_{i+1}]
        ctx = PhiContext(HurstParameter(h))
        grid = TimeGrid(np.array([0.0, 0.2, 0.5, 0.8, 1.0]))
        corr = left_corrections(grid, ctx)
        pts = grid.points
        for i in range(grid.n_intervals):
            want = phi_rect_integral(0.0, pts[i], pts[i], pts[i + 1], ctx)
            assert corr[i] == pytest.approx(want, rel=1e-12, abs=1e-15), f"cell {i}"

    def test_first_cell_has_zero_correction(self):
        corr = left_corrections(TimeGrid.uniform(4, 1.0), CTX)
        assert corr[0] == 0.0


class TestCylinderIntegral:
    def test_decomposition_is_exact(self):
        path = generate_path("circulant", TimeGrid.uniform(64, 1.0), CTX.hurst, SeedSpec(1))
        res = wick_integral_cylinder(CylinderFunction.monomial(2), path, CTX)
        assert res.value == res.riemann_part - res.correction_part

    def test_constant_integrand_gives_terminal_value(self):
        path = generate_path("circulant", TimeGrid.uniform(32, 1.0), CTX.hurst, SeedSpec(2))
        res = wick_integral_cylinder(CylinderFunction.constant(1.0), path, CTX)
        assert res.value == pytest.approx(path.values[-1], rel=1e-13)
        assert res.correction_part == 0.0

    def test_identity_integrand_matches_square_formula(self):
        # integral of W dW = (W_T^2 - T^{2H}) / 2 + residual; the per-path
        # residual shrinks under refinement and its RMS at n = 512, H = 0.7
        # stays under 0.02.
        h = HurstParameter(0.7)
        ctx = PhiContext(h)
        grid = TimeGrid.uniform(512, 1.0)
        vals = ensemble_values("circulant", grid, h, 77, 200)
        rho = np.empty(vals.shape[0])
        for p in range(vals.shape[0]):
            path = SamplePath(grid, vals[p])
            res = wick_integral_cylinder(CylinderFunction.monomial(1), path, ctx)
            exact = 0.5 * (vals[p, -1] ** 2 - 1.0)
            rho[p] = res.value - exact
        rms = float(np.sqrt(np.mean(rho**2)))
        assert rms < 0.02, f"identity residual RMS {rms:.4f} >= 0.02 at n=512"

    def test_batched_terms_match_single_path(self):
        grid = TimeGrid.uniform(16, 1.0)
        vals = ensemble_values("circulant", grid, CTX.hurst, 9, 3)
        fn = CylinderFunction.sine(1.5)
        raw, corr = cylinder_integral_terms(fn, vals, grid, CTX)
        for p in range(3):
            res = wick_integral_cylinder(fn, SamplePath(grid, vals[p]), CTX)
            assert raw[p] == pytest.approx(res.riemann_part, rel=1e-12, abs=1e-14)
            assert corr[p] == pytest.approx(res.correction_part, rel=1e-12, abs=1e-14)


class TestExponentialFunctional:
    def test_zero_path_frozen_value(self):
        grid = TimeGrid.uniform(4, 1.0)
        flat = SamplePath(grid, np.zeros(5))
        f = StepFunction.indicator(0.0, 1.0)
        got = exponential_functional(f, flat, CTX)
        assert got == pytest.approx(math.exp(-0.5), rel=1e-13), (
            f"exp(0 - ||f||^2/2) with ||f||^2 = 1 should be {math.exp(-0.5)}"
        )

    def test_mean_one_property(self):
        grid = TimeGrid.uniform(64, 1.0)
        vals = ensemble_values("circulant", grid, CTX.hurst, 404, 4000)
        f = StepFunction.indicator(0.0, 1.0)
        eps = np.array(
            [exponential_functional(f, SamplePath(grid, v), CTX) for v in vals]
        )
        z = (fmean(eps) - 1.0) / sample_stderr(eps)
        assert abs(z) < 4.0, f"mean of the exponential functional: z = {z:.2f}"

    def test_overflow_guard(self):
        f = StepFunction.constant(40.0, 1.0)
        flat = SamplePath(TimeGrid.uniform(2, 1.0), np.zeros(3))
        with pytest.raises(ValueError, match="overflow guard"):
            exponential_functional(f, flat, CTX)

    def test_scale_invariance_in_time_units(self):
        # epsilon(f) depends on the path only through the integral of f dW
        grid = TimeGrid.uniform(8, 1.0)
        path = generate_path("circulant", grid, CTX.hurst, SeedSpec(5))
        f = StepFunction.constant(0.7, 1.0)
        got = exponential_functional(f, path, CTX)
        manual = math.exp(
            0.7 * path.values[-1] - 0.5 * phi_norm_sq(f, CTX)
        )
        assert got == pytest.approx(manual, rel=1e-13)


class TestIsometry:
    def test_step_integrand_report(self):
        grid = TimeGrid.uniform(64, 1.0)
        paths = [
            SamplePath(grid, v)
            for v in ensemble_values("circulant", grid, CTX.hurst, 21, 4000)
        ]
        f = StepFunction(
            TimeGrid(np.array([0.0, 0.25, 1.0])), np.array([1.0, -2.0])
        )
        report = isometry_check(f, paths, CTX)
        assert report.verdict, f"step isometry z = {report.z_score:.2f}"
        assert report.oracle == pytest.approx(phi_norm_sq(f, CTX), rel=1e-13)

    def test_step_breakpoints_must_lie_on_path_grid(self):
        grid = TimeGrid.uniform(64, 1.0)
        paths = [SamplePath(grid, np.zeros(65))]
        f = StepFunction(TimeGrid(np.array([0.0, 0.3, 1.0])), np.array([1.0, -2.0]))
        with pytest.raises(GridMismatchError, match="breakpoints"):
            isometry_check(f, paths, CTX)

    @pytest.mark.parametrize("h", [0.6, 0.75])
    def test_constant_cylinder_matches_variance(self, h):
        ctx = PhiContext(HurstParameter(h))
        grid = TimeGrid.uniform(64, 1.0)
        vals = ensemble_values("circulant", grid, ctx.hurst, 22, 4000)
        report = isometry_check(CylinderFunction.constant(1.0), vals, ctx, grid=grid)
        assert report.verdict, f"H={h}: z = {report.z_score:.2f}"

    @pytest.mark.parametrize("h", [0.6, 0.75])
    def test_linear_cylinder_closed_form(self, h):
        # lhs = (integral of W dW)^2 has mean T^{4H}/2 = 0.5 at T = 1, for
        # every H; the paired rhs carries the frozen-norm and cross pieces
        # whose means are the Beta-form closed values.
        ctx = PhiContext(HurstParameter(h))
        grid = TimeGrid.uniform(128, 1.0)
        vals = ensemble_values("circulant", grid, ctx.hurst, 23, 4000)
        report = isometry_check(CylinderFunction.monomial(1), vals, ctx, grid=grid)
        assert report.verdict, f"H={h}: paired z = {report.z_score:.2f}"

        lhs = np.empty(vals.shape[0])
        for p in range(vals.shape[0]):
            res = wick_integral_cylinder(
                CylinderFunction.monomial(1), SamplePath(grid, vals[p]), ctx
            )
            lhs[p] = res.value**2
        z = (fmean(lhs) - 0.5) / sample_stderr(lhs)
        assert abs(z) < 4.0, f"H={h}: analytic second moment z = {z:.2f}"

    def test_cross_term_closed_forms_back_the_rhs(self):
        # The rhs decomposes as ||frozen||^2_phi + cross; their expectations
        # are the phi-weighted covariance integral and the cross-kernel
        # integral. Check the total against the sum of the two Beta forms.
        h = 0.75
        ctx = PhiContext(HurstParameter(h))
        want = oracles.phi_weighted_covariance_integral(
            1.0, h
        ) + oracles.cross_kernel_integral(1.0, h)
        assert want == pytest.approx(0.5, rel=1e-12), "closed forms must total 0.5"
        grid = TimeGrid.uniform(128, 1.0)
        vals = ensemble_values("circulant", grid, ctx.hurst, 24, 4000)
        lhs = np.empty(vals.shape[0])
        for p in range(vals.shape[0]):
            res = wick_integral_cylinder(
                CylinderFunction.monomial(1), SamplePath(grid, vals[p]), ctx
            )
            lhs[p] = res.value**2
        z = (fmean(lhs) - want) / sample_stderr(lhs)
        assert abs(z) < 4.0, f"second moment vs Beta closed forms: z = {z:.2f}"

    def test_quadratic_cylinder(self):
        grid = TimeGrid.uniform(64, 1.0)
        vals = ensemble_values("circulant", grid, CTX.hurst, 25, 4000)
        report = isometry_check(CylinderFunction.monomial(2), vals, CTX, grid=grid)
        assert report.verdict, f"quadratic integrand z = {report.z_score:.2f}"

    def test_matrix_input_requires_grid(self):
        vals = np.zeros((3, 5))
        with pytest.raises(ValueError, match="grid"):
            isometry_check(CylinderFunction.constant(1.0), vals, CTX)

    def test_mixed_grids_rejected(self):
        a = SamplePath(TimeGrid.uniform(2, 1.0), np.zeros(3))
        b = SamplePath(TimeGrid.uniform(3, 1.0), np.zeros(4))
        with pytest.raises(GridMismatchError):
            isometry_check(CylinderFunction.constant(1.0), [a, b], CTX)

    def test_report_shape(self):
        grid = TimeGrid.uniform(16, 1.0)
        vals = ensemble_values("circulant", grid, CTX.hurst, 26, 500)
        report = isometry_check(
            CylinderFunction.constant(1.0), vals, CTX, grid=grid, name="probe"
        )
        assert isinstance(report, MonteCarloReport)
        assert report.name == "probe"
        assert report.n_paths == 500
