"""Numerical verification of the calculus identities.

Each identity becomes a residual: left side minus the frozen left-endpoint
discretization of the right side, evaluated per path. Deterministic kernel
factors (rectangle integrals of phi, diagonal kernel cells) are exact;
everything random is frozen at left endpoints. Expectations of residuals
are then tested by z-score, pathwise magnitudes by refinement ladders.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import GridMismatchError, UnsupportedCaseError
from .fbm import covariance, ensemble_values
from .functions import CylinderFunction, SpaceTimeFunction
from .grids import SamplePath, TimeGrid
from .mc import MonteCarloReport, fsum
from .phicalc import PhiContext, phi_norm_sq, rect_weight_matrix
from .stepfn import StepFunction
from .wick import (
    _as_matrix,
    _step_levels_on_path,
    diagonal_cell_integrals,
    left_corrections,
)

# Cost cap for convergence ladders: paths times total cells across rungs.
MAX_LADDER_BUDGET = 2**28


# ---------------------------------------------------------------------------
# drives: X = x0 + int a ds + int b dW with deterministic step coefficients
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DriveSpec:
    """Process driven by deterministic drift/diffusion step coefficients."""

    x0: float = 0.0
    drift: float | StepFunction = 0.0
    diffusion: float | StepFunction = 0.0
    label: str = ""


def _cell_levels(coef: float | StepFunction, grid: TimeGrid) -> np.ndarray:
    if isinstance(coef, StepFunction):
        return _step_levels_on_path(coef, grid)
    return np.full(grid.n_intervals, float(coef))


def drive_values(spec: DriveSpec, w: np.ndarray, grid: TimeGrid) -> np.ndarray:
    """Left-endpoint discrete trajectory of the drive along noise rows w."""
    w = np.atleast_2d(w)
    a = _cell_levels(spec.drift, grid)
    b = _cell_levels(spec.diffusion, grid)
    incr = a * grid.spacings + b * np.diff(w, axis=1)
    out = np.empty_like(w)
    out[:, 0] = spec.x0
    np.cumsum(incr, axis=1, out=out[:, 1:])
    out[:, 1:] += spec.x0
    return out


def _lower_kernel(b_levels: np.ndarray, rect: np.ndarray) -> np.ndarray:
    """G_i = sum_{j < i} b_j Rect_{ij}: the exact integral over cell i of the
    phi-derivative of the drive frozen at t_i."""
    return np.tril(rect, -1) @ b_levels


# ---------------------------------------------------------------------------
# change-of-variable residual
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ItoCase:
    """Field f(s, x) composed with the noise integral of a deterministic
    step function a; a = None means the process is the noise itself."""

    f: SpaceTimeFunction
    a: StepFunction | None = None
    label: str = ""


def ito_residuals(
    case: ItoCase,
    paths: list[SamplePath] | np.ndarray,
    ctx: PhiContext,
    grid: TimeGrid | None = None,
) -> np.ndarray:
    """Per-path residual of the change-of-variable identity."""
    w, g = _as_matrix(paths, grid)
    f = case.f
    t = g.points
    dt = g.spacings
    dw = np.diff(w, axis=1)
    if case.a is None:
        a_lv = np.ones(g.n_intervals)
        eta = w
    else:
        a_lv = _step_levels_on_path(case.a, g)
        eta = np.empty_like(w)
        eta[:, 0] = 0.0
        np.cumsum(a_lv * dw, axis=1, out=eta[:, 1:])
    rect = rect_weight_matrix(t, ctx)
    g_kernel = _lower_kernel(a_lv, rect)
    half_cell = 0.5 * dt ** (2.0 * ctx.h)
    diag_cells = g_kernel + a_lv * half_cell

    left_t = t[:-1]
    left_x = eta[:, :-1]
    fx = f.dx(left_t, left_x)
    fxx = f.dxx(left_t, left_x)

    lhs = f.value(t[-1], eta[:, -1]) - f.value(0.0, 0.0)
    noise_term = (fx * (a_lv * dw)).sum(axis=1)
    wick_corr = (fxx * (a_lv * g_kernel)).sum(axis=1)
    drift_term = f.dt_cell_integral(left_t, t[1:], left_x).sum(axis=1)
    curvature_term = (fxx * (a_lv * diag_cells)).sum(axis=1)
    return lhs - (noise_term - wick_corr + drift_term + curvature_term)


def ito_residual_path(case: ItoCase, path: SamplePath, ctx: PhiContext) -> float:
    return float(ito_residuals(case, path.values[None, :], ctx, grid=path.grid)[0])


# ---------------------------------------------------------------------------
# product rule residual
# ---------------------------------------------------------------------------


def product_rule_residuals(
    x_case: DriveSpec,
    y_case: DriveSpec,
    paths: list[SamplePath] | np.ndarray,
    ctx: PhiContext,
    grid: TimeGrid | None = None,
) -> np.ndarray:
    """Per-path residual of d(XY) = X dY + Y dX + cross phi-derivative terms."""
    w, g = _as_matrix(paths, grid)
    t = g.points
    dt = g.spacings
    dw = np.diff(w, axis=1)
    ax, bx = _cell_levels(x_case.drift, g), _cell_levels(x_case.diffusion, g)
    ay, by = _cell_levels(y_case.drift, g), _cell_levels(y_case.diffusion, g)
    x = drive_values(x_case, w, g)
    y = drive_values(y_case, w, g)
    rect = rect_weight_matrix(t, ctx)
    gx = _lower_kernel(bx, rect)
    gy = _lower_kernel(by, rect)
    half_cell = 0.5 * dt ** (2.0 * ctx.h)

    xl, yl = x[:, :-1], y[:, :-1]
    # dW sums are left-endpoint by construction; the ordinary dt integrals
    # use the trapezoid rule, which is exact for the affine family and
    # keeps the deterministic part of the residual at rounding level.
    xm = 0.5 * (x[:, :-1] + x[:, 1:])
    ym = 0.5 * (y[:, :-1] + y[:, 1:])
    x_dy = (xm * (ay * dt)).sum(axis=1) + (xl * (by * dw)).sum(axis=1)
    y_dx = (ym * (ax * dt)).sum(axis=1) + (yl * (bx * dw)).sum(axis=1)
    # With deterministic coefficients the Wick corrections and the cross
    # phi-derivative term are deterministic, identical for every path.
    x_dy_corr = fsum(by * gx)
    y_dx_corr = fsum(bx * gy)
    cross = fsum(bx * (gy + by * half_cell) + by * (gx + bx * half_cell))
    lhs = x[:, -1] * y[:, -1] - x_case.x0 * y_case.x0
    return lhs - (x_dy - x_dy_corr + y_dx - y_dx_corr + cross)


def product_rule_residual_path(
    x_case: DriveSpec, y_case: DriveSpec, path: SamplePath, ctx: PhiContext
) -> float:
    return float(
        product_rule_residuals(x_case, y_case, path.values[None, :], ctx, grid=path.grid)[0]
    )


# ---------------------------------------------------------------------------
# composition (time-dependent field) residual
# ---------------------------------------------------------------------------

# Admissibility conditions of the composition identity, recorded per case
# and never enforced at runtime: the registry cases are designed to satisfy
# them (or to violate one deliberately, which none currently does).
REGULARITY_CONDITIONS: tuple[str, ...] = (
    "field_twice_differentiable_in_x",
    "field_derivatives_continuous_in_t",
    "field_evolution_decomposes_as_drift_plus_noise",
    "field_drift_locally_integrable",
    "field_noise_coefficient_differentiable",
    "process_decomposes_as_drift_plus_noise",
    "process_drift_fourth_moment_integrable",
    "process_noise_coefficient_fourth_moment_integrable",
    "process_phi_derivative_exists",
    "phi_derivative_jointly_integrable",
    "second_derivative_polynomial_growth",
    "noise_coefficient_phi_derivative_integrable",
    "composite_noise_term_integrable",
    "cross_phi_terms_integrable",
    "left_endpoint_sums_converge_in_probability",
    "moment_bounds_uniform_on_horizon",
)


@dataclass(frozen=True)
class WentzellCase:
    """Quadratic-family random field composed with a driven process.

    The field is F_t(x) = f0(x) + g(x) t + h(x) W_t with f0, g, h
    polynomials of degree <= 2, evolving along the same noise that drives
    the process X.
    """

    f0: CylinderFunction
    g: CylinderFunction
    h: CylinderFunction
    drive: DriveSpec
    label: str = ""
    regularity: dict[str, str] | None = None

    @classmethod
    def from_polys(
        cls,
        f0_coeffs,
        g_coeffs,
        h_coeffs,
        drive: DriveSpec,
        label: str = "",
        regularity: dict[str, str] | None = None,
    ) -> "WentzellCase":
        for name, c in (("f0", f0_coeffs), ("g", g_coeffs), ("h", h_coeffs)):
            if len(list(c)) > 3:
                raise UnsupportedCaseError(
                    f"{name} must be a polynomial of degree <= 2 in the field family"
                )
        return cls(
            f0=CylinderFunction.polynomial(f0_coeffs),
            g=CylinderFunction.polynomial(g_coeffs),
            h=CylinderFunction.polynomial(h_coeffs),
            drive=drive,
            label=label,
            regularity=regularity,
        )

    def field_value(self, t, w_t, x):
        return self.f0.value(x) + self.g.value(x) * t + self.h.value(x) * w_t

    def field_dx(self, t, w_t, x):
        return self.f0.deriv(x) + self.g.deriv(x) * t + self.h.deriv(x) * w_t

    def field_dxx(self, t, w_t, x):
        return self.f0.deriv2(x) + self.g.deriv2(x) * t + self.h.deriv2(x) * w_t


def wentzell_residuals(
    case: WentzellCase,
    paths: list[SamplePath] | np.ndarray,
    ctx: PhiContext,
    grid: TimeGrid | None = None,
) -> np.ndarray:
    """Per-path residual of the eight-term composition identity."""
    w, g = _as_matrix(paths, grid)
    t = g.points
    dt = g.spacings
    dw = np.diff(w, axis=1)
    a_lv = _cell_levels(case.drive.drift, g)
    b_lv = _cell_levels(case.drive.diffusion, g)
    x = drive_values(case.drive, w, g)
    rect = rect_weight_matrix(t, ctx)
    gx = _lower_kernel(b_lv, rect)
    half_cell = 0.5 * dt ** (2.0 * ctx.h)
    dx_diag = gx + b_lv * half_cell
    lc = left_corrections(g, ctx)
    diag_cells = diagonal_cell_integrals(g, ctx)

    tl = t[:-1]
    wl = w[:, :-1]
    xl = x[:, :-1]
    f_dx = case.field_dx(tl, wl, xl)
    f_dxx = case.field_dxx(tl, wl, xl)
    h_val = case.h.value(xl)
    h_deriv = case.h.deriv(xl)
    g_val = case.g.value(xl)

    lhs = case.field_value(t[-1], w[:, -1], x[:, -1]) - case.field_value(
        0.0, 0.0, case.drive.x0
    )
    # Ordinary dt integrals use the trapezoid rule (exact for the affine
    # family); only the dW sums are pinned to left endpoints.
    f_dx_right = case.field_dx(t[1:], w[:, 1:], x[:, 1:])
    g_right = case.g.value(x[:, 1:])
    drift_term = (0.5 * (f_dx + f_dx_right) * (a_lv * dt)).sum(axis=1)
    noise_term = (f_dx * (b_lv * dw)).sum(axis=1)
    noise_corr = (b_lv * (h_deriv * lc + f_dxx * gx)).sum(axis=1)
    curvature_term = (f_dxx * (b_lv * dx_diag)).sum(axis=1)
    field_drift_term = (0.5 * (g_val + g_right) * dt).sum(axis=1)
    field_noise_term = (h_val * dw).sum(axis=1)
    field_noise_corr = (h_deriv * gx).sum(axis=1)
    cross_field_term = (h_deriv * (b_lv * diag_cells)).sum(axis=1)
    cross_process_term = (h_deriv * dx_diag).sum(axis=1)
    rhs = (
        drift_term
        + (noise_term - noise_corr)
        + curvature_term
        + field_drift_term
        + (field_noise_term - field_noise_corr)
        + cross_field_term
        + cross_process_term
    )
    return lhs - rhs


def wentzell_residual_path(case: WentzellCase, path: SamplePath, ctx: PhiContext) -> float:
    return float(wentzell_residuals(case, path.values[None, :], ctx, grid=path.grid)[0])


# ---------------------------------------------------------------------------
# change-of-measure check
# ---------------------------------------------------------------------------


def drift_shift_at(g_fn: StepFunction, t: float, ctx: PhiContext) -> float:
    """Integral over [0, t] of (Phi g)(s) ds, exactly, via R differences."""
    pts = g_fn.grid.points
    h = ctx.hurst
    terms = [
        lv * (covariance(t, pts[j + 1], h) - covariance(t, pts[j], h))
        for j, lv in enumerate(g_fn.levels)
    ]
    return fsum(np.array(terms))


def girsanov_check(
    fn: CylinderFunction,
    g_fn: StepFunction,
    paths: list[SamplePath] | np.ndarray,
    ctx: PhiContext,
    grid: TimeGrid | None = None,
    name: str | None = None,
) -> MonteCarloReport:
    """Shifted-path expectation against the reweighted one, common noise.

    Left: fn at W_T + shift(T) with shift the exact antiderivative of the
    kernel transform of g. Right: fn at W_T times the mean-one exponential
    of g. Reported as a paired z-score; g = 0 gives z = 0 exactly.
    """
    w, grd = _as_matrix(paths, grid)
    horizon = grd.horizon
    shift = drift_shift_at(g_fn, horizon, ctx)
    levels = _step_levels_on_path(g_fn, grd)
    norm_sq = phi_norm_sq(g_fn, ctx)
    if norm_sq > 700.0:
        raise ValueError("||g||^2_phi exceeds the exponential overflow guard")
    integrals = (levels * np.diff(w, axis=1)).sum(axis=1)
    eps = np.exp(integrals - 0.5 * norm_sq)
    w_t = w[:, -1]
    lhs = fn.value(w_t + shift)
    rhs = fn.value(w_t) * eps
    label = name or f"girsanov:{fn.description}"
    return MonteCarloReport.from_paired(label, lhs, rhs)


def exponential_mean_report(
    g_fn: StepFunction,
    paths: list[SamplePath] | np.ndarray,
    ctx: PhiContext,
    grid: TimeGrid | None = None,
) -> MonteCarloReport:
    """Sample mean of the exponential functional against its exact mean 1."""
    w, grd = _as_matrix(paths, grid)
    levels = _step_levels_on_path(g_fn, grd)
    norm_sq = phi_norm_sq(g_fn, ctx)
    integrals = (levels * np.diff(w, axis=1)).sum(axis=1)
    eps = np.exp(integrals - 0.5 * norm_sq)
    return MonteCarloReport.from_samples("exponential-mean-one", eps, 1.0)


# ---------------------------------------------------------------------------
# expectation identities with exact right-hand sides
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExpectationIdentity:
    """E[f(W_t)] = f(0) + H int_0^t s^(2H-1) E[f''(W_s)] ds, with the right
    side reduced to a closed form by exact Gaussian moments."""

    fn: CylinderFunction
    rhs: Callable[[float, float], float]  # (t, hurst) -> exact value


def _poly_identity(coeffs) -> ExpectationIdentity:
    c = np.asarray(coeffs, dtype=float)

    def rhs(t: float, h: float) -> float:
        # E[f''(W_s)] is a polynomial in s^2H; integrate s^(2H-1) s^(2Hj)
        # exactly: H * t^(2H(j+1)) / (H (2j + 2)) = t^(2H(j+1)) / (2j + 2).
        total = c[0] if c.size else 0.0
        for k in range(2, c.size):
            # term c_k x^k contributes c_k k(k-1) E[W_s^(k-2)]
            if (k - 2) % 2 == 1:
                continue
            j = (k - 2) // 2
            dfact = 1.0
            for m in range(1, k - 2, 2):
                dfact *= m
            coef = c[k] * k * (k - 1) * dfact
            total += coef * t ** (2.0 * h * (j + 1)) / (2.0 * (j + 1))
        return float(total)

    return ExpectationIdentity(CylinderFunction.polynomial(c), rhs)


IDENTITY_REGISTRY: dict[str, ExpectationIdentity] = {
    "x1": _poly_identity([0.0, 1.0]),
    "x2": _poly_identity([0.0, 0.0, 1.0]),
    "x3": _poly_identity([0.0, 0.0, 0.0, 1.0]),
    "x4": _poly_identity([0.0, 0.0, 0.0, 0.0, 1.0]),
    "exp": ExpectationIdentity(
        CylinderFunction.exponential(1.0),
        lambda t, h: math.exp(0.5 * t ** (2.0 * h)),
    ),
    "cos": ExpectationIdentity(
        CylinderFunction.cosine(1.0),
        lambda t, h: math.exp(-0.5 * t ** (2.0 * h)),
    ),
    "sin": ExpectationIdentity(CylinderFunction.sine(1.0), lambda t, h: 0.0),
}


def expectation_identity_check(
    identity: str,
    t: float,
    paths: list[SamplePath] | np.ndarray,
    ctx: PhiContext,
    grid: TimeGrid | None = None,
) -> MonteCarloReport:
    """z-test of the sampled mean of f(W_t) against the exact moment value."""
    try:
        entry = IDENTITY_REGISTRY[identity]
    except KeyError:
        raise UnsupportedCaseError(
            f"unknown identity {identity!r}; known: {sorted(IDENTITY_REGISTRY)}"
        )
    w, g = _as_matrix(paths, grid)
    pts = g.points
    idx = int(np.searchsorted(pts, t))
    if idx >= pts.size or pts[idx] != t:
        raise GridMismatchError(f"t = {t} is not a grid point")
    samples = entry.fn.value(w[:, idx])
    oracle = entry.rhs(t, ctx.h)
    return MonteCarloReport.from_samples(
        f"moment:{identity}@t={t:g}", samples, oracle
    )


# ---------------------------------------------------------------------------
# refinement ladders
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConvergenceTable:
    """RMS residual per grid size plus the fitted log-log slope."""

    residual_name: str
    grid_sizes: tuple[int, ...]
    rms: tuple[float, ...]
    slope: float
    n_paths: int

    def rows(self) -> list[tuple[int, float]]:
        return list(zip(self.grid_sizes, self.rms))


def _dispatch_residuals(residual_name: str, case, w, ctx, grid) -> np.ndarray:
    if residual_name == "ito":
        return ito_residuals(case, w, ctx, grid=grid)
    if residual_name == "product-rule":
        x_case, y_case = case
        return product_rule_residuals(x_case, y_case, w, ctx, grid=grid)
    if residual_name == "wentzell":
        return wentzell_residuals(case, w, ctx, grid=grid)
    raise UnsupportedCaseError(
        f"unknown residual {residual_name!r}; known: ito, product-rule, wentzell"
    )


def convergence_study(
    residual_name: str,
    case,
    grid_sizes: list[int],
    n_paths: int,
    ctx: PhiContext,
    horizon: float = 1.0,
    master_seed: int = 0,
    generator: str = "circulant",
) -> ConvergenceTable:
    """RMS residual ladder on nested restrictions of one set of fine paths.

    All rungs see restrictions of the same paths sampled at the finest
    grid, so rung-to-rung differences are pure discretization, not noise.
    """
    sizes = sorted(int(n) for n in grid_sizes)
    if len(sizes) < 2:
        raise ValueError("a ladder needs at least two grid sizes")
    if len(set(sizes)) != len(sizes):
        raise ValueError("grid sizes must be distinct")
    n_max = sizes[-1]
    for n in sizes:
        if n_max % n != 0:
            raise ValueError("every grid size must divide the largest one")
    budget = n_paths * sum(sizes)
    if budget > MAX_LADDER_BUDGET:
        raise ValueError(
            f"ladder budget {budget} exceeds the cap {MAX_LADDER_BUDGET} "
            "(paths times total cells); shrink the ladder"
        )
    fine_grid = TimeGrid.uniform(n_max, horizon)
    w_fine = ensemble_values(generator, fine_grid, ctx.hurst, master_seed, n_paths)
    rms: list[float] = []
    for n in sizes:
        stride = n_max // n
        sub = w_fine[:, ::stride]
        sub_grid = TimeGrid(fine_grid.points[::stride])
        res = _dispatch_residuals(residual_name, case, sub, ctx, sub_grid)
        rms.append(math.sqrt(fsum(res * res) / res.size))
    slope = float(np.polyfit(np.log(sizes), np.log(rms), 1)[0])
    name = residual_name if not getattr(case, "label", "") else f"{residual_name}:{case.label}"
    return ConvergenceTable(
        residual_name=name,
        grid_sizes=tuple(sizes),
        rms=tuple(rms),
        slope=slope,
        n_paths=n_paths,
    )


# ---------------------------------------------------------------------------
# case registries
# ---------------------------------------------------------------------------


# Registry cases whose residual has exactly zero expectation on every grid:
# the quadratic compensator telescopes for f = x**2 (any step coefficient a),
# the x1 residual vanishes per path, and odd fields (x3, sin) average to zero
# by the symmetry of the Gaussian drive. The remaining cases (tx2, x4) carry
# a deterministic O(1/n) expectation offset on a fixed grid, so a fixed-grid
# zero-mean test is not a claim they satisfy; they are verified through
# refinement ladders (convergence_study) instead.
ITO_MEAN_ZERO_CASES = ("x1", "x2", "x2-step", "x3", "sin")


def ito_case_registry(horizon: float = 1.0) -> dict[str, ItoCase]:
    """Named change-of-variable cases for the harness and the CLI."""
    halves = StepFunction(
        TimeGrid(np.array([0.0, 0.5 * horizon, horizon])), np.array([1.0, 0.5])
    )
    mono = SpaceTimeFunction.from_cylinder
    cases = {
        "x1": ItoCase(mono(CylinderFunction.monomial(1)), label="x1"),
        "x2": ItoCase(mono(CylinderFunction.monomial(2)), label="x2"),
        "x3": ItoCase(mono(CylinderFunction.monomial(3)), label="x3"),
        "x4": ItoCase(mono(CylinderFunction.monomial(4)), label="x4"),
        "sin": ItoCase(mono(CylinderFunction.sine(1.0)), label="sin"),
        "tx2": ItoCase(
            SpaceTimeFunction.polynomial([[0.0, 0.0, 0.0], [0.0, 0.0, 1.0]]),
            label="tx2",
        ),
        "x2-step": ItoCase(
            mono(CylinderFunction.monomial(2)), a=halves, label="x2-step"
        ),
    }
    return cases


def product_rule_case_registry(
    horizon: float = 1.0,
) -> dict[str, tuple[DriveSpec, DriveSpec]]:
    """Named (X, Y) pairs for the product-rule residual."""
    halves = StepFunction(
        TimeGrid(np.array([0.0, 0.5 * horizon, horizon])), np.array([1.0, 0.5])
    )
    noise = DriveSpec(x0=0.0, drift=0.0, diffusion=1.0, label="noise")
    return {
        "ww": (noise, noise),
        "w-const": (noise, DriveSpec(x0=2.5, drift=0.0, diffusion=0.0, label="const")),
        "affine": (
            DriveSpec(x0=0.3, drift=0.7, diffusion=1.0, label="affine-x"),
            DriveSpec(x0=1.0, drift=-0.2, diffusion=0.5, label="affine-y"),
        ),
        "step": (
            DriveSpec(x0=0.0, drift=halves, diffusion=1.0, label="step-drift"),
            DriveSpec(x0=0.5, drift=0.0, diffusion=halves, label="step-noise"),
        ),
    }


def wentzell_case_registry(horizon: float = 1.0) -> dict[str, WentzellCase]:
    sat = {name: "satisfied" for name in REGULARITY_CONDITIONS}
    na = {name: "n/a" for name in REGULARITY_CONDITIONS}
    return {
        "xw": WentzellCase.from_polys(
            [0.0], [0.0], [0.0, 1.0],
            DriveSpec(x0=0.0, drift=0.0, diffusion=1.0, label="noise"),
            label="xw",
            regularity=sat,
        ),
        "deterministic": WentzellCase.from_polys(
            [1.0, 1.0, 0.5], [0.0], [0.0],
            DriveSpec(x0=0.3, drift=0.7, diffusion=0.0, label="ramp"),
            label="deterministic",
            regularity=na | {"field_twice_differentiable_in_x": "satisfied"},
        ),
        "constant": WentzellCase.from_polys(
            [2.5], [0.0], [0.0],
            DriveSpec(x0=0.0, drift=1.0, diffusion=1.0, label="mixed"),
            label="constant",
            regularity=sat,
        ),
        "quad": WentzellCase.from_polys(
            [0.0, 0.0, 1.0], [0.5, 0.0, 0.0], [0.0, 1.0, 0.0],
            DriveSpec(x0=0.1, drift=0.2, diffusion=0.8, label="affine"),
            label="quad",
            regularity=sat,
        ),
    }


def girsanov_case_registry(horizon: float = 1.0) -> dict[str, tuple[CylinderFunction, StepFunction]]:
    full = StepFunction.constant(1.0, horizon)
    half_level = StepFunction.constant(0.5, horizon)
    return {
        "w": (CylinderFunction.monomial(1), full),
        "w2": (CylinderFunction.monomial(2), full),
        "expw": (CylinderFunction.exponential(1.0), half_level),
        "zero": (CylinderFunction.monomial(1), StepFunction.constant(0.0, horizon)),
    }
