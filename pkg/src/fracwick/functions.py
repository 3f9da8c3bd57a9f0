"""Closed symbolic families of test functions with exact derivatives.

Two families: one-variable cylinder integrands h(x) (polynomials up to
degree 4, exp(ax), sin(ax), cos(ax), and linear combinations thereof), and
space-time fields f(s, x) (bivariate polynomials with time-polynomial
coefficients, plus the same x-only transcendentals). Derivatives are exact
by construction; a finite-difference cross-check lives in the test suite.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import UnsupportedCaseError

MAX_POLY_DEGREE = 4

Array = np.ndarray


@dataclass(frozen=True)
class CylinderFunction:
    """h with exact h' and h''. Build via the classmethod constructors only."""

    value: Callable[[Array], Array]
    deriv: Callable[[Array], Array]
    deriv2: Callable[[Array], Array]
    description: str

    @classmethod
    def polynomial(cls, coeffs) -> "CylinderFunction":
        """h(x) = sum_k coeffs[k] x^k, degree at most 4."""
        c = np.asarray(coeffs, dtype=float)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must be a nonempty 1-d sequence")
        if c.size - 1 > MAX_POLY_DEGREE:
            raise UnsupportedCaseError(
                f"polynomial degree capped at {MAX_POLY_DEGREE}, got {c.size - 1}"
            )
        d1 = np.polynomial.polynomial.polyder(c) if c.size > 1 else np.zeros(1)
        d2 = np.polynomial.polynomial.polyder(c, 2) if c.size > 2 else np.zeros(1)
        pv = np.polynomial.polynomial.polyval
        desc = "poly(" + ",".join(format(v, "g") for v in c) + ")"
        return cls(
            value=lambda x, c=c: pv(x, c),
            deriv=lambda x, d1=d1: pv(x, d1),
            deriv2=lambda x, d2=d2: pv(x, d2),
            description=desc,
        )

    @classmethod
    def monomial(cls, degree: int) -> "CylinderFunction":
        coeffs = np.zeros(degree + 1)
        coeffs[degree] = 1.0
        return cls.polynomial(coeffs)

    @classmethod
    def constant(cls, c: float) -> "CylinderFunction":
        return cls.polynomial([c])

    @classmethod
    def exponential(cls, a: float) -> "CylinderFunction":
        a = float(a)
        return cls(
            value=lambda x: np.exp(a * x),
            deriv=lambda x: a * np.exp(a * x),
            deriv2=lambda x: a * a * np.exp(a * x),
            description=f"exp({a:g}x)",
        )

    @classmethod
    def sine(cls, a: float) -> "CylinderFunction":
        a = float(a)
        return cls(
            value=lambda x: np.sin(a * x),
            deriv=lambda x: a * np.cos(a * x),
            deriv2=lambda x: -a * a * np.sin(a * x),
            description=f"sin({a:g}x)",
        )

    @classmethod
    def cosine(cls, a: float) -> "CylinderFunction":
        a = float(a)
        return cls(
            value=lambda x: np.cos(a * x),
            deriv=lambda x: -a * np.sin(a * x),
            deriv2=lambda x: -a * a * np.cos(a * x),
            description=f"cos({a:g}x)",
        )

    @classmethod
    def combination(cls, weights, functions) -> "CylinderFunction":
        """Exact linear combination sum_k w_k f_k of family members."""
        w = [float(v) for v in weights]
        fs = list(functions)
        if len(w) != len(fs):
            raise ValueError("one weight per function")
        desc = " + ".join(f"{wk:g}*{fk.description}" for wk, fk in zip(w, fs))
        return cls(
            value=lambda x: sum(wk * fk.value(x) for wk, fk in zip(w, fs)),
            deriv=lambda x: sum(wk * fk.deriv(x) for wk, fk in zip(w, fs)),
            deriv2=lambda x: sum(wk * fk.deriv2(x) for wk, fk in zip(w, fs)),
            description=desc,
        )


@dataclass(frozen=True)
class SpaceTimeFunction:
    """f(s, x) with exact partials in s and x.

    Kinds: bivariate polynomial (coeff[m, k] multiplies s^m x^k, x-degree
    at most 4) or x-only exp/sin/cos. The s-antiderivative of df/ds with x
    frozen is f(t1, x) - f(t0, x), which the residual harnesses use for
    exact per-cell time integration.
    """

    value: Callable[[Array, Array], Array]
    dt: Callable[[Array, Array], Array]
    dx: Callable[[Array, Array], Array]
    dxx: Callable[[Array, Array], Array]
    description: str
    time_dependent: bool = True

    @classmethod
    def polynomial(cls, coeff) -> "SpaceTimeFunction":
        """f(s, x) = sum_{m,k} coeff[m, k] s^m x^k."""
        c = np.atleast_2d(np.asarray(coeff, dtype=float))
        if c.shape[1] - 1 > MAX_POLY_DEGREE:
            raise UnsupportedCaseError(
                f"x-degree capped at {MAX_POLY_DEGREE}, got {c.shape[1] - 1}"
            )
        pder = np.polynomial.polynomial.polyder
        c_dt = pder(c, 1, axis=0) if c.shape[0] > 1 else np.zeros((1, 1))
        c_dx = pder(c, 1, axis=1) if c.shape[1] > 1 else np.zeros((1, 1))
        c_dxx = pder(c, 2, axis=1) if c.shape[1] > 2 else np.zeros((1, 1))
        pv2 = np.polynomial.polynomial.polyval2d

        def ev(coefs):
            def f(s, x):
                # polyval2d demands equal shapes; the field contract is
                # broadcasting (time row against a path matrix).
                ss, xx = np.broadcast_arrays(
                    np.asarray(s, dtype=float), np.asarray(x, dtype=float)
                )
                return pv2(ss, xx, coefs)

            return f

        return cls(
            value=ev(c),
            dt=ev(c_dt),
            dx=ev(c_dx),
            dxx=ev(c_dxx),
            description=f"poly2d{c.shape}",
            time_dependent=c.shape[0] > 1,
        )

    @classmethod
    def from_cylinder(cls, fn: CylinderFunction) -> "SpaceTimeFunction":
        """Time-independent field from a one-variable family member."""
        zero = lambda s, x: np.zeros(np.broadcast(s, x).shape)
        return cls(
            value=lambda s, x: fn.value(x),
            dt=zero,
            dx=lambda s, x: fn.deriv(x),
            dxx=lambda s, x: fn.deriv2(x),
            description=fn.description,
            time_dependent=False,
        )

    def dt_cell_integral(self, t0: Array, t1: Array, x: Array) -> Array:
        """Exact integral of df/ds over s in [t0, t1] with x frozen."""
        return self.value(t1, x) - self.value(t0, x)


def gaussian_moment(k: int, variance: float) -> float:
    """E[Z^k] for Z ~ N(0, variance): 0 for odd k, (k-1)!! var^(k/2) even."""
    if k < 0:
        raise ValueError("moment order must be >= 0")
    if k % 2 == 1:
        return 0.0
    half = k // 2
    double_fact = 1.0
    for j in range(1, k, 2):
        double_fact *= j
    return double_fact * variance**half
