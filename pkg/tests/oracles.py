"""Independent, test-only oracles used to cross-check the library.

Every helper here recomputes a quantity the library also produces, but by a
deliberately different route (adaptive quadrature instead of closed-form
rectangle algebra, incomplete-gamma integrals instead of step projections,
permutation resampling instead of parametric statistics). Agreement between
the two routes is what the tests assert.
"""

from __future__ import annotations

import numpy as np
from scipy import integrate, special


def phi_rect_quadrature(
    a: float, b: float, c: float, d: float, h: float, tol: float = 1e-9
) -> float:
    """Adaptive quadrature of H(2H-1)|s-t|^{2H-2} over [a,b] x [c,d].

    The kernel has an integrable singularity on the diagonal s = t. The
    inner integral is split at the diagonal and each piece is handled by
    QUADPACK's algebraic-weight rule (quad with weight='alg'), which is
    built for endpoint power singularities; the outer integral is ordinary
    adaptive quadrature split at the diagonal crossings.
    """
    pref = h * (2.0 * h - 1.0)
    expo = 2.0 * h - 2.0

    def power_piece(lo: float, hi: float, s: float) -> float:
        """Integral of |s-t|^expo over [lo, hi]; s may sit on an endpoint."""
        if hi <= lo:
            return 0.0
        if s == lo:
            # integrand (t - lo)^expo: left-end algebraic weight
            val, _ = integrate.quad(
                lambda t: 1.0, lo, hi, weight="alg", wvar=(expo, 0.0), epsabs=tol
            )
        elif s == hi:
            # integrand (hi - t)^expo: right-end algebraic weight
            val, _ = integrate.quad(
                lambda t: 1.0, lo, hi, weight="alg", wvar=(0.0, expo), epsabs=tol
            )
        else:
            # s strictly outside: smooth integrand
            val, _ = integrate.quad(
                lambda t: abs(s - t) ** expo, lo, hi, limit=200, epsabs=tol
            )
        return val

    def inner(s: float) -> float:
        mid = min(max(s, c), d)
        return pref * (power_piece(c, mid, s) + power_piece(mid, d, s))

    outer_pts = [p for p in (c, d) if a < p < b]
    val, _ = integrate.quad(
        inner, a, b, points=outer_pts or None, limit=200, epsabs=tol, epsrel=tol
    )
    return val


def phi_weighted_covariance_integral(horizon: float, h: float) -> float:
    """Closed form of int int R_H(s,t) phi(s,t) ds dt over [0,T]^2.

    This is E of the phi-norm-squared of the frozen integrand s -> W_s, the
    first term of the corrected second-moment identity. Termwise with
    R_H = (t^{2H} + s^{2H} - |t-s|^{2H})/2 and int_0^T phi(s,t) ds =
    H(t^{2H-1} + (T-t)^{2H-1}):
      power terms  -> T^{4H}/4 + H T^{4H} B(2H+1, 2H)   (Beta integral)
      |t-s| term   -> -H(2H-1) T^{4H} / ((4H-1) 4H)
    """
    t4h = horizon ** (4.0 * h)
    return t4h * (
        0.25
        + h * special.beta(2.0 * h + 1.0, 2.0 * h)
        - h * (2.0 * h - 1.0) / ((4.0 * h - 1.0) * 4.0 * h)
    )


def cross_kernel_integral(horizon: float, h: float) -> float:
    """Closed form of int int K(s,t) K(t,s) ds dt over [0,T]^2.

    For the integrand s -> W_s the corrected second-moment identity must
    total E[ (W_T^2 - T^{2H})^2 / 4 ] = T^{4H}/2, so the cross term is
    T^{4H}/2 minus the phi-weighted covariance integral.
    """
    return 0.5 * horizon ** (4.0 * h) - phi_weighted_covariance_integral(horizon, h)


def fou_variance_gammainc(
    lam: float, sigma: float, t: float, h: float, n_quad: int = 20000
) -> float:
    """Variance of the mean-reverting solution via incomplete-gamma integrals.

    With pref = H(2H-1) and a = 2H-1, symmetry of the double integral gives
    Var X_t = 2 pref sigma^2 e^{-2 lam t} int_0^t e^{2 lam u} J(u) du where
    J(u) = int_0^u e^{-lam w} w^{a-1} dw = lam^{-a} Gamma(a) P(a, lam u)
    and P is the regularized lower incomplete gamma function. The outer
    integral is done by high-resolution Simpson quadrature; everything else
    is closed form, so this shares no code path with the step-projection
    oracle it cross-checks. Requires lam > 0.
    """
    if t == 0.0:
        return 0.0
    pref = h * (2.0 * h - 1.0)
    a = 2.0 * h - 1.0
    u = np.linspace(0.0, t, n_quad + 1)
    inner = lam ** (-a) * special.gamma(a) * special.gammainc(a, lam * u)
    outer = integrate.simpson(np.exp(2.0 * lam * u) * inner, x=u)
    return 2.0 * pref * sigma * sigma * np.exp(-2.0 * lam * t) * outer


def energy_distance(x: np.ndarray, y: np.ndarray) -> float:
    """Two-sample energy distance for 1-d samples."""
    xy = np.abs(x[:, None] - y[None, :]).mean()
    xx = np.abs(x[:, None] - x[None, :]).mean()
    yy = np.abs(y[:, None] - y[None, :]).mean()
    return 2.0 * xy - xx - yy


def energy_permutation_pvalue(
    x: np.ndarray, y: np.ndarray, n_perm: int = 499, seed: int = 0
) -> float:
    """Permutation p-value for the two-sample energy distance.

    The pooled pairwise-distance matrix is computed once. With label vector
    b (1 on the x side) the pair sums reduce to quadratic forms in D, so a
    permutation costs one matrix-vector product instead of a re-slice:
      S_xb = b' D b,  S_yb = (1-b)' D (1-b),  S_xy = b' D (1-b).
    """
    nx, ny = x.size, y.size
    pooled = np.concatenate([x, y])
    m = pooled.size
    dist = np.abs(pooled[:, None] - pooled[None, :])
    row_sums = dist.sum(axis=1)
    total = float(row_sums.sum())

    def stat(mask: np.ndarray) -> float:
        db = dist @ mask
        s_xx = float(mask @ db)
        s_x_all = float(row_sums @ mask)
        s_xy = s_x_all - s_xx
        s_yy = total - 2.0 * s_x_all + s_xx
        return 2.0 * s_xy / (nx * ny) - s_xx / (nx * nx) - s_yy / (ny * ny)

    base = np.zeros(m)
    base[:nx] = 1.0
    observed = stat(base)
    rng = np.random.default_rng(seed)
    hits = 0
    for _ in range(n_perm):
        if stat(rng.permutation(base)) >= observed:
            hits += 1
    return (hits + 1.0) / (n_perm + 1.0)


def jackknife_delete_one(values: np.ndarray) -> float:
    """Literal delete-one jackknife stderr of the sample mean (O(m^2) loop)."""
    m = values.size
    leave_out = np.array(
        [np.mean(np.delete(values, i)) for i in range(m)], dtype=float
    )
    center = leave_out.mean()
    return float(np.sqrt((m - 1.0) / m * np.sum((leave_out - center) ** 2)))
