"""Independent brute-force oracles used to freeze expected values.

These deliberately avoid the library's closed forms: every minimum here is a
dense grid search over the relevant low-dimensional slice.
"""

import numpy as np


def proxlinear_model_objective(y, x, a, b, alpha):
    """alpha |c + <v, y - x>| + 0.5 ||y - x||^2 for the phase-retrieval sample."""
    u = float(a @ x)
    c = u * u - b
    v = 2.0 * u * a
    return alpha * abs(c + v @ (y - x)) + 0.5 * float((y - x) @ (y - x))


def grid_min_proxlinear(x, a, b, alpha, points=100001):
    """Dense 1-D grid search of the prox-linear model along the data direction.

    The objective separates across span(v) and its complement, and the
    quadratic term pins the complement at x, so searching y = x + t v_hat is
    exact up to grid resolution.
    """
    u = float(a @ x)
    c = u * u - b
    v = 2.0 * u * a
    vn = np.linalg.norm(v)
    if vn == 0.0:
        return abs(c)
    radius = alpha * vn + abs(c) / vn + 1.0
    t = np.linspace(-radius, radius, points)
    vals = alpha * np.abs(c + vn * t) + 0.5 * t * t
    return float(vals.min())


def grid_min_canonical(x0, a, b, points=100001):
    """Grid minimum of |b + <a, y>| + 0.5 ||y - x0||^2 along the data direction."""
    an = np.linalg.norm(a)
    if an == 0.0:
        return abs(b)
    radius = an + abs(float(x0 @ a) + b) / an + 1.0
    t = np.linspace(-radius, radius, points)
    vals = np.abs(b + float(a @ x0) + an * t) + 0.5 * t * t
    return float(vals.min())


def psi_scalar(w, u0, b, penalty):
    t = u0 + w
    return np.abs(t * t - b) + 0.5 * penalty * w * w


def grid_argmin_prox_scalar(u0, b, penalty, lo=-10.0, hi=10.0, points=100001, w_max=None):
    w = np.linspace(lo, hi, points)
    if w_max is not None:
        w = w[np.abs(w) <= w_max]
        w = np.concatenate([w, [-w_max, w_max]])
    vals = psi_scalar(w, u0, b, penalty)
    return float(w[np.argmin(vals)]), float(vals.min())


def subproblem_grid_min_2d(C, r, alpha, lo=-2.0, hi=2.0, points=400):
    """Grid minimum of (1/n)||C z + r||_1 + (1/(2 alpha))||z||^2 over [lo, hi]^2."""
    n = C.shape[0]
    g = np.linspace(lo, hi, points)
    z0, z1 = np.meshgrid(g, g, indexing="ij")
    z = np.stack([z0.ravel(), z1.ravel()])  # 2 x points^2
    vals = np.abs(C @ z + r[:, None]).sum(axis=0) / n + (z**2).sum(axis=0) / (2 * alpha)
    return float(vals.min())
