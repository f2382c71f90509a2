"""One-step solvers for the model-based update on a single phase-retrieval sample.

Each step solves x+ = argmin_y f_x(y; s) + phi(y) + (1/(2 alpha)) ||y - x||^2
exactly, for one of four local convex models of f(y; s) = |<a,y>^2 - b|:

* subgradient:  f(x;s) + <g, y - x> with g the chosen subgradient
* prox-linear:  |c(x;s) + <grad c(x;s), y - x>| (linearize c, keep h = |.|)
* prox-point:   f(y;s) + (lambda_s / 2) ||y - x||^2
* guarded:      prox-point restricted to the ball ||y - x|| <= epsilon

The prox-linear step has a closed form (clamped one-dimensional multiplier);
the proximal-point steps reduce exactly to a scalar problem along the data
direction, solved by candidate enumeration over the two quadratic branches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ModelKind",
    "Regularizer",
    "StepResult",
    "step_subgradient",
    "proxlinear_canonical",
    "step_proxlinear",
    "prox_scalar",
    "step_proxpoint",
    "step_guarded",
    "step",
    "model_value",
]


@dataclass(frozen=True)
class ModelKind:
    """Which local convex model a step uses."""

    variant: str  # 'subgradient' | 'prox_linear' | 'prox_point' | 'guarded'
    epsilon: float = 1.0  # trust ball radius, guarded variant only

    def __post_init__(self):
        if self.variant not in ("subgradient", "prox_linear", "prox_point", "guarded"):
            raise ValueError(f"unknown model variant {self.variant!r}")
        if self.variant == "guarded" and self.epsilon <= 0:
            raise ValueError("guarded model needs epsilon > 0")

    @classmethod
    def subgradient(cls):
        return cls("subgradient")

    @classmethod
    def prox_linear(cls):
        return cls("prox_linear")

    @classmethod
    def prox_point(cls):
        return cls("prox_point")

    @classmethod
    def guarded(cls, epsilon=1.0):
        return cls("guarded", epsilon=float(epsilon))


@dataclass(frozen=True)
class Regularizer:
    """Ridge regularizer phi(x) = (lam/2) ||x||^2; lam = 0 means phi = 0."""

    lam: float = 0.0

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("ridge coefficient must be nonnegative")

    def value(self, x):
        return 0.0 if self.lam == 0.0 else 0.5 * self.lam * float(x @ x)


@dataclass(frozen=True)
class StepResult:
    x_next: np.ndarray
    model_decrease: float  # f_x(x;s)+phi(x) - f_x(x+;s) - phi(x+), >= 0 by optimality


def _check_finite(*arrays):
    for arr in arrays:
        if not np.all(np.isfinite(arr)):
            raise ValueError("nonfinite input to model step")


def _sample_parts(x, sample):
    a, b = sample
    a = np.asarray(a, dtype=float)
    x = np.asarray(x, dtype=float)
    u = float(a @ x)
    return x, a, float(b), u


def step_subgradient(x, sample, alpha, reg=Regularizer()):
    """Subgradient model step, exact also under ridge regularization.

    phi = 0:        x+ = x - alpha g
    phi ridge(lam): x+ = x/(1 + alpha lam) - alpha g/(1 + alpha lam)
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    x, a, b, u = _sample_parts(x, sample)
    _check_finite(x, a, (b, alpha))
    c = u * u - b
    g = np.sign(c) * (2.0 * u) * a
    x_next = (x - alpha * g) / (1.0 + alpha * reg.lam)
    f_x = abs(c)
    model_at = f_x + reg.value(x)
    model_next = f_x + float(g @ (x_next - x)) + reg.value(x_next)
    return StepResult(x_next, model_at - model_next)


def proxlinear_canonical(x0, a, b):
    """argmin_y |b + <a, y>| + (1/2) ||y - x0||^2 in closed form.

    The solution is y = x0 - clamp(mu) a with multiplier
    mu = (<x0, a> + b) / ||a||^2 projected onto [-1, 1].  A zero data vector
    makes the absolute term constant and returns x0.
    """
    x0 = np.asarray(x0, dtype=float)
    a = np.asarray(a, dtype=float)
    an2 = float(a @ a)
    if an2 == 0.0:
        return x0.copy()
    mu = (float(x0 @ a) + b) / an2
    return x0 - min(1.0, max(-1.0, mu)) * a


def step_proxlinear(x, sample, alpha):
    """Stochastic prox-linear step.

    Minimizes alpha |c + <v, y - x>| + (1/2)||y - x||^2 with v = 2<a,x> a,
    c = <a,x>^2 - b; rescaling the absolute term by alpha puts it in the
    canonical form solved by proxlinear_canonical (data vector alpha v,
    offset alpha c - <alpha v, x>).  When <a,x> = 0 the linearized model is
    constant and x+ = x.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    x, a, b, u = _sample_parts(x, sample)
    _check_finite(x, a, (b, alpha))
    c = u * u - b
    v = (2.0 * u) * a
    if float(v @ v) == 0.0:
        return StepResult(x.copy(), 0.0)
    av = alpha * v
    x_next = proxlinear_canonical(x, av, alpha * c - float(av @ x))
    model_next = abs(c + float(v @ (x_next - x)))
    return StepResult(x_next, abs(c) - model_next)


def _psi(w, u0, b, penalty):
    t = u0 + w
    return abs(t * t - b) + 0.5 * penalty * w * w


def prox_scalar(u0, b, w_penalty, w_max=None):
    """argmin_w |(u0 + w)^2 - b| + (w_penalty/2) w^2, by candidate enumeration.

    Candidates: the stationary points of the two smooth quadratic branches,
    the kinks w = +-sqrt(b) - u0 (when b >= 0), and w = 0; with w_max set,
    candidates are clipped to [-w_max, w_max] and the endpoints added.  The
    global minimizer is always among these, so enumeration is exact.  Ties
    break toward smaller |w|.
    """
    if w_penalty <= 0:
        raise ValueError("w_penalty must be positive")
    if not (math.isfinite(u0) and math.isfinite(b) and math.isfinite(w_penalty)):
        raise ValueError("nonfinite input to prox_scalar")
    p = float(w_penalty)
    cands = [0.0, -2.0 * u0 / (2.0 + p)]
    if p != 2.0:
        cands.append(2.0 * u0 / (p - 2.0))
    if b >= 0.0:
        rb = math.sqrt(b)
        cands.extend((rb - u0, -rb - u0))
    if w_max is not None:
        cands = [w for w in cands if abs(w) <= w_max]
        cands.extend((w_max, -w_max))
    best = min(cands, key=lambda w: (_psi(w, u0, b, p), abs(w)))
    return best


def step_proxpoint(x, sample, alpha, lambda_s):
    """Stochastic proximal-point step, exact via the scalar reduction.

    Minimizes |<a,y>^2 - b| + ((lambda_s + 1/alpha)/2) ||y - x||^2.  The
    minimizer moves only along a (out-of-span motion is penalized with no
    objective benefit): y = x + (w / ||a||^2) a with w = <a, y - x>, and w
    solves prox_scalar with u0 = <a,x>, penalty (lambda_s + 1/alpha)/||a||^2.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if lambda_s < 0:
        raise ValueError("lambda_s must be nonnegative")
    return _proxpoint_core(x, sample, alpha, lambda_s, w_max=None)


def step_guarded(x, sample, alpha, lambda_s, epsilon):
    """Guarded proximal-point step: prox-point constrained to ||y - x|| <= epsilon."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if lambda_s < 0:
        raise ValueError("lambda_s must be nonnegative")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    return _proxpoint_core(x, sample, alpha, lambda_s, w_max="eps", epsilon=epsilon)


def _proxpoint_core(x, sample, alpha, lambda_s, w_max, epsilon=None):
    x, a, b, u0 = _sample_parts(x, sample)
    _check_finite(x, a, (b, alpha))
    an2 = float(a @ a)
    if an2 == 0.0:
        return StepResult(x.copy(), 0.0)
    penalty = (lambda_s + 1.0 / alpha) / an2
    wm = epsilon * math.sqrt(an2) if w_max == "eps" else None  # ||y-x|| = |w|/||a||
    w = prox_scalar(u0, b, penalty, w_max=wm)
    x_next = x + (w / an2) * a
    f_at = abs(u0 * u0 - b)
    t = u0 + w
    model_next = abs(t * t - b) + 0.5 * lambda_s * w * w / an2
    return StepResult(x_next, f_at - model_next)


def step(kind, x, sample, alpha, reg=Regularizer(), lambda_s=None):
    """Dispatch one model step for the given kind.

    lambda_s defaults to the sample's weak-convexity constant 2 ||a||^2.
    """
    if kind.variant == "subgradient":
        return step_subgradient(x, sample, alpha, reg)
    if kind.variant == "prox_linear":
        return step_proxlinear(x, sample, alpha)
    a = np.asarray(sample[0], dtype=float)
    if lambda_s is None:
        lambda_s = 2.0 * float(a @ a)
    if kind.variant == "prox_point":
        return step_proxpoint(x, sample, alpha, lambda_s)
    return step_guarded(x, sample, alpha, lambda_s, kind.epsilon)


def model_value(kind, x, y, sample, lambda_s=None):
    """Evaluate the local model f_x(y; s) for the given kind.

    The guarded model returns +inf outside the epsilon-ball around x.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError("x and y must share a shape")
    a = np.asarray(sample[0], dtype=float)
    b = float(sample[1])
    u = float(a @ x)
    c = u * u - b
    if kind.variant == "subgradient":
        g = np.sign(c) * (2.0 * u) * a
        return abs(c) + float(g @ (y - x))
    if kind.variant == "prox_linear":
        return abs(c + float((2.0 * u) * (a @ (y - x))))
    if lambda_s is None:
        lambda_s = 2.0 * float(a @ a)
    dist2 = float((y - x) @ (y - x))
    if kind.variant == "guarded" and dist2 > kind.epsilon**2 * (1.0 + 1e-12):
        return math.inf
    uy = float(a @ y)
    return abs(uy * uy - b) + 0.5 * lambda_s * dist2
