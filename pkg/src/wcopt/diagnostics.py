"""Numerical verification of the theory-facing objects.

Checks, by fuzzing over random probes:

* the gradient-mapping bound ||G_alpha(x; s)|| <= ||G(x; s)||, where
  G_alpha(x; s) = (x - x+)/alpha and G is the chosen subgradient of
  f(.; s) + phi;
* the model conditions: value match at y = x, midpoint convexity, the
  subgradient certificate at y = x, and the quadratic lower bound with
  delta = 2 ||a||^2;
* piecewise-linear interpolation of iterate paths at times t_k = sum alpha_i;
* summability of the sampling-noise series sum_k alpha_k xi_k along a run.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from . import models, problems, schedules
from .rng import Rng, sample_unit_sphere

__all__ = [
    "GradMapReport",
    "ConditionReport",
    "InterpolatedPath",
    "NoiseTailReport",
    "gradient_mapping",
    "check_gradmap_bound",
    "check_model_conditions",
    "interpolate",
    "noise_tail",
    "write_diagnostics_csv",
]


def gradient_mapping(kind, x, sample, alpha, reg=models.Regularizer(), lambda_s=None):
    """G_alpha(x; s) = (x - x+)/alpha for the given model step."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    x = np.asarray(x, dtype=float)
    res = models.step(kind, x, sample, alpha, reg=reg, lambda_s=lambda_s)
    return (x - res.x_next) / alpha


def _chosen_subgradient(x, sample, reg):
    a = np.asarray(sample[0], dtype=float)
    u = float(a @ x)
    c = u * u - float(sample[1])
    return np.sign(c) * (2.0 * u) * a + reg.lam * x


@dataclass(frozen=True)
class GradMapReport:
    kind: str
    probes: int
    gradmap_norms: np.ndarray
    subgrad_norms: np.ndarray

    @property
    def max_violation(self):
        """max ||G_alpha|| - ||G|| over probes; <= 0 when the bound holds."""
        return float(np.max(self.gradmap_norms - self.subgrad_norms))


def _probe_points(inst, probes, seed):
    rng = Rng(seed) if not isinstance(seed, Rng) else seed
    point_rng, scale_rng, idx_rng, alpha_rng = (rng.derive(i) for i in range(4))
    scales = 2.0 * scale_rng.uniform(probes)
    indices = idx_rng.integers(inst.n, size=probes)
    # log-uniform stepsizes spanning [1e-4, 1e2]
    alphas = 10.0 ** (-4.0 + 6.0 * alpha_rng.uniform(probes))
    points = [scales[t] * sample_unit_sphere(inst.d, point_rng) for t in range(probes)]
    return points, indices, alphas


def check_gradmap_bound(inst, kind, probes=1000, seed=0, reg=models.Regularizer()):
    """Fuzz the bound ||G_alpha(x; s)|| <= ||G(x; s)|| over random probes."""
    if probes < 1:
        raise ValueError("probes must be >= 1")
    points, indices, alphas = _probe_points(inst, probes, seed)
    gnorms = np.empty(probes)
    snorms = np.empty(probes)
    for t in range(probes):
        x, i, alpha = points[t], int(indices[t]), float(alphas[t])
        sample = inst.sample(i)
        g_map = gradient_mapping(kind, x, sample, alpha, reg=reg)
        gnorms[t] = np.linalg.norm(g_map)
        snorms[t] = np.linalg.norm(_chosen_subgradient(x, sample, reg))
    return GradMapReport(kind.variant, probes, gnorms, snorms)


@dataclass(frozen=True)
class ConditionReport:
    kind: str
    probes: int
    worst_match: float  # max |f_x(x;s) - f(x;s)|, condition C.(ii)
    worst_convexity: float  # min midpoint-convexity slack, condition C.(i)
    worst_certificate: float  # min subgradient-certificate slack, C.(iii)
    worst_lower_bound: float  # min quadratic lower-bound slack, C.(iv)


def check_model_conditions(inst, kind, probes=1000, radius=0.1, seed=0):
    """Fuzz the four model conditions; reports the worst slack for each.

    The subgradient containment C.(iii) is checked through its testable
    consequence: the model's subgradient at y = x must satisfy the
    weak-convexity lower bound f(y) >= f(x) + <g, y-x> - (lambda/2)||y-x||^2
    with lambda = 2||a||^2.
    """
    if probes < 1:
        raise ValueError("probes must be >= 1")
    points, indices, _ = _probe_points(inst, probes, seed)
    y_rng = Rng(seed).derive(4)
    eps = kind.epsilon if kind.variant == "guarded" else math.inf
    r = min(radius, 0.5 * eps)

    worst_match = 0.0
    worst_convexity = math.inf
    worst_certificate = math.inf
    worst_lower = math.inf
    for t in range(probes):
        x, i = points[t], int(indices[t])
        sample = inst.sample(i)
        a = sample[0]
        lam = 2.0 * float(a @ a)
        f_x = abs(float(a @ x) ** 2 - sample[1])

        worst_match = max(worst_match, abs(models.model_value(kind, x, x, sample) - f_x))

        y1 = x + r * y_rng.uniform() * sample_unit_sphere(inst.d, y_rng)
        y2 = x + r * y_rng.uniform() * sample_unit_sphere(inst.d, y_rng)
        mid = 0.5 * (y1 + y2)
        m1 = models.model_value(kind, x, y1, sample)
        m2 = models.model_value(kind, x, y2, sample)
        worst_convexity = min(
            worst_convexity, 0.5 * (m1 + m2) - models.model_value(kind, x, mid, sample)
        )

        g = _chosen_subgradient(x, sample, models.Regularizer())
        f_y1 = abs(float(a @ y1) ** 2 - sample[1])
        cert = f_y1 - f_x - float(g @ (y1 - x)) + 0.5 * lam * float((y1 - x) @ (y1 - x))
        worst_certificate = min(worst_certificate, cert)

        lower = f_y1 - m1 + 0.5 * lam * float((y1 - x) @ (y1 - x))
        worst_lower = min(worst_lower, lower)
    return ConditionReport(
        kind.variant, probes, worst_match, worst_convexity, worst_certificate, worst_lower
    )


@dataclass(frozen=True)
class InterpolatedPath:
    """Iterates x_k at knot times t_k = sum_{i<=k} alpha_i."""

    times: np.ndarray
    points: np.ndarray  # len(times) x d

    def __post_init__(self):
        if len(self.times) != len(self.points):
            raise ValueError("times and points must align")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("knot times must be strictly increasing")

    @classmethod
    def from_iterates(cls, iterates, stepsizes):
        times = np.concatenate([[0.0], np.cumsum(stepsizes)])
        return cls(times, np.asarray(iterates, dtype=float))


def interpolate(path, t):
    """Piecewise-linear evaluation of the path at time t within its range."""
    times, points = path.times, path.points
    if not times[0] <= t <= times[-1]:
        raise ValueError(f"t={t} outside [{times[0]}, {times[-1]}]")
    k = int(np.searchsorted(times, t, side="right")) - 1
    if k >= len(times) - 1:
        return points[-1].copy()
    if t == times[k]:
        return points[k].copy()
    frac = (t - times[k]) / (times[k + 1] - times[k])
    return points[k] + frac * (points[k + 1] - points[k])


@dataclass(frozen=True)
class NoiseTailReport:
    """Windowed sup norms of partial-sum tails of sum_k alpha_k xi_k."""

    windows: tuple  # (start_iter, end_iter, sup ||S_final - S_m||) per window
    final_norm: float


def noise_tail(inst, kind, schedule, iters, probe_full_mean_every=100, seed=0):
    """Track the martingale noise series along a real run.

    xi_k = G_alpha_k(x_k; s_k) - Gbar, where the exact mean Gbar over all n
    samples is recomputed every probe_full_mean_every iterations and reused
    in between.  Windows split the run into decades [10^t, 10^(t+1)); each
    reports sup_m ||S_final - S_m|| over its iterations.
    """
    if iters < 1:
        raise ValueError("iters must be >= 1")
    if inst.n == 1:
        # the exact mean costs one step; no reason to reuse a stale probe
        probe_full_mean_every = 1
    rng = Rng(seed)
    x = sample_unit_sphere(inst.d, rng.derive(0))
    indices = rng.derive(1).integers(inst.n, size=iters)

    def exact_mean(x, alpha):
        g = np.zeros(inst.d)
        for i in range(inst.n):
            g += gradient_mapping(kind, x, inst.sample(i), alpha)
        return g / inst.n

    partial = np.zeros(inst.d)
    tail_base = np.empty((iters, inst.d))
    gbar = None
    for k in range(1, iters + 1):
        alpha = schedules.stepsize_at(schedule, k)
        if gbar is None or (k - 1) % probe_full_mean_every == 0:
            gbar = exact_mean(x, alpha)
        g_k = gradient_mapping(kind, x, inst.sample(int(indices[k - 1])), alpha)
        partial += alpha * (g_k - gbar)
        tail_base[k - 1] = partial
        x = x - alpha * g_k

    final = tail_base[-1]
    tails = np.linalg.norm(tail_base - final, axis=1)
    windows = []
    lo = 1
    while lo <= iters:
        hi = min(lo * 10 - 1, iters)
        windows.append((lo, hi, float(tails[lo - 1 : hi].max())))
        lo *= 10
    return NoiseTailReport(tuple(windows), float(np.linalg.norm(final)))


def write_diagnostics_csv(path, rows):
    """rows: (check, kind, probes, worst_margin, passed) tuples."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["check", "kind", "probes", "worst_margin", "pass"])
        for check, kind, probes, margin, passed in rows:
            writer.writerow([check, kind, probes, repr(float(margin)), int(passed)])
    return path
