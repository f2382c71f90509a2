"""Polynomially decaying stepsize laws and the pilot-run tuning heuristic."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import models, problems
from .rng import Rng, sample_unit_sphere

__all__ = ["Schedule", "TuningGrid", "stepsize_at", "tune_schedule"]


@dataclass(frozen=True)
class Schedule:
    """Stepsize law alpha_k = alpha0 * k^(-beta), k >= 1."""

    alpha0: float
    beta: float

    def __post_init__(self):
        if self.alpha0 <= 0:
            raise ValueError("alpha0 must be positive")
        # beta = 0.5 is allowed: the stepsize-grid experiment includes it
        if not 0.5 <= self.beta <= 1.0:
            raise ValueError(f"beta must lie in [0.5, 1.0], got {self.beta}")


def stepsize_at(schedule, k):
    """alpha_k = alpha0 * k^(-beta) for iteration k >= 1."""
    if k < 1:
        raise ValueError("iteration index k must be >= 1")
    return schedule.alpha0 * float(k) ** (-schedule.beta)


@dataclass(frozen=True)
class TuningGrid:
    """Grid of (alpha0, beta) pairs scored by short pilot runs.

    Defaults follow the tuning heuristic used in the experiments:
    alpha0 in {1, 10, 100, 1000}, beta in {.6, .7, .8, .9}, pilots of
    3n iterations.
    """

    alpha0_values: tuple = (1.0, 10.0, 100.0, 1000.0)
    beta_values: tuple = (0.6, 0.7, 0.8, 0.9)
    pilot_iters: int | None = None  # None -> 3n at tuning time

    def __post_init__(self):
        if not self.alpha0_values or not self.beta_values:
            raise ValueError("tuning grids must be nonempty")


def tune_schedule(inst, method, grid=TuningGrid(), master_seed=0, reg=models.Regularizer()):
    """Pick the (alpha0, beta) pair whose pilot run reaches the lowest objective.

    All pilots share the initial point and the sample-index stream (common
    random numbers), so selection is a pure function of (instance, method,
    grid, seed).  The score of a pair is the minimum objective observed over
    the pilot, which is robust to end-of-pilot noise; a pilot that produces a
    nonfinite iterate stops early and keeps its best finite score.  Ties
    break toward smaller alpha0, then smaller beta.
    """
    pilot_iters = grid.pilot_iters if grid.pilot_iters is not None else 3 * inst.n
    rng = master_seed if isinstance(master_seed, Rng) else Rng(master_seed)
    x0 = sample_unit_sphere(inst.d, rng.derive(0))
    indices = rng.derive(1).integers(inst.n, size=pilot_iters)

    best = None
    for alpha0 in grid.alpha0_values:
        for beta in grid.beta_values:
            schedule = Schedule(alpha0, beta)
            score = problems.objective(inst, x0)
            x = x0.copy()
            # a diverging pilot overflows before the finiteness check stops it
            with np.errstate(over="ignore", invalid="ignore"):
                for k, i in enumerate(indices, start=1):
                    res = models.step(
                        method, x, inst.sample(i), stepsize_at(schedule, k), reg=reg
                    )
                    x = res.x_next
                    if not np.all(np.isfinite(x)):
                        break
                    score = min(score, problems.objective(inst, x))
            key = (score, alpha0, beta)
            if best is None or key < best[0]:
                best = (key, schedule)
    return best[1]
