"""Seeded experiment execution with CSV persistence.

Three experiment suites:

* comparison:    fixed well-conditioned instance, per-method gap traces with
                 quantile summaries across replications
* conditioning:  same machinery on ill-conditioned / irregular designs
* stepsize_grid: time-to-epsilon T(eps) over an (alpha0, beta) grid

All output is a pure function of the experiment spec (including the master
seed): re-running a spec reproduces the CSV files byte for byte.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field, replace

import numpy as np

from . import models, problems, schedules
from .rng import Rng, sample_unit_sphere

__all__ = [
    "RunTrace",
    "ExperimentSpec",
    "QuantileSummary",
    "TimeToEps",
    "method_tag",
    "method_from_tag",
    "run_single",
    "time_to_eps",
    "summarize_quantiles",
    "gap_reference",
    "run_experiment",
    "write_instance_meta",
]

# Default grids of the stepsize-robustness experiment:
# alpha0 in {2^-1, 2^1, ..., 2^11}, beta in {0.50, 0.55, ..., 1.00}
TTE_ALPHA0_GRID = tuple(float(2.0**e) for e in range(-1, 12, 2))
TTE_BETA_GRID = tuple(round(0.5 + 0.05 * i, 2) for i in range(11))

_TUNING_STREAM = 1_000_000  # rng child reserved for schedule tuning


@dataclass(frozen=True)
class RunTrace:
    """Per-checkpoint objectives and stationarity proxies for one seeded run."""

    method: str
    alpha0: float
    beta: float
    seed: int
    passes: np.ndarray  # strictly increasing checkpoint positions, in data passes
    objectives: np.ndarray
    grad_map_norms: np.ndarray
    diverged: bool = False
    flags: tuple = ()


@dataclass(frozen=True)
class QuantileSummary:
    passes: np.ndarray
    median: np.ndarray
    q10: np.ndarray
    q90: np.ndarray


@dataclass(frozen=True)
class TimeToEps:
    method: str
    alpha0: float
    beta: float
    rep: int
    T: int
    capped: bool


@dataclass(frozen=True)
class ExperimentSpec:
    """Declarative description of one experiment."""

    experiment: str  # 'comparison' | 'conditioning' | 'stepsize_grid'
    n: int = 500
    d: int = 50
    design: problems.DesignSpec = field(default_factory=problems.DesignSpec)
    noise: problems.NoiseSpec = field(default_factory=problems.NoiseSpec)
    methods: tuple = ("proxlin", "sgm")
    replications: int = 100
    budget_passes: int = 200
    epsilon: float = 1e-2  # T(eps) threshold, stepsize_grid only
    master_seed: int = 0
    alpha0_grid: tuple = TTE_ALPHA0_GRID
    beta_grid: tuple = TTE_BETA_GRID
    tuning: schedules.TuningGrid = field(default_factory=schedules.TuningGrid)

    def __post_init__(self):
        if self.experiment not in ("comparison", "conditioning", "stepsize_grid"):
            raise ValueError(f"unknown experiment {self.experiment!r}")
        if self.replications < 1 or self.budget_passes < 1:
            raise ValueError("replications and budget_passes must be >= 1")
        if not self.methods:
            raise ValueError("at least one method is required")

    @property
    def experiment_id(self):
        noise = self.noise
        noise_param = {"none": 0.0, "laplace": noise.scale, "corrupt": noise.p}[noise.kind]
        return (
            f"{self.experiment}-n{self.n}-d{self.d}-{self.design.kind.lower()}"
            f"-k{self.design.kappa:g}-{noise.kind}{noise_param:g}-s{self.master_seed}"
        )


def method_tag(kind):
    """Short CSV tag for a model kind."""
    return {
        "subgradient": "sgm",
        "prox_linear": "proxlin",
        "prox_point": "proxpt",
        "guarded": f"guarded:{kind.epsilon:g}",
    }[kind.variant]


def method_from_tag(tag):
    if tag == "sgm":
        return models.ModelKind.subgradient()
    if tag == "proxlin":
        return models.ModelKind.prox_linear()
    if tag == "proxpt":
        return models.ModelKind.prox_point()
    if tag.startswith("guarded"):
        _, _, eps = tag.partition(":")
        return models.ModelKind.guarded(float(eps) if eps else 1.0)
    raise ValueError(f"unknown method tag {tag!r}")


def _probe_indices(n, count=64):
    # fixed, evenly spaced probe subset for the gradient-mapping proxy
    return np.unique(np.linspace(0, n - 1, min(n, count)).round().astype(int))


def _grad_map_norm(inst, kind, x, alpha, probes, reg):
    g = np.zeros(inst.d)
    for i in probes:
        res = models.step(kind, x, inst.sample(i), alpha, reg=reg)
        g += (x - res.x_next) / alpha
    return float(np.linalg.norm(g / len(probes)))


def run_single(
    inst,
    kind,
    schedule,
    seed,
    budget_passes=200,
    checkpoint_every=None,
    reg=models.Regularizer(),
    x0=None,
):
    """One seeded stochastic run with per-checkpoint objectives.

    The initial point is uniform on the unit sphere (from the run seed); each
    iteration draws a sample index uniformly and applies the method's step
    with alpha_k.  grad_map_norm is the norm of the gradient mapping averaged
    over a fixed probe subset of min(n, 64) samples at the current stepsize.
    """
    if budget_passes < 1:
        raise ValueError("budget_passes must be >= 1")
    rng = seed if isinstance(seed, Rng) else Rng(seed)
    n = inst.n
    checkpoint_every = n if checkpoint_every is None else int(checkpoint_every)
    if x0 is None:
        x0 = sample_unit_sphere(inst.d, rng.derive(0))
    total = budget_passes * n
    indices = rng.derive(1).integers(n, size=total)
    probes = _probe_indices(n)

    x = np.asarray(x0, dtype=float).copy()
    passes, objs, gnorms = [], [], []
    diverged = False

    def checkpoint(k):
        alpha = schedules.stepsize_at(schedule, max(k, 1))
        passes.append(k / n)
        objs.append(problems.objective(inst, x))
        gnorms.append(_grad_map_norm(inst, kind, x, alpha, probes, reg))

    checkpoint(0)
    # divergence shows up as overflow before the finiteness check trips;
    # suppress the transient warnings and record the flag instead
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, total + 1):
            alpha = schedules.stepsize_at(schedule, k)
            x = models.step(kind, x, inst.sample(indices[k - 1]), alpha, reg=reg).x_next
            if not np.all(np.isfinite(x)):
                diverged = True
                break
            if k % checkpoint_every == 0:
                checkpoint(k)

    return RunTrace(
        method=method_tag(kind),
        alpha0=schedule.alpha0,
        beta=schedule.beta,
        seed=rng.seed,
        passes=np.array(passes),
        objectives=np.array(objs),
        grad_map_norms=np.array(gnorms),
        diverged=diverged,
    )


def time_to_eps(inst, kind, schedule, seed, eps, cap, x0=None):
    """First iteration k with objective(x_k) <= eps, or the cap on failure.

    Returns (T, capped).  Shares the seeding layout of run_single so the
    iterate sequence is identical.
    """
    rng = seed if isinstance(seed, Rng) else Rng(seed)
    if x0 is None:
        x0 = sample_unit_sphere(inst.d, rng.derive(0))
    indices = rng.derive(1).integers(inst.n, size=cap)
    x = np.asarray(x0, dtype=float).copy()
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, cap + 1):
            alpha = schedules.stepsize_at(schedule, k)
            x = models.step(kind, x, inst.sample(indices[k - 1]), alpha).x_next
            if not np.all(np.isfinite(x)):
                return cap, True
            if problems.objective(inst, x) <= eps:
                return k, False
    return cap, True


def gap_reference(traces):
    """Best objective achieved by any method at any checkpoint.

    The planted signal is generally not recoverable exactly under noise, so
    gaps are reported relative to the best value any method found.
    """
    if not traces:
        raise ValueError("need at least one trace")
    return min(float(t.objectives.min()) for t in traces)


def summarize_quantiles(traces, reference=0.0):
    """Per-checkpoint median / q10 / q90 of objective gaps across traces.

    Quantiles interpolate linearly between order statistics.  All traces must
    share identical checkpoint positions.
    """
    if not traces:
        raise ValueError("need at least one trace")
    passes = traces[0].passes
    for t in traces[1:]:
        if t.passes.shape != passes.shape or not np.array_equal(t.passes, passes):
            raise ValueError("traces have misaligned checkpoints")
    gaps = np.stack([t.objectives - reference for t in traces])
    q10, med, q90 = np.quantile(gaps, [0.1, 0.5, 0.9], axis=0, method="linear")
    return QuantileSummary(passes=passes, median=med, q10=q10, q90=q90)


# -- CSV persistence ---------------------------------------------------------


def _fmt(value):
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path, header, rows):
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_fmt(v) for v in row])
    except OSError as exc:
        raise OSError(f"failed writing {path}: {exc}") from exc
    return path


def write_instance_meta(inst, path):
    noise = inst.noise
    noise_param = {"none": 0.0, "laplace": noise.scale, "corrupt": noise.p}[noise.kind]
    return _write_csv(
        path,
        ["n", "d", "design", "kappa", "noise_kind", "noise_param", "seed"],
        [[inst.n, inst.d, inst.design.kind, float(inst.design.kappa), noise.kind,
          float(noise_param), inst.seed]],
    )


def write_traces_csv(path, experiment_id, traces, reps, reference):
    rows = []
    for trace, rep in zip(traces, reps):
        for p, obj, gn in zip(trace.passes, trace.objectives, trace.grad_map_norms):
            rows.append(
                [experiment_id, trace.method, float(trace.alpha0), float(trace.beta),
                 rep, float(p), float(obj), float(obj - reference), float(gn),
                 int(trace.diverged)]
            )
    return _write_csv(
        path,
        ["experiment_id", "method", "alpha0", "beta", "rep", "pass", "objective",
         "gap", "grad_map_norm", "diverged"],
        rows,
    )


def write_summary_csv(path, experiment_id, summaries):
    rows = []
    for method, summary in summaries:
        for p, med, q10, q90 in zip(summary.passes, summary.median, summary.q10, summary.q90):
            rows.append([experiment_id, method, float(p), float(med), float(q10), float(q90)])
    return _write_csv(
        path,
        ["experiment_id", "method", "pass", "median_gap", "q10_gap", "q90_gap"],
        rows,
    )


def write_tte_csv(path, experiment_id, records):
    rows = [
        [experiment_id, r.method, float(r.alpha0), float(r.beta), r.rep, r.T, int(r.capped)]
        for r in records
    ]
    return _write_csv(
        path,
        ["experiment_id", "method", "alpha0", "beta", "rep", "T", "capped"],
        rows,
    )


# -- experiment drivers ------------------------------------------------------


def run_experiment(spec, out_dir):
    """Execute one experiment spec; returns the list of CSV paths written."""
    os.makedirs(out_dir, exist_ok=True)
    inst = problems.generate_instance(
        spec.n, spec.d, spec.design, spec.noise, seed=spec.master_seed
    )
    written = [write_instance_meta(inst, os.path.join(out_dir, "instance.meta.csv"))]
    if spec.experiment in ("comparison", "conditioning"):
        written.extend(_run_trace_experiment(spec, inst, out_dir))
    else:
        written.append(_run_tte_experiment(spec, inst, out_dir))
    return written


def _run_trace_experiment(spec, inst, out_dir):
    master = Rng(spec.master_seed)
    all_traces, per_method = [], []
    for tag in spec.methods:
        kind = method_from_tag(tag)
        schedule = schedules.tune_schedule(
            inst, kind, spec.tuning, master_seed=master.derive(_TUNING_STREAM)
        )
        traces = [
            run_single(inst, kind, schedule, master.derive(j), spec.budget_passes)
            for j in range(spec.replications)
        ]
        all_traces.extend(traces)
        per_method.append((tag, traces))
    reference = gap_reference(all_traces)
    reps = [j for _, traces in per_method for j in range(len(traces))]
    traces_path = write_traces_csv(
        os.path.join(out_dir, "traces.csv"), spec.experiment_id, all_traces, reps, reference
    )
    summaries = [
        (tag, summarize_quantiles(traces, reference)) for tag, traces in per_method
    ]
    summary_path = write_summary_csv(
        os.path.join(out_dir, "summary.csv"), spec.experiment_id, summaries
    )
    return [traces_path, summary_path]


def _run_tte_experiment(spec, inst, out_dir):
    master = Rng(spec.master_seed)
    cap = spec.budget_passes * inst.n
    records = []
    for tag in spec.methods:
        kind = method_from_tag(tag)
        for alpha0 in spec.alpha0_grid:
            for beta in spec.beta_grid:
                schedule = schedules.Schedule(alpha0, beta)
                for j in range(spec.replications):
                    T, capped = time_to_eps(
                        inst, kind, schedule, master.derive(j), spec.epsilon, cap
                    )
                    records.append(TimeToEps(tag, alpha0, beta, j, T, capped))
    return write_tte_csv(os.path.join(out_dir, "tte.csv"), spec.experiment_id, records)
