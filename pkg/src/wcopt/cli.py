"""Command-line interface.

Subcommands:

* generate   -- write a phase-retrieval instance to CSV (data + metadata)
* run        -- one seeded stochastic run, written as traces.csv
* experiment -- a full experiment spec, from flags or a key=value config file
* diagnose   -- run the numerical theory checks, written as diagnostics.csv
* summarize  -- traces.csv -> per-method quantile summary.csv

Exit codes: 0 success, 1 validation error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from collections import defaultdict

import numpy as np

from . import diagnostics, harness, models, problems, schedules

_DESIGNS = {"ur": "UR", "ru": "RU"}


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; the contract here is 1 for validation errors
    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_noise(text):
    parts = text.split(":")
    if parts[0] == "none":
        return problems.NoiseSpec.noiseless()
    if parts[0] == "laplace":
        if len(parts) != 2:
            raise ValueError("expected laplace:SIGMA")
        return problems.NoiseSpec.laplace(float(parts[1]))
    if parts[0] == "corrupt":
        if len(parts) != 3:
            raise ValueError("expected corrupt:P:VAR")
        return problems.NoiseSpec.corrupted(float(parts[1]), float(parts[2]))
    raise ValueError(f"unknown noise spec {text!r}")


def _parse_methods(text):
    tags = [t.strip() for t in text.split(",") if t.strip()]
    for tag in tags:
        harness.method_from_tag(tag)  # validate
    return tuple(tags)


def _add_instance_flags(p):
    p.add_argument("--n", type=int, default=500)
    p.add_argument("--d", type=int, default=50)
    p.add_argument("--kappa", type=float, default=1.0)
    p.add_argument("--design", choices=sorted(_DESIGNS), default="ur")
    p.add_argument("--noise", default="none", help="none | laplace:SIGMA | corrupt:P:VAR")
    p.add_argument("--seed", type=int, default=0)


def build_parser():
    parser = _Parser(prog="wcopt", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[], help="write an instance to CSV")
    _add_instance_flags(p)
    p.add_argument("--out", required=True)

    p = sub.add_parser("run", help="one seeded stochastic run")
    _add_instance_flags(p)
    p.add_argument("--method", default="proxlin")
    p.add_argument("--alpha0", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=0.6)
    p.add_argument("--passes", type=int, default=200)
    p.add_argument("--out", required=True)

    p = sub.add_parser("experiment", help="run a full experiment spec")
    _add_instance_flags(p)
    p.add_argument("--config", help="key=value file mirroring the flags")
    p.add_argument(
        "--experiment",
        choices=["comparison", "conditioning", "stepsize_grid"],
        default="comparison",
    )
    p.add_argument("--method", default="proxlin,sgm", help="comma-separated tags")
    p.add_argument("--alpha0", type=float, default=None, help="fix alpha0 (skips tuning)")
    p.add_argument("--beta", type=float, default=None, help="fix beta (skips tuning)")
    p.add_argument("--passes", type=int, default=200)
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--eps", type=float, default=1e-2)
    p.add_argument("--out", required=True)

    p = sub.add_parser("diagnose", help="numerical theory checks")
    _add_instance_flags(p)
    p.add_argument("--probes", type=int, default=1000)
    p.add_argument("--out", required=True)

    p = sub.add_parser("summarize", help="traces.csv -> summary.csv")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    return parser


def _instance_from_args(args):
    design = problems.DesignSpec(_DESIGNS[args.design], args.kappa)
    noise = _parse_noise(args.noise)
    return problems.generate_instance(args.n, args.d, design, noise, seed=args.seed)


def _cmd_generate(args):
    inst = _instance_from_args(args)
    os.makedirs(args.out, exist_ok=True)
    data_path = os.path.join(args.out, "instance.csv")
    with open(data_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([f"a{j}" for j in range(inst.d)] + ["b"])
        for i in range(inst.n):
            writer.writerow([repr(v) for v in inst.A[i]] + [repr(float(inst.b[i]))])
        writer.writerow([repr(float(v)) for v in inst.x_star] + ["x_star"])
    harness.write_instance_meta(inst, os.path.join(args.out, "instance.meta.csv"))
    return 0


def _cmd_run(args):
    inst = _instance_from_args(args)
    kind = harness.method_from_tag(args.method)
    schedule = schedules.Schedule(args.alpha0, args.beta)
    trace = harness.run_single(inst, kind, schedule, args.seed, args.passes)
    os.makedirs(args.out, exist_ok=True)
    reference = harness.gap_reference([trace])
    harness.write_traces_csv(
        os.path.join(args.out, "traces.csv"),
        f"run-s{args.seed}",
        [trace],
        [0],
        reference,
    )
    return 0


def _apply_config(args, path):
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not _:
                raise ValueError(f"malformed config line {line!r}")
            if key in ("n", "d", "passes", "reps", "seed"):
                setattr(args, key, int(value))
            elif key in ("kappa", "alpha0", "beta", "eps"):
                setattr(args, key, float(value))
            elif key in ("design", "noise", "experiment", "method", "out"):
                setattr(args, key, value)
            else:
                raise ValueError(f"unknown config key {key!r}")


def _cmd_experiment(args):
    if args.config:
        _apply_config(args, args.config)
    if args.design not in _DESIGNS:
        raise ValueError(f"unknown design {args.design!r}")
    tuning = schedules.TuningGrid()
    if args.alpha0 is not None or args.beta is not None:
        if args.alpha0 is None or args.beta is None:
            raise ValueError("--alpha0 and --beta must be given together")
        tuning = schedules.TuningGrid((args.alpha0,), (args.beta,))
    spec = harness.ExperimentSpec(
        experiment=args.experiment,
        n=args.n,
        d=args.d,
        design=problems.DesignSpec(_DESIGNS[args.design], args.kappa),
        noise=_parse_noise(args.noise),
        methods=_parse_methods(args.method),
        replications=args.reps,
        budget_passes=args.passes,
        epsilon=args.eps,
        master_seed=args.seed,
        tuning=tuning,
    )
    paths = harness.run_experiment(spec, args.out)
    for path in paths:
        print(path)
    return 0


def _cmd_diagnose(args):
    inst = _instance_from_args(args)
    kinds = [
        models.ModelKind.subgradient(),
        models.ModelKind.prox_linear(),
        models.ModelKind.prox_point(),
        models.ModelKind.guarded(1.0),
    ]
    rows = []
    for kind in kinds:
        gm = diagnostics.check_gradmap_bound(inst, kind, args.probes, seed=args.seed)
        rows.append(("gradmap_bound", kind.variant, args.probes, gm.max_violation,
                     gm.max_violation <= 1e-9))
        cond = diagnostics.check_model_conditions(inst, kind, args.probes, seed=args.seed)
        rows.append(("model_match", kind.variant, args.probes, cond.worst_match,
                     cond.worst_match <= 1e-12))
        rows.append(("model_convexity", kind.variant, args.probes, cond.worst_convexity,
                     cond.worst_convexity >= -1e-9))
        rows.append(("model_certificate", kind.variant, args.probes, cond.worst_certificate,
                     cond.worst_certificate >= -1e-9))
        rows.append(("model_lower_bound", kind.variant, args.probes, cond.worst_lower_bound,
                     cond.worst_lower_bound >= -1e-9))
    os.makedirs(args.out, exist_ok=True)
    path = diagnostics.write_diagnostics_csv(os.path.join(args.out, "diagnostics.csv"), rows)
    print(path)
    return 0 if all(r[4] for r in rows) else 1


def _cmd_summarize(args):
    by_method = defaultdict(lambda: defaultdict(list))
    experiment_id = None
    with open(args.infile, encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            experiment_id = row["experiment_id"]
            by_method[row["method"]][int(row["rep"])].append(
                (float(row["pass"]), float(row["gap"]))
            )
    if experiment_id is None:
        raise ValueError(f"no trace rows in {args.infile}")
    summaries = []
    for method, reps in sorted(by_method.items()):
        series = [np.array(points) for _, points in sorted(reps.items())]
        passes = series[0][:, 0]
        for s in series[1:]:
            if s.shape != series[0].shape or not np.array_equal(s[:, 0], passes):
                raise ValueError(f"misaligned checkpoints for method {method}")
        gaps = np.stack([s[:, 1] for s in series])
        q10, med, q90 = np.quantile(gaps, [0.1, 0.5, 0.9], axis=0, method="linear")
        summaries.append(
            (method, harness.QuantileSummary(passes=passes, median=med, q10=q10, q90=q90))
        )
    harness.write_summary_csv(args.out, experiment_id, summaries)
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "run": _cmd_run,
    "experiment": _cmd_experiment,
    "diagnose": _cmd_diagnose,
    "summarize": _cmd_summarize,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, IndexError) as exc:
        print(f"wcopt: validation error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"wcopt: I/O error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
