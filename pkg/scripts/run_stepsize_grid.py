#!/usr/bin/env python3
"""Stepsize robustness: time to 1e-2 accuracy over the (alpha0, beta) grid.

Full scale (default): n=500, d=50, noiseless, kappa=1, 250 replications per
grid point, cap 200 passes, for the subgradient, prox-linear, and prox-point
methods.  --quick shrinks everything for a desk-scale smoke run.
"""

import argparse

from wcopt.harness import ExperimentSpec, run_experiment


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--out", default="results/stepsize_grid")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--quick", action="store_true", help="desk-scale run")
    args = parser.parse_args()

    spec = ExperimentSpec(
        experiment="stepsize_grid",
        n=100 if args.quick else 500,
        d=20 if args.quick else 50,
        methods=("sgm", "proxlin", "proxpt"),
        replications=5 if args.quick else 250,
        budget_passes=50 if args.quick else 200,
        epsilon=1e-2,
        master_seed=args.seed,
    )
    for path in run_experiment(spec, args.out):
        print(path)


if __name__ == "__main__":
    main()
