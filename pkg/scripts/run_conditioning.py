#!/usr/bin/env python3
"""Conditioning and row-norm irregularity: four design/noise settings.

Full scale (default): n=500, d=50, 100 replications, 200 passes, tuned
schedules.  --quick shrinks everything for a desk-scale smoke run.
"""

import argparse

from wcopt.harness import ExperimentSpec, run_experiment
from wcopt.problems import DesignSpec, NoiseSpec

SETTINGS = {
    "ur-k10-laplace": (DesignSpec("UR", 10.0), NoiseSpec.laplace(1.0)),
    "ur-k100-laplace": (DesignSpec("UR", 100.0), NoiseSpec.laplace(1.0)),
    "ru-k10-noiseless": (DesignSpec("RU", 10.0), NoiseSpec.noiseless()),
    "ru-k10-laplace": (DesignSpec("RU", 10.0), NoiseSpec.laplace(1.0)),
}


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--out", default="results/conditioning")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--quick", action="store_true", help="desk-scale run")
    parser.add_argument(
        "--setting", choices=sorted(SETTINGS) + ["all"], default="all"
    )
    args = parser.parse_args()

    names = sorted(SETTINGS) if args.setting == "all" else [args.setting]
    for name in names:
        design, noise = SETTINGS[name]
        spec = ExperimentSpec(
            experiment="conditioning",
            n=100 if args.quick else 500,
            d=20 if args.quick else 50,
            design=design,
            noise=noise,
            methods=("proxlin", "sgm"),
            replications=5 if args.quick else 100,
            budget_passes=20 if args.quick else 200,
            master_seed=args.seed,
        )
        for path in run_experiment(spec, f"{args.out}/{name}"):
            print(path)


if __name__ == "__main__":
    main()
