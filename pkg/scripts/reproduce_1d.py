#!/usr/bin/env python3
"""Beta sweeps for the AR(15) model with lags {1, 2, 15}.

Writes results/sweep_n1000.csv, results/kullback_n1000.csv and, with
--large, results/sweep_n100000.csv. Prints the beta markers and the range
of beta over which each method is always right.
"""
import argparse
from pathlib import Path

from icsel.experiments import (
    SweepConfig,
    run_beta_sweep,
    run_kullback_report,
    sweep_csv,
)


def plateau(rows, column):
    hits = [r.beta for r in rows if getattr(r, column) == 100]
    return (min(hits), max(hits)) if hits else None


def report(name, result, out):
    out.write_text(sweep_csv(result))
    print(f"== {name} -> {out}")
    for key, value in result.markers.items():
        print(f"  {key:9s} {value: .5f}")
    print(f"  classical 100% on {plateau(result.rows, 'classical_success_pct')}")
    print(f"  nishii    100% on {plateau(result.rows, 'nishii_success_pct')}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--runs", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--large", action="store_true", help="also sweep n = 100000")
    parser.add_argument("--outdir", default="results")
    args = parser.parse_args()

    outdir = Path(args.outdir)
    outdir.mkdir(exist_ok=True)
    cfg = SweepConfig(runs=args.runs, base_seed=args.seed, workers=args.workers)
    report("n=1000", run_beta_sweep(cfg), outdir / "sweep_n1000.csv")
    report("n=1000, beta <= 0.35", run_kullback_report(cfg), outdir / "kullback_n1000.csv")
    if args.large:
        big = SweepConfig(n=100_000, runs=args.runs, base_seed=args.seed, workers=args.workers)
        report("n=100000", run_beta_sweep(big), outdir / "sweep_n100000.csv")


if __name__ == "__main__":
    main()
