"""Approximation ratios, candidate fractions and delay against eps on the
three 200k-entry workloads (tau = 6).

    python3 scripts/fig2_eps.py -o results/eps.csv
"""

import argparse
import sys

from binchange.evalharness import run_grid, write_csv
from binchange.synthgen import WorkloadSpec


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--workloads", nargs="+", default=["ind", "step", "slope"])
    ap.add_argument("--length", type=int, default=200_000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--eps", type=float, nargs="+", default=[round(0.1 * i, 1) for i in range(10)])
    ap.add_argument("--tau", type=float, default=6.0)
    # the exact cutoff is off so every query measures the approximate search
    ap.add_argument("--exact-below", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("-o", "--output", type=argparse.FileType("w"), default=sys.stdout)
    args = ap.parse_args()

    specs = [WorkloadSpec(w, args.length, seed=args.seed) for w in args.workloads]
    rows = run_grid(specs, [args.tau], args.eps, exact_below=args.exact_below, jobs=args.jobs)
    write_csv(rows, args.output)


if __name__ == "__main__":
    main()
