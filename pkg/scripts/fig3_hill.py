"""Query cost against stream length on Hill with detection switched off.

Reports mean candidates tested, |C|/k and time in the approximate search
for each eps, one row per (length, eps).

    python3 scripts/fig3_hill.py --lengths 100000 1000000 -o results/hill.csv
"""

import argparse
import sys

from binchange.evalharness import run_grid, write_csv
from binchange.synthgen import WorkloadSpec


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lengths", type=int, nargs="+", default=list(range(100_000, 1_000_001, 100_000)))
    ap.add_argument("--eps", type=float, nargs="+", default=[0.0, 0.1, 0.5, 0.9])
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--query-period", type=int, default=997)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("-o", "--output", type=argparse.FileType("w"), default=sys.stdout)
    args = ap.parse_args()

    specs = [WorkloadSpec("hill", n, seed=args.seed) for n in args.lengths]
    rows = run_grid(
        specs,
        [1e9],
        args.eps,
        query_period=args.query_period,
        exact_below=0,
        ratios=False,
        jobs=args.jobs,
    )
    write_csv(rows, args.output)


if __name__ == "__main__":
    main()
