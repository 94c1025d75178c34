"""Detection delay and change count on Step as a function of tau (eps = 0).

    python3 scripts/fig1_threshold.py --seeds 5 -o results/threshold.csv
"""

import argparse
import sys

from binchange.evalharness import run_grid, write_csv
from binchange.synthgen import WorkloadSpec


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=1, help="seeds 1..N")
    ap.add_argument("--length", type=int, default=200_000)
    ap.add_argument("--taus", type=float, nargs="+", default=[0.5] + list(range(1, 11)))
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("-o", "--output", type=argparse.FileType("w"), default=sys.stdout)
    args = ap.parse_args()

    specs = [WorkloadSpec("step", args.length, seed=s) for s in range(1, args.seeds + 1)]
    rows = run_grid(specs, args.taus, [0.0], ratios=False, jobs=args.jobs)
    write_csv(rows, args.output)


if __name__ == "__main__":
    main()
