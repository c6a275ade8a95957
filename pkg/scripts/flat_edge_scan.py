"""Excess Lambda(v) - v - t0 over a slope grid for laws with and without an
atom at the bottom of the support.  With an atom the excess should hit zero
at the onset slope (1 - G(t0)) / G(t0); without one it stays positive."""

import argparse
import csv
import sys

import numpy as np

from unitfpp.dist import parse_dist
from unitfpp.estimators import estimate_lambda_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--laws", default="twopoint:1,3,0.5;twopoint:1,3,0.25;uniform:1,2")
    ap.add_argument("--vmax", type=float, default=4.0)
    ap.add_argument("--points", type=int, default=17)
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--replicas", type=int, default=30)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    vs = np.linspace(0, args.vmax, args.points).tolist()
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["law", "v", "excess", "stderr", "onset"])
    for spec in args.laws.split(";"):
        dist = parse_dist(spec)
        s = dist.summary()
        onset = (1 - s.atom_at_t0) / s.atom_at_t0 if s.atom_at_t0 > 0 else float("nan")
        for e in estimate_lambda_sweep(dist, vs, args.n, args.replicas, args.seed, workers=args.workers):
            w.writerow([spec, e.v, e.mean - e.slope - s.t0, e.stderr, onset])


if __name__ == "__main__":
    main()
