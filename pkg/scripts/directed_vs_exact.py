"""Directed two-point model: Monte Carlo time constant against the closed form."""

import argparse
import csv
import sys

import numpy as np

from unitfpp.dist import TwoPoint
from unitfpp.estimators import estimate_lambda_sweep
from unitfpp.exact import exact_lambda_directed_twopoint


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=float, default=0.5)
    ap.add_argument("--kappa", type=float, default=1.0)
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--replicas", type=int, default=50)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--vmax", type=float, default=2.5)
    ap.add_argument("--points", type=int, default=11)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    vs = np.linspace(0, args.vmax, args.points).tolist()
    ests = estimate_lambda_sweep(TwoPoint(0.0, args.kappa, args.p), vs, args.n, args.replicas, args.seed,
                                 "directed", args.workers)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["v", "mean", "stderr", "exact", "rel_err"])
    for e in ests:
        ex = exact_lambda_directed_twopoint(0.0, args.kappa, args.p, e.v)
        w.writerow([e.v, e.mean, e.stderr, ex, abs(e.mean - ex) / ex if ex else float("nan")])


if __name__ == "__main__":
    main()
