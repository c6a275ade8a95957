"""Exceedance counts of T/n around its mean over a grid of deviations eps,
showing how far out the tails are populated at desk-scale n."""

import argparse
import csv
import sys

from unitfpp.dist import parse_dist
from unitfpp.estimators import tail_estimates


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dist", default="twopoint:1,3,0.5")
    ap.add_argument("--v", type=float, default=1.0)
    ap.add_argument("--n", default="100,200,400")
    ap.add_argument("--eps", default="0.005,0.01,0.02,0.05,0.1,0.3")
    ap.add_argument("--replicas", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    ns = [int(a) for a in args.n.split(",")]
    dist = parse_dist(args.dist)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["eps", "n", "lambda_ref", "right_count", "left_count", "right_slope", "left_slope"])
    for eps in (float(a) for a in args.eps.split(",")):
        t = tail_estimates(dist, args.v, ns, eps, args.replicas, args.seed, workers=args.workers)
        for r in t.rows:
            w.writerow([eps, r.n, r.lambda_ref, r.right_count, r.left_count, t.right_slope, t.left_slope])


if __name__ == "__main__":
    main()
