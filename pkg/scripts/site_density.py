"""Semi-directed site model: distribution of T/n against the density of free
sites, to locate where paths faster than n (v + 1 - 0.2) become rare."""

import argparse
import csv
import sys

import numpy as np

from unitfpp.path import target_height
from unitfpp.solver import passage_time_site


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ps", default="0.05,0.02,0.01,0.005")
    ap.add_argument("--v", type=float, default=1.0)
    ap.add_argument("--n", type=int, default=500)
    ap.add_argument("--replicas", type=int, default=200)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    m = target_height(args.v, args.n)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["p", "mean_T_over_n", "std", "share_at_least_v_plus_0.8"])
    for p in (float(a) for a in args.ps.split(",")):
        r = np.array([passage_time_site(p, args.seed, i, args.n, m) for i in range(args.replicas)]) / args.n
        w.writerow([p, r.mean(), r.std(ddof=1), np.mean(r >= args.v + 0.8)])


if __name__ == "__main__":
    main()
