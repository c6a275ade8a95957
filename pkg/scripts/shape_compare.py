"""Limit-shape samples for several laws, written as one long CSV
(law, theta, radius, x, y, chord_slack) for external plotting."""

import argparse
import csv
import math
import sys

import numpy as np

from unitfpp.dist import parse_dist
from unitfpp.estimators import limit_shape_curve


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--laws", default="dirac:1;twopoint:1,3,0.5;uniform:1,2;exp:1")
    ap.add_argument("--n", type=int, default=500)
    ap.add_argument("--replicas", type=int, default=20)
    ap.add_argument("--thetas", type=int, default=16)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    grid = np.linspace(0, math.pi / 2, args.thetas + 1)[:-1]
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["law", "theta", "radius", "radius_stderr", "x", "y", "chord_slack"])
    for spec in args.laws.split(";"):
        curve = limit_shape_curve(parse_dist(spec), args.n, args.replicas, grid, args.seed, args.workers)
        for (th, r, se, x, y), s in zip(curve.rows(), curve.chord_slack):
            w.writerow([spec, th, r, se, x, y, s])


if __name__ == "__main__":
    main()
