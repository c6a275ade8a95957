"""Replica bookkeeping: deterministic fan-out and mean/standard-error summaries."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np


def mean_stderr(values) -> tuple[float, float]:
    """Sample mean and standard error of the mean.

    The mean is accumulated as offsets from the first value, so a constant
    sample returns that constant bit-exactly with standard error 0.
    """
    x = np.asarray(values, dtype=np.float64).reshape(-1)
    if x.size == 0:
        return math.nan, math.nan
    base = float(x[0])
    d = x - base
    mean = base + math.fsum(d.tolist()) / x.size
    if x.size < 2:
        return mean, math.nan
    if not np.any(d):
        return mean, 0.0
    return mean, float(np.std(x, ddof=1) / math.sqrt(x.size))


def run_replicas(fn, replicas: int, workers: int = 1, first: int = 0) -> list:
    """``[fn(r) for r in range(first, first + replicas)]``, optionally threaded.

    Solver kernels release the GIL, so threads run them in parallel.  Results
    come back in replica order whatever the scheduling.
    """
    idx = range(first, first + replicas)
    if workers <= 1 or replicas <= 1:
        return [fn(r) for r in idx]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, idx))


def log_frequency_slope(xs, counts, totals) -> float:
    """Least-squares slope of log((count + 1/2) / (total + 1)) against x."""
    xs = np.asarray(xs, dtype=np.float64)
    freq = (np.asarray(counts, dtype=np.float64) + 0.5) / (np.asarray(totals, dtype=np.float64) + 1.0)
    return float(np.polyfit(xs, np.log(freq), 1)[0])
