"""Exact self-check batteries: solver against exhaustive search, the shear
identities, and pathwise structural invariants.

Every battery is deterministic in its seed and returns a report whose
``failures`` list is empty when everything holds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dist import Dirac, Empirical, Exponential, TwoPoint, Uniform, truncate
from .env import Environment
from .path import PioneerVector, passage_time_A, target_height, turn_stats
from .rng import STREAM_ORACLE, numpy_generator
from .shear import apply_shear_path, sheared_time_B, telescoped_difference
from .solver import (
    _band,
    brute_force_passage,
    brute_force_sheared,
    passage_time_semidirected,
    semidirected_time,
    sheared_passage,
)

# Laws whose values are small dyadic rationals: sums of a handful of them are
# exact in binary floating point, so identities that involve subtracting two
# passage functionals can be checked with ``==``.
DYADIC_LAWS = (
    TwoPoint(0.0, 1.0, 0.5),
    TwoPoint(0.5, 2.25, 0.25),
    Empirical((0.25, 0.5, 1.75), (0.5, 0.25, 0.25)),
)
CONTINUOUS_LAWS = (Uniform(0.0, 1.0), Exponential(2.0), Uniform(0.25, 0.75))


@dataclass
class BatteryReport:
    name: str
    total: int = 0
    failures: list = field(default_factory=list)

    @property
    def matched(self) -> int:
        return self.total - len(self.failures)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __str__(self):
        return f"{self.name}: {self.matched}/{self.total} matched"


def _instance_rng(seed, i):
    return numpy_generator(seed, i, STREAM_ORACLE)


def oracle_battery(instances: int = 1000, seed: int = 0) -> BatteryReport:
    """Solver time and geodesic against exhaustive enumeration on small
    instances (n <= 5, weights at most 1 so the search box stays small)."""
    laws = (Uniform(0.0, 1.0), TwoPoint(0.0, 1.0, 0.5), Empirical((0.0, 0.5, 1.0), (0.25, 0.5, 0.25)))
    rep = BatteryReport("oracle")
    for i in range(instances):
        rng = _instance_rng(seed, i)
        n = int(rng.integers(0, 6))
        m = int(rng.integers(-2, 3))
        env = Environment(seed, i, laws[i % len(laws)])
        lo, hi, _ = _band(env, n, m, 1)
        hmax = max(-lo, hi)
        res = passage_time_semidirected(env, n, m)
        bt, bg = brute_force_passage(env, n, m, hmax, return_gamma=True)
        rep.total += 1
        if res.time != bt or res.gamma.gamma != bg.gamma:
            rep.failures.append((i, n, m, res.time, bt, res.gamma.gamma, bg.gamma))
    return rep


def sheared_oracle_battery(instances: int = 200, seed: int = 0) -> BatteryReport:
    """Sheared optimum via the shifted environment against direct search."""
    rep = BatteryReport("sheared-oracle")
    for i in range(instances):
        rng = _instance_rng(seed, i)
        n = int(rng.integers(1, 5))
        v = float(rng.integers(0, 2))
        bits = rng.integers(0, 2, size=n + 1)
        sign = 1 if i % 2 == 0 else -1
        env = Environment(seed, i, Uniform(0.0, 1.0))
        m = target_height(v, n)
        fast = sheared_passage(env, n, v, bits, sign, exact=True)
        slow = brute_force_sheared(env, n, m, bits, sign, hmax=n + 5)
        rep.total += 1
        if fast != slow:
            rep.failures.append((i, n, v, sign, fast, slow))
    return rep


def _random_gamma(rng, n, spread=3):
    g = np.concatenate([[0], np.cumsum(rng.integers(-spread, spread + 1, size=n))])
    return PioneerVector(tuple(int(a) for a in g) + (int(g[-1] + rng.integers(-spread, spread + 1)),))


def shear_identity_battery(instances: int = 1000, seed: int = 0) -> BatteryReport:
    """For random (vector, bits, environment) triples check, with ``==``:

    * the sheared functional equals the plain functional of the sheared
      vector in the environment shifted the opposite way;
    * its difference to the plain functional is the bit-weighted sum of
      discrete derivatives of the absolute value (both signs);
    * shearing back recovers the vector.
    """
    rep = BatteryReport("shear-identities")
    for i in range(instances):
        rng = _instance_rng(seed, i)
        n = int(rng.integers(1, 9))
        g = _random_gamma(rng, n)
        bits = rng.integers(0, 2, size=n + 1)
        law = DYADIC_LAWS[i % len(DYADIC_LAWS)]
        cont = CONTINUOUS_LAWS[i % len(CONTINUOUS_LAWS)]
        rep.total += 1
        for sign in (1, -1):
            for dist in (law, cont):
                env = Environment(seed, i, dist)
                B = sheared_time_B(g, bits, sign, env)
                A_img = passage_time_A(PioneerVector(apply_shear_path(g, bits, sign)), env.with_overlay(bits, -sign))
                if B != A_img:
                    rep.failures.append(("overlay", i, sign, dist.spec(), B, A_img))
            env = Environment(seed, i, law)
            A = passage_time_A(g, env)
            B = sheared_time_B(g, bits, sign, env)
            diff = B - A if sign == 1 else A - B
            if diff != telescoped_difference(g, bits, sign):
                rep.failures.append(("telescope", i, sign, diff))
            back = apply_shear_path(PioneerVector(apply_shear_path(g, bits, sign)), bits, -sign)
            if back != g.gamma:
                rep.failures.append(("inverse", i, sign))
    return rep


def structural_battery(geodesics: int = 10_000, pairs: int = 1000, truncations: int = 1000,
                       seed: int = 0) -> dict:
    """Pathwise invariants that must hold in every sample.

    * turn counts of every geodesic add up to ``n + 1``;
    * every passage time is at least ``t0 n + |m|``;
    * moving the target by ``d`` changes the time by at most ``|d|``;
    * truncating the weights never increases the time (same uniforms).

    Floating comparisons allow a relative slack of 1e-12 for rounding.
    """
    laws = (TwoPoint(1.0, 3.0, 0.5), Uniform(1.0, 2.0), Exponential(1.0), TwoPoint(0.0, 1.0, 0.5), Dirac(1.0))
    tol = 1e-12
    turns = BatteryReport("turns+floor")
    for i in range(geodesics):
        rng = _instance_rng(seed, i)
        n = int(rng.integers(1, 41))
        m = int(rng.integers(-n, 2 * n + 1))
        dist = laws[i % len(laws)]
        res = passage_time_semidirected(Environment(seed, i, dist), n, m)
        t = turn_stats(res.gamma)
        turns.total += 1
        if t.U + t.R + t.D != n + 1:
            turns.failures.append(("turns", i))
        floor = dist.t0 * n + abs(m)
        if res.time < floor * (1 - tol):
            turns.failures.append(("floor", i, res.time, floor))

    lip = BatteryReport("lipschitz")
    for i in range(pairs):
        rng = _instance_rng(seed + 1, i)
        n = int(rng.integers(1, 200))
        m, m2 = (int(a) for a in rng.integers(-n, 2 * n + 1, size=2))
        env = Environment(seed, i, laws[i % len(laws)])
        a, b = semidirected_time(env, n, m), semidirected_time(env, n, m2)
        lip.total += 1
        if abs(a - b) > abs(m - m2) + tol * max(a, b):
            lip.failures.append((i, n, m, m2, a, b))

    trunc = BatteryReport("truncation")
    for i in range(truncations):
        rng = _instance_rng(seed + 2, i)
        n = int(rng.integers(1, 200))
        m = int(rng.integers(0, 2 * n + 1))
        dist = laws[i % 3]
        B = dist.t0 + float(rng.uniform(0.05, 2.0))
        env = Environment(seed, i, dist)
        full = semidirected_time(env, n, m)
        cut = semidirected_time(env.with_dist(truncate(dist, B)), n, m)
        trunc.total += 1
        if cut > full * (1 + tol):
            trunc.failures.append((i, n, m, B, cut, full))
    return {"turns+floor": turns, "lipschitz": lip, "truncation": trunc}
