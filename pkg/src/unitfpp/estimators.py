"""Monte Carlo estimators built on the exact solvers.

Every replica ``r`` owns the environment ``Environment(seed, r, dist)``.
Sweeps over several slopes reuse that environment for every slope (common
random numbers), which makes differences between slopes far less noisy than
the individual estimates.  Results are reduced in replica order, so output
does not depend on the number of worker threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dist import WeightDist
from .env import Environment
from .errors import ContractError, DomainError
from .path import target_height, turn_stats, vertical_length
from .shear import sample_shear
from .solver import (
    passage_time_directed,
    passage_time_semidirected,
    semidirected_time,
    sheared_passage,
)
from .stats import log_frequency_slope, mean_stderr, run_replicas

MODELS = ("semidirected", "directed")
FLAT = "flat-edge-consistent"
NOT_FLAT = "no-flat-edge-consistent"
INCONCLUSIVE = "inconclusive"


def _time(env: Environment, n: int, m: int, model: str) -> float:
    if model == "semidirected":
        return semidirected_time(env, n, m)
    if model == "directed":
        return passage_time_directed(env, n, m)
    raise DomainError(f"unknown model {model!r}; expected one of {MODELS}")


def _check_floor(T: float, n: int, m: int, t0: float, replica: int) -> None:
    floor = t0 * n + abs(m)
    if T < floor - 1e-9 * max(1.0, floor):
        raise ContractError(f"replica {replica}: passage time {T} below the pathwise floor {floor}")


def replica_times(dist: WeightDist, ms, n: int, replicas: int, seed: int, model: str = "semidirected",
                  workers: int = 1, first: int = 0) -> np.ndarray:
    """Passage times T(0, (n, m)) for every target height in ``ms`` and every
    replica, as an array of shape ``(len(ms), replicas)``.  Each time is
    checked against the pathwise floor ``t0 n + |m|``."""
    ms = [int(m) for m in ms]
    if model == "directed" and any(m < 0 for m in ms):
        raise DomainError("the directed model needs nonnegative target heights")
    t0 = dist.t0

    def one(r):
        env = Environment(seed, r, dist)
        out = []
        for m in ms:
            T = _time(env, n, m, model)
            _check_floor(T, n, m, t0, r)
            out.append(T)
        return out

    rows = run_replicas(one, replicas, workers, first)
    return np.array(rows, dtype=np.float64).reshape(replicas, len(ms)).T.copy()


@dataclass(frozen=True)
class LambdaEstimate:
    v: float
    n: int
    replicas: int
    mean: float
    stderr: float
    lower_bound_pathwise: float
    m: int = 0
    model: str = "semidirected"
    seed: int = 0
    samples: tuple = field(default=(), repr=False, compare=False)

    @property
    def slope(self) -> float:
        """Slope actually realised by the target height, ``m / n``."""
        return self.m / self.n


def _make_estimate(v, n, m, samples, dist, model, seed):
    per_col = samples / n
    mean, se = mean_stderr(per_col)
    return LambdaEstimate(v=float(v), n=n, replicas=len(samples), mean=mean, stderr=se,
                          lower_bound_pathwise=abs(m) / n + dist.t0, m=m, model=model, seed=seed,
                          samples=tuple(per_col.tolist()))


def estimate_lambda_sweep(dist: WeightDist, vs, n: int, replicas: int, seed: int, model: str = "semidirected",
                          workers: int = 1) -> list[LambdaEstimate]:
    """Estimates of the time constant at several slopes, with common random
    numbers across slopes."""
    if replicas < 2:
        raise DomainError("need at least two replicas for a standard error")
    if n < 1:
        raise DomainError("n must be >= 1")
    ms = [target_height(v, n) for v in vs]
    T = replica_times(dist, ms, n, replicas, seed, model, workers)
    return [_make_estimate(v, n, m, T[i], dist, model, seed) for i, (v, m) in enumerate(zip(vs, ms))]


def estimate_lambda(dist: WeightDist, v: float, n: int, replicas: int, seed: int, model: str = "semidirected",
                    workers: int = 1) -> LambdaEstimate:
    """Mean and standard error of ``T(0, (n, ceil(v n))) / n`` over replicas."""
    return estimate_lambda_sweep(dist, [v], n, replicas, seed, model, workers)[0]


# ---------------------------------------------------------------- limit shape

@dataclass(frozen=True)
class ShapeCurve:
    thetas: np.ndarray
    radii: np.ndarray
    radii_stderr: np.ndarray
    points: np.ndarray
    closure: np.ndarray
    chord_slack: np.ndarray
    chord_slack_stderr: np.ndarray
    estimates: tuple = field(repr=False)

    def rows(self):
        for th, r, se, (x, y) in zip(self.thetas, self.radii, self.radii_stderr, self.points):
            yield float(th), float(r), float(se), float(x), float(y)


def limit_shape_curve(dist: WeightDist, n: int, replicas: int, theta_grid, seed: int,
                      workers: int = 1) -> ShapeCurve:
    """First-quadrant boundary samples of the limit shape.

    A direction ``theta`` is probed at slope ``tan(theta)``; the target height
    is rounded up to the lattice, and the reported angle is the one the
    rounded target actually realises.  The point in that direction is
    ``(1, v_n) / Lambda(v_n)``.  The vertical direction is the fixed point
    ``(0, 1)``.

    ``chord_slack`` measures how far each point lies above the chord from
    ``(1/Lambda(0), 0)`` to ``(0, 1)``: it is ``x Lambda(0) + y - 1``.  It is
    estimated replica by replica, where it is nonnegative pathwise, and its
    standard error comes from a linearisation of the ratio.
    """
    thetas = [float(t) for t in theta_grid]
    if any(not (0.0 <= t < math.pi / 2) for t in thetas):
        raise DomainError("theta grid must lie in [0, pi/2)")
    if replicas < 2:
        raise DomainError("need at least two replicas")
    ms = [target_height(math.tan(t), n) for t in thetas]
    T = replica_times(dist, [0] + ms, n, replicas, seed, "semidirected", workers) / n
    L0 = T[0]
    lam0 = mean_stderr(L0)[0]
    eff, radii, rse, pts, slack, slack_se, ests = [], [], [], [], [], [], []
    for i, m in enumerate(ms):
        L = T[i + 1]
        vn = m / n
        lam, lam_se = mean_stderr(L)
        th = math.atan(vn)
        eff.append(th)
        radii.append(1.0 / (lam * math.cos(th)))
        rse.append(lam_se / (lam * lam * math.cos(th)))
        pts.append((1.0 / lam, vn / lam))
        D = L0 + vn - L
        s = mean_stderr(D)[0] / lam
        slack.append(s)
        slack_se.append(mean_stderr((D - s * L) / lam)[1])
        ests.append(_make_estimate(math.tan(thetas[i]), n, m, L * n, dist, "semidirected", seed))
    eff.append(math.pi / 2)
    radii.append(1.0)
    rse.append(0.0)
    pts.append((0.0, 1.0))
    slack.append(0.0)
    slack_se.append(0.0)
    P = np.array(pts)
    closure = np.concatenate([P, P[::-1] * [-1, 1], P * [-1, -1], P[::-1] * [1, -1]])
    del lam0
    return ShapeCurve(np.array(eff), np.array(radii), np.array(rse), P, closure,
                      np.array(slack), np.array(slack_se), tuple(ests))


# ------------------------------------------------------------------ flat edge

@dataclass(frozen=True)
class FlatEdgeVerdict:
    has_atom: bool
    onset_v: float | None
    test_v: tuple
    excess: tuple
    excess_stderr: tuple
    verdict: str
    significance_k: float = 3.0


def classify_flat_edge(dist: WeightDist, test_v_margin: float = 1.0, n: int = 1000, replicas: int = 50,
                       seed: int = 0, significance_k: float = 3.0, test_vs=(0.0, 1.0, 2.0),
                       workers: int = 1) -> FlatEdgeVerdict:
    """Statistical check of whether the limit shape has a flat edge at (0, 1).

    With an atom at the bottom of the support, the excess
    ``Lambda(v) - v - t0`` must vanish beyond the onset slope; we test one
    slope ``margin`` past the onset and accept if the excess is within
    ``k`` standard errors of zero.  Without an atom the excess must be
    positive at every slope; we accept if it exceeds ``k`` standard errors at
    each of ``test_vs``.  Anything else is inconclusive.
    """
    s = dist.summary()
    if s.t0 == 0.0 and s.atom_at_t0 == 1.0:
        raise DomainError("the degenerate law with all mass at 0 has no limit shape")
    has_atom = s.atom_at_t0 > 0
    if has_atom:
        onset = (1.0 - s.atom_at_t0) / s.atom_at_t0
        vs = (onset + test_v_margin,)
    else:
        onset = None
        vs = tuple(float(v) for v in test_vs)
    ms = [target_height(v, n) for v in vs]
    T = replica_times(dist, ms, n, replicas, seed, "semidirected", workers)
    exc, ses = [], []
    for i, m in enumerate(ms):
        e, se = mean_stderr((T[i] - m - n * s.t0) / n)
        exc.append(e)
        ses.append(se)
    k = significance_k
    if has_atom:
        verdict = FLAT if abs(exc[0]) <= k * ses[0] else INCONCLUSIVE
    else:
        verdict = NOT_FLAT if all(e > k * se for e, se in zip(exc, ses)) else INCONCLUSIVE
    return FlatEdgeVerdict(has_atom, onset, vs, tuple(exc), tuple(ses), verdict, k)


# ---------------------------------------------------------- derivative bounds

@dataclass(frozen=True)
class DerivBoundReport:
    v: float
    n: int
    replicas: int
    x: float
    x_plus: float
    x_minus: float
    upper_stat: float
    upper_stderr: float
    lower_stat: float
    lower_stderr: float
    fd_plus: float
    fd_plus_stderr: float
    fd_minus: float
    fd_minus_stderr: float
    gap_plus: float
    gap_plus_stderr: float
    gap_minus: float
    gap_minus_stderr: float
    up_minus_down: float
    up_minus_down_stderr: float
    right_ratio: float
    significance_k: float = 3.0

    @property
    def upper_holds(self) -> bool:
        """Right slope does not exceed the turn bound, within tolerance."""
        return self.gap_plus <= self.significance_k * self.gap_plus_stderr

    @property
    def lower_holds(self) -> bool:
        return self.gap_minus >= -self.significance_k * self.gap_minus_stderr

    @property
    def lipschitz_holds(self) -> bool:
        k = self.significance_k
        return (abs(self.fd_plus) <= 1 + k * self.fd_plus_stderr
                and abs(self.fd_minus) <= 1 + k * self.fd_minus_stderr)


def derivative_bounds_report(dist: WeightDist, v: float, x_step: float = 0.2, n: int = 1000, replicas: int = 50,
                             seed: int = 0, significance_k: float = 3.0, workers: int = 1) -> DerivBoundReport:
    """Turn ratios of geodesics against one-sided finite differences of the
    time constant.

    Per replica we take the geodesic to ``(n, ceil(v n))`` and compute
    ``(U+R-D)/n`` and ``(U-R-D)/n``; in the same environment we solve for the
    targets ``ceil((v +- x) n)`` and form the one-sided difference quotients
    over the realised step.  The comparison uses paired per-replica gaps.
    The left target may be below zero; the semi-directed model is symmetric.
    """
    if x_step <= 0:
        raise DomainError("x_step must be positive")
    if v < 0:
        raise DomainError("v must be >= 0")
    m0 = target_height(v, n)
    mp = target_height(v + x_step, n)
    mm = target_height(v - x_step, n)
    xp, xm = (mp - m0) / n, (m0 - mm) / n

    def one(r):
        env = Environment(seed, r, dist)
        g = passage_time_semidirected(env, n, m0)
        tp = semidirected_time(env, n, mp)
        tm = semidirected_time(env, n, mm)
        u, rr, d = g.turns.U, g.turns.R, g.turns.D
        return (g.time, tp, tm, u, rr, d)

    A = np.array(run_replicas(one, replicas, workers), dtype=np.float64)
    T0, Tp, Tm, U, R, D = A.T
    upper = (U + R - D) / n
    lower = (U - R - D) / n
    fdp = (Tp - T0) / (n * xp)
    fdm = (T0 - Tm) / (n * xm)
    ms_ = [mean_stderr(a) for a in (upper, lower, fdp, fdm, fdp - upper, fdm - lower, (U - D) / n)]
    return DerivBoundReport(
        v=float(v), n=n, replicas=replicas, x=float(x_step), x_plus=xp, x_minus=xm,
        upper_stat=ms_[0][0], upper_stderr=ms_[0][1], lower_stat=ms_[1][0], lower_stderr=ms_[1][1],
        fd_plus=ms_[2][0], fd_plus_stderr=ms_[2][1], fd_minus=ms_[3][0], fd_minus_stderr=ms_[3][1],
        gap_plus=ms_[4][0], gap_plus_stderr=ms_[4][1], gap_minus=ms_[5][0], gap_minus_stderr=ms_[5][1],
        up_minus_down=ms_[6][0], up_minus_down_stderr=ms_[6][1], right_ratio=float(np.mean(R) / n),
        significance_k=significance_k,
    )


# -------------------------------------------------------------- sheared check

@dataclass(frozen=True)
class ShearCheck:
    v: float
    x: float
    sign: int
    n: int
    replicas: int
    mean_B_over_n: float
    stderr_B: float
    target: float
    stderr_target: float
    paired_stderr: float
    significance_k: float = 3.0

    @property
    def combined_stderr(self) -> float:
        return math.hypot(self.stderr_B, self.stderr_target)

    @property
    def agrees(self) -> bool:
        return abs(self.mean_B_over_n - self.target) <= self.significance_k * self.combined_stderr


def sheared_lambda_check(dist: WeightDist, v: float, x: float, n: int, replicas: int, seed: int, sign: int = 1,
                         significance_k: float = 3.0, workers: int = 1) -> ShearCheck:
    """Average sheared passage time over (environment, shear) pairs, against
    the direct estimate at slope ``v + sign x`` in the same environments.

    The shear bits of replica ``r`` come from its own stream, so ``x = 0``
    reproduces the plain passage time sample by sample.
    """
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    if v < 0 or not 0 <= x <= 1:
        raise DomainError("need v >= 0 and x in [0, 1]")
    if sign < 0 and v - x < 0:
        raise DomainError("the negative shear needs v - x >= 0")
    m_direct = target_height(v + sign * x, n)

    def one(r):
        env = Environment(seed, r, dist)
        w = sample_shear(x, n + 1, seed, r)
        return sheared_passage(env, n, v, w, sign), semidirected_time(env, n, m_direct)

    A = np.array(run_replicas(one, replicas, workers), dtype=np.float64) / n
    b, b_se = mean_stderr(A[:, 0])
    t, t_se = mean_stderr(A[:, 1])
    _, p_se = mean_stderr(A[:, 0] - A[:, 1])
    return ShearCheck(float(v), float(x), sign, n, replicas, b, b_se, t, t_se, p_se, significance_k)


# ---------------------------------------------------------------------- tails

@dataclass(frozen=True)
class TailRow:
    n: int
    replicas: int
    lambda_ref: float
    right_count: int
    left_count: int
    length_count: int

    @property
    def right_freq(self) -> float:
        return self.right_count / self.replicas

    @property
    def left_freq(self) -> float:
        return self.left_count / self.replicas

    @property
    def length_freq(self) -> float:
        return self.length_count / self.replicas


@dataclass(frozen=True)
class TailReport:
    v: float
    eps: float
    rows: tuple
    right_slope: float
    left_slope: float
    length_slope: float
    fixed_target: tuple
    fixed_ks: tuple
    fixed_tail: tuple
    fixed_slope: float
    means: tuple = ()


def _tail_slope(xs, counts, totals) -> float:
    # With no exceedance at all the regression only sees the smoothing
    # constant; report a flat rate rather than rounding noise.
    if not any(counts):
        return 0.0
    return log_frequency_slope(xs, counts, totals)


def tail_estimates(dist: WeightDist, v: float, n_grid, eps: float, replicas: int, seed: int,
                   fixed_target=(5, 3), fixed_replicas: int | None = None, lambda_ref: float | None = None,
                   workers: int = 1) -> TailReport:
    """Exceedance frequencies of the passage time and geodesic length.

    For every ``n`` the events are ``T >= n (L + eps)``, ``T <= n (L - eps)``
    and ``|geodesic| >= n (L + 1 + eps)``, where ``L`` is ``lambda_ref`` or,
    by default, the sample mean of ``T/n`` at the largest ``n`` of the grid.
    Rates are least-squares slopes of ``log((count + 1/2) / (replicas + 1))``
    against ``n``; a tail with no exceedance anywhere gets slope 0.

    The fixed-target part records ``P(T > k)`` at integer ``k`` for the
    passage time to ``fixed_target`` and fits the log-tail slope in ``k``
    over the values of ``k`` where the tail is positive.
    """
    if eps <= 0:
        raise DomainError("eps must be positive")
    n_grid = [int(n) for n in n_grid]
    if not n_grid or min(n_grid) < 1:
        raise DomainError("n grid must contain positive integers")
    samples = {}
    for n in n_grid:
        m = target_height(v, n)

        def one(r, n=n, m=m):
            env = Environment(seed, r, dist)
            g = passage_time_semidirected(env, n, m)
            return g.time, n + vertical_length(g.gamma)

        samples[n] = np.array(run_replicas(one, replicas, workers), dtype=np.float64)
    means = tuple(mean_stderr(samples[n][:, 0] / n)[0] for n in n_grid)
    L = lambda_ref if lambda_ref is not None else means[int(np.argmax(n_grid))]
    rows = []
    for n in n_grid:
        T, length = samples[n][:, 0], samples[n][:, 1]
        rows.append(TailRow(n, replicas, L, int(np.sum(T >= n * (L + eps))), int(np.sum(T <= n * (L - eps))),
                            int(np.sum(length >= n * (L + 1 + eps)))))
    tot = [replicas] * len(n_grid)
    slopes = [_tail_slope(n_grid, [getattr(r, a) for r in rows], tot)
              for a in ("right_count", "left_count", "length_count")]

    fn, fm = fixed_target
    fr = fixed_replicas or replicas
    Tf = np.array(run_replicas(lambda r: semidirected_time(Environment(seed, r, dist), fn, fm), fr, workers))
    ks = tuple(range(int(math.floor(Tf.min())), int(math.ceil(Tf.max())) + 1))
    tail = tuple(float(np.mean(Tf > k)) for k in ks)
    pos = [(k, p) for k, p in zip(ks, tail) if p > 0]
    if len(pos) >= 2:
        kk, pp = zip(*pos)
        fixed_slope = float(np.polyfit(kk, np.log(pp), 1)[0])
    else:
        fixed_slope = -math.inf if not pos else 0.0
    return TailReport(float(v), float(eps), tuple(rows), *slopes, (fn, fm), ks, tail, fixed_slope, means)
