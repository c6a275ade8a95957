"""Exact passage times and geodesics.

Semi-directed optimum
    A non-intersecting semi-directed path is a pioneer vector, so the optimum
    is a column-by-column min-plus recursion.  Moving between heights inside
    one column costs the height difference, and the min-plus product with
    ``|y - y'|`` is evaluated in linear time by one sweep up and one sweep
    down.  The recursion runs backwards from the target so that the forward
    trace can pick, at every column, the lowest height that is still optimal:
    the reported geodesic is the lexicographically smallest optimal vector.

Confinement
    Let ``T_ref = |m| + sum_k F_k(m)`` be the time of the path that climbs to
    ``m`` first.  A path that reaches height ``max(0, m) + d`` pays at least
    ``|m| + 2d`` in vertical edges, so heights beyond
    ``max(0, m) + (T_ref - |m|) / 2`` (and symmetrically below) are never
    used by a geodesic.  The recursion runs on that band, which sits inside
    the cylinder of half-height ``ceil(T_ref) + 1``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numba as nb
import numpy as np

from .env import Environment, fill_column
from .errors import ContractError, DomainError, OracleScopeError
from .path import PioneerVector, TurnStats, passage_time_A, target_height, turn_stats
from .rng import STREAM_SITES, bits_to_unit, cell_bits, column_key, stream_key


@dataclass(frozen=True)
class GeodesicResult:
    time: float
    gamma: PioneerVector
    turns: TurnStats
    cylinder_halfheight: int
    expanded: bool
    band: tuple


@nb.njit(cache=True, nogil=True)
def _reference_excess(envt, n, m):
    # sum_k F_k(m): horizontal part of the climb-first path
    col = np.empty(1)
    total = 0.0
    for k in range(1, n + 1):
        fill_column(envt, k, m, col)
        total += col[0]
    return total


@nb.njit(cache=True, nogil=True)
def _semidirected_kernel(envt, n, m, lo, hi, want_path, gamma_out):
    H = hi - lo + 1
    F = np.empty(H)
    C = np.empty(H)
    G = np.empty(H)
    below = np.empty(H, dtype=np.int64)
    if want_path:
        choice = np.empty((n, H), dtype=np.int32)
    else:
        choice = np.empty((1, 1), dtype=np.int32)

    # cost-to-go from the pioneer point (n, y), its horizontal edge included
    fill_column(envt, n, lo, F)
    for i in range(H):
        C[i] = F[i] + abs(m - (lo + i))

    for k in range(n - 1, 0, -1):
        bs = 0
        for i in range(H):
            if i > 0 and C[i] < (i - bs) + C[bs]:
                bs = i
            below[i] = bs
        fill_column(envt, k, lo, F)
        ab = H - 1
        for i in range(H - 1, -1, -1):
            if C[i] <= (ab - i) + C[ab]:
                ab = i
            b = below[i]
            vb = (i - b) + C[b]
            va = (ab - i) + C[ab]
            if vb <= va:
                G[i] = F[i] + vb
                src = b
            else:
                G[i] = F[i] + va
                src = ab
            if want_path:
                choice[k, i] = src
        C[:] = G

    best = np.inf
    bi = 0
    for i in range(H):
        val = abs(lo + i) + C[i]
        if val < best:
            best = val
            bi = i
    if want_path:
        gamma_out[0] = 0
        gamma_out[1] = lo + bi
        for k in range(1, n):
            bi = choice[k, bi]
            gamma_out[k + 1] = lo + bi
        gamma_out[n + 1] = m
    return best


def _band(env: Environment, n: int, m: int, widen: int = 1) -> tuple[int, int, int]:
    excess = float(_reference_excess(env.kernel_args, n, m)) if n else 0.0
    t_ref = abs(m) + excess
    s = (int(math.floor(excess / 2)) + 2) * widen
    return min(0, m) - s, max(0, m) + s, int(math.ceil(t_ref)) + 1


def semidirected_time(env: Environment, n: int, m: int) -> float:
    """Optimal passage time to (n, m) without recovering the geodesic."""
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    if n == 0:
        return float(abs(m))
    lo, hi, _ = _band(env, n, m)
    return float(_semidirected_kernel(env.kernel_args, n, m, lo, hi, False, np.empty(0, dtype=np.int64)))


def passage_time_semidirected(env: Environment, n: int, m: int, v: float | None = None) -> GeodesicResult:
    """Optimal time and tie-broken geodesic from the origin to (n, m)."""
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    if n == 0:
        g = PioneerVector((0, m), v)
        return GeodesicResult(float(abs(m)), g, turn_stats(g), abs(m) + 1, False, (min(0, m), max(0, m)))
    widen, expanded = 1, False
    while True:
        lo, hi, h = _band(env, n, m, widen)
        gamma = np.empty(n + 2, dtype=np.int64)
        _semidirected_kernel(env.kernel_args, n, m, lo, hi, True, gamma)
        interior = gamma[1 : n + 1]
        if not np.any((interior <= lo) | (interior >= hi)):
            break
        widen, expanded = widen * 2, True
    g = PioneerVector(tuple(gamma.tolist()), v)
    return GeodesicResult(passage_time_A(g, env), g, turn_stats(g), max(h, hi, -lo) if expanded else h, expanded, (lo, hi))


def geodesic_to_slope(env: Environment, n: int, v: float) -> GeodesicResult:
    return passage_time_semidirected(env, n, target_height(v, n), v)


@nb.njit(cache=True, nogil=True)
def _directed_kernel(envt, n, m):
    T = np.empty(m + 1)
    F = np.empty(m + 1)
    for j in range(m + 1):
        T[j] = float(j)
    for i in range(1, n + 1):
        fill_column(envt, i, 0, F)
        T[0] = T[0] + F[0]
        for j in range(1, m + 1):
            right = T[j] + F[j]
            up = T[j - 1] + 1.0
            T[j] = right if right <= up else up
    return T[m]


def passage_time_directed(env: Environment, n: int, m: int) -> float:
    """Optimum over up/right paths from the origin to (n, m)."""
    if n < 0 or m < 0:
        raise DomainError(f"directed passage needs n >= 0 and m >= 0, got ({n}, {m})")
    return float(_directed_kernel(env.kernel_args, n, m))


@nb.njit(cache=True, nogil=True)
def _site_kernel(key, p, n, m, lo, hi):
    H = hi - lo + 1
    V = np.full(H, np.inf)
    U = np.empty(H)
    Dn = np.empty(H)
    w = np.empty(H)
    V[-lo] = 0.0
    for k in range(n + 1):
        ck = column_key(key, k)
        for i in range(H):
            w[i] = 0.0 if bits_to_unit(cell_bits(ck, lo + i)) < p else 1.0
        for i in range(H):
            prev = U[i - 1] if i > 0 else np.inf
            U[i] = w[i] + min(V[i], prev)
        for i in range(H - 1, -1, -1):
            prev = Dn[i + 1] if i < H - 1 else np.inf
            Dn[i] = w[i] + min(V[i], prev)
        for i in range(H):
            V[i] = min(U[i], Dn[i])
    return V[m - lo]


def passage_time_site(p: float, seed: int, replica: int, n: int, m: int, max_halfwidth: int = 1 << 20) -> float:
    """Semi-directed site model: each visited site costs 0 w.p. ``p``, else 1.

    Free sites can make long excursions cheap, so the band around the
    endpoints is doubled until the optimum stops changing.
    """
    if not 0 <= p <= 1:
        raise DomainError(f"site probability must lie in [0, 1], got {p}")
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    key = np.uint64(stream_key(np.uint64(seed), np.uint64(replica), np.uint64(STREAM_SITES)))
    h = n // 2 + 8
    prev = _site_kernel(key, float(p), n, m, min(0, m) - h, max(0, m) + h)
    while h < max_halfwidth:
        h *= 2
        cur = _site_kernel(key, float(p), n, m, min(0, m) - h, max(0, m) + h)
        if cur == prev:
            return float(cur)
        prev = cur
    return float(prev)


def sheared_passage(env: Environment, n: int, v: float, omega, sign: int, exact: bool = False) -> float:
    """Optimum of the sheared functional over vectors ending at ceil(v n).

    Shearing a vector by ``sign * omega`` is a bijection onto vectors ending at
    ``ceil(v n) + sign * sum(omega)``, and the sheared functional of a vector
    equals the ordinary passage time of its image in the environment shifted
    by ``-sign * omega``.  With ``exact`` the geodesic is traced and its
    time re-summed with exact rounding, as in the unsheared solver.
    """
    bits = np.asarray(getattr(omega, "bits", omega), dtype=np.int64)
    if bits.shape[0] != n + 1:
        raise ContractError(f"shear sequence has length {bits.shape[0]}, need n + 1 = {n + 1}")
    if sign not in (1, -1):
        raise ContractError(f"sign must be +1 or -1, got {sign}")
    m = target_height(v, n) + sign * int(bits.sum())
    shifted = env.with_overlay(bits, -sign)
    if exact:
        return passage_time_semidirected(shifted, n, m).time
    return semidirected_time(shifted, n, m)


def _enumerate_min(n, m, hmax, weights, vertical_of, exact_of, budget):
    """Minimum over integer vectors with |gamma_k| <= hmax, evaluated exactly.

    A float pass over all candidates finds everything within 1e-9 of the
    float minimum; those are then re-evaluated with ``exact_of``.
    """
    span = 2 * hmax + 1
    if n == 0:
        g = (0, m)
        return exact_of(g), g
    if span**n > budget:
        raise OracleScopeError(f"{span}^{n} candidate vectors exceed the budget of {budget}")
    heights = np.arange(-hmax, hmax + 1, dtype=np.int64)
    rest = n - 1
    combos = list(itertools.product(range(span), repeat=rest))
    tails = np.array(combos, dtype=np.int64).reshape(len(combos), rest)
    best_val, best = math.inf, []
    for first in range(span):
        idx = np.concatenate([np.full((tails.shape[0], 1), first, dtype=np.int64), tails], axis=1)
        full = np.concatenate(
            [np.zeros((idx.shape[0], 1), np.int64), heights[idx], np.full((idx.shape[0], 1), m, np.int64)], axis=1
        )
        approx = vertical_of(full) + weights[np.arange(n), idx].sum(axis=1)
        lowest = approx.min()
        if lowest > best_val + 1e-9 * (1 + abs(best_val)):
            continue
        for row in full[approx <= lowest + 1e-9 * (1 + abs(lowest))]:
            g = tuple(int(h) for h in row)
            val = exact_of(g)
            if val < best_val or (val == best_val and g < best[0]):
                best_val, best = val, [g]
    return best_val, best[0]


def _weight_table(env, n, hmax):
    ys = np.arange(-hmax, hmax + 1, dtype=np.int64)
    return np.stack([env.column(k, ys) for k in range(1, n + 1)]) if n else np.zeros((0, 2 * hmax + 1))


def brute_force_passage(env: Environment, n: int, m: int, hmax: int, budget: int = 10**7, return_gamma=False):
    """Exact minimum of the passage functional over vectors with heights in [-hmax, hmax]."""
    if n < 0 or hmax < 0:
        raise DomainError("n and hmax must be >= 0")
    weights = _weight_table(env, n, hmax)
    val, g = _enumerate_min(
        n, m, hmax, weights,
        lambda full: np.abs(np.diff(full, axis=1)).sum(axis=1),
        lambda g: passage_time_A(PioneerVector(g), env),
        budget,
    )
    return (val, PioneerVector(g)) if return_gamma else val


def brute_force_sheared(env: Environment, n: int, m: int, omega, sign: int, hmax: int, budget: int = 10**7):
    """Exact minimum of the sheared functional over vectors ending at ``m``."""
    from .shear import sheared_time_B

    bits = np.asarray(getattr(omega, "bits", omega), dtype=np.int64)
    weights = _weight_table(env, n, hmax)
    val, _ = _enumerate_min(
        n, m, hmax, weights,
        lambda full: np.abs(np.diff(full, axis=1) + sign * bits[None, :]).sum(axis=1),
        lambda g: sheared_time_B(PioneerVector(g), bits, sign, env),
        budget,
    )
    return val
