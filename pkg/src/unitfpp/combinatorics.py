"""Counting integer jump vectors and semi-directed paths of bounded cost."""

from __future__ import annotations

import itertools
import math

import numpy as np

from .env import Environment
from .errors import DomainError, RangeError
from .path import PioneerVector, passage_time_A

_INT64_MAX = 2**63 - 1


def _checked(value: int) -> int:
    if value > _INT64_MAX:
        raise RangeError(f"count {value} does not fit into a signed 64-bit integer")
    return value


def count_jump_tuples(M: int, k: int, mode: str = "exact_sum") -> int:
    """Number of integer k-tuples whose absolute values sum to exactly M
    (``mode="exact_sum"``) or to at most M (``mode="at_most"``).

    Choose which rho entries are non-zero, their signs, and a composition of
    the total into rho positive parts (stars and bars).
    """
    if M < 1 or k < 1:
        raise DomainError(f"need M >= 1 and k >= 1, got M={M}, k={k}")
    if mode == "exact_sum":
        total = sum(math.comb(k, r) * math.comb(M - 1, r - 1) * 2**r for r in range(1, min(k, M) + 1))
    elif mode == "at_most":
        total = sum(math.comb(k, r) * math.comb(M, r) * 2**r for r in range(0, min(k, M) + 1))
    else:
        raise DomainError(f"unknown counting mode {mode!r}")
    return _checked(total)


def naive_closed_form(M: int, k: int) -> int:
    """sum_{rho<M} C(k,rho) C(M-1,rho) 2^rho + C(k,M) 2^M.

    Kept for comparison only: it mixes the two counting conventions and
    matches neither (it gives 9 at M = k = 2, where the counts are 8 and 13).
    """
    if M < 1 or k < 1:
        raise DomainError(f"need M >= 1 and k >= 1, got M={M}, k={k}")
    return sum(math.comb(k, r) * math.comb(M - 1, r) * 2**r for r in range(M)) + math.comb(k, M) * 2**M


def enumerate_jump_tuples(M: int, k: int, mode: str = "exact_sum") -> int:
    """Brute-force count by listing tuples; see ``enumerate_jump_table``."""
    exact, at_most = enumerate_jump_table(M, k)
    return int((exact if mode == "exact_sum" else at_most)[M - 1, k - 1])


def enumerate_jump_table(max_M: int, max_k: int) -> tuple[np.ndarray, np.ndarray]:
    """List every integer ``max_k``-tuple with absolute sum at most ``max_M``
    and tabulate, for all ``M <= max_M`` and ``k <= max_k``, how many have
    absolute sum exactly ``M`` / at most ``M`` among those whose entries
    after position ``k`` vanish (these are the k-tuples padded with zeros).

    Returns two arrays indexed ``[M - 1, k - 1]``.
    """
    sums = np.zeros(1, dtype=np.int64)
    last = np.zeros(1, dtype=np.int64)  # 1-based position of the last non-zero entry
    steps = np.arange(-max_M, max_M + 1, dtype=np.int64)
    for pos in range(1, max_k + 1):
        s = (sums[:, None] + np.abs(steps)[None, :]).ravel()
        l = np.where(steps[None, :] != 0, pos, last[:, None]).ravel()
        keep = s <= max_M
        sums, last = s[keep], l[keep]
    exact = np.zeros((max_M, max_k), dtype=np.int64)
    at_most = np.zeros((max_M, max_k), dtype=np.int64)
    for M in range(1, max_M + 1):
        for k in range(1, max_k + 1):
            fits = last <= k
            exact[M - 1, k - 1] = np.count_nonzero(fits & (sums == M))
            at_most[M - 1, k - 1] = np.count_nonzero(fits & (sums <= M))
    return exact, at_most


def enumerate_jump_tuples_naive(M: int, k: int, mode: str = "exact_sum") -> int:
    """Direct scan of {-M..M}^k (small arguments only)."""
    count = 0
    for t in itertools.product(range(-M, M + 1), repeat=k):
        s = sum(abs(a) for a in t)
        count += (s == M) if mode == "exact_sum" else (s <= M)
    return count


def count_paths_bound(n: int, C: float) -> float:
    """Upper bound (2 C e)^(n+1) on semi-directed paths to a fixed endpoint
    at horizontal distance n with passage time at most C n."""
    if n < 0 or C < 1:
        raise DomainError(f"need n >= 0 and C >= 1, got n={n}, C={C}")
    return (2.0 * C * math.e) ** (n + 1)


def count_paths_within(env: Environment, n: int, m: int, budget: float) -> int:
    """Exhaustive count of non-intersecting semi-directed paths from the
    origin to (n, m) with passage time at most ``budget``.

    Vertical edges cost 1, so no pioneer height can stray more than
    ``budget`` from the previous one; the search prunes on the vertical
    cost accumulated so far.
    """
    if n < 0:
        raise DomainError("n must be >= 0")
    reach = int(math.floor(budget))
    count = 0

    def extend(prefix, vertical):
        nonlocal count
        if len(prefix) == n + 1:
            g = PioneerVector(tuple(prefix) + (m,))
            if vertical + abs(m - prefix[-1]) <= budget and passage_time_A(g, env) <= budget:
                count += 1
            return
        last = prefix[-1]
        for h in range(last - reach, last + reach + 1):
            cost = vertical + abs(h - last)
            if cost <= budget:
                prefix.append(h)
                extend(prefix, cost)
                prefix.pop()

    extend([0], 0)
    return count


def jump_tuple_table(max_M: int = 8, max_k: int = 8) -> np.ndarray:
    """Rows (M, k, exact_sum, at_most, naive) for 1 <= M, k <= the limits."""
    rows = [
        (M, k, count_jump_tuples(M, k, "exact_sum"), count_jump_tuples(M, k, "at_most"), naive_closed_form(M, k))
        for M in range(1, max_M + 1)
        for k in range(1, max_k + 1)
    ]
    return np.array(rows, dtype=np.int64)
