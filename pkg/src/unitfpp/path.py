"""Semi-directed lattice paths and their pioneer-vector encoding.

A semi-directed path (steps right, up, down) from the origin to ``(n, m)`` is
recorded by the height at which it first enters each column, plus the
target height in the slot after the last column.  Non-intersecting
semi-directed paths and such vectors are in bijection, and the passage time
splits into vertical run lengths plus one horizontal weight per column.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .env import Environment, weights_along
from .errors import ContractError, DomainError

_STEPS = {(1, 0), (-1, 0), (0, 1), (0, -1)}


def target_height(v: float, n: int) -> int:
    """ceil(v * n), snapping products within 1e-9 of an integer to it.

    Slopes arrive as decimal strings, so e.g. 0.3 * 10 evaluates to
    3.0000000000000004 and a raw ceil would overshoot by one row.
    """
    r = v * n
    nearest = round(r)
    if abs(r - nearest) <= 1e-9 * max(1.0, abs(r)):
        return int(nearest)
    return math.ceil(r)


@dataclass(frozen=True)
class LatticePath:
    vertices: tuple

    def __post_init__(self):
        verts = tuple((int(x), int(y)) for x, y in self.vertices)
        if not verts:
            raise ContractError("a path needs at least one vertex")
        for a, b in zip(verts, verts[1:]):
            if (b[0] - a[0], b[1] - a[1]) not in _STEPS:
                raise ContractError(f"vertices {a} and {b} are not adjacent")
        object.__setattr__(self, "vertices", verts)

    @property
    def start(self):
        return self.vertices[0]

    @property
    def end(self):
        return self.vertices[-1]

    @property
    def is_semidirected(self) -> bool:
        return all(b[0] >= a[0] for a, b in zip(self.vertices, self.vertices[1:]))

    @property
    def is_self_avoiding(self) -> bool:
        return len(set(self.vertices)) == len(self.vertices)

    def __len__(self):
        return len(self.vertices) - 1


def path_time(p: LatticePath, env: Environment) -> float:
    """Edge-by-edge passage time, exactly rounded."""
    ks, ys, vertical = [], [], 0
    for (x0, y0), (x1, y1) in zip(p.vertices, p.vertices[1:]):
        if y0 == y1:
            ks.append(max(x0, x1))
            ys.append(y0)
        else:
            vertical += 1
    w = weights_along(env.kernel_args, np.asarray(ks, dtype=np.int64), np.asarray(ys, dtype=np.int64))
    return math.fsum([float(vertical), *w.tolist()])


@dataclass(frozen=True)
class PioneerVector:
    gamma: tuple
    v: float | None = None

    def __post_init__(self):
        g = tuple(int(h) for h in self.gamma)
        if len(g) < 2 or g[0] != 0:
            raise ContractError(f"pioneer vectors start at height 0 and have length >= 2, got {g}")
        if self.v is not None and g[-1] != target_height(self.v, len(g) - 2):
            raise ContractError(f"endpoint {g[-1]} is not ceil(v*n) for v={self.v}")
        object.__setattr__(self, "gamma", g)

    @property
    def n(self) -> int:
        return len(self.gamma) - 2

    @property
    def m(self) -> int:
        return self.gamma[-1]

    def increments(self) -> np.ndarray:
        return np.diff(np.asarray(self.gamma, dtype=np.int64))

    def to_json(self) -> str:
        return json.dumps(list(self.gamma), separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str, v: float | None = None) -> "PioneerVector":
        return cls(tuple(json.loads(text)), v)


def pioneer_vector(p: LatticePath, n: int, m: int, v: float | None = None) -> PioneerVector:
    if not p.is_semidirected:
        raise ContractError("pioneer vectors are defined for semi-directed paths only")
    if p.start != (0, 0) or p.end != (n, m):
        raise ContractError(f"path runs {p.start} -> {p.end}, expected (0, 0) -> ({n}, {m})")
    first = {}
    for x, y in p.vertices:
        first.setdefault(x, y)
    return PioneerVector(tuple(first[k] for k in range(n + 1)) + (m,), v)


def path_from_pioneer(g: PioneerVector) -> LatticePath:
    gamma, n = g.gamma, g.n
    verts = [(0, 0)]
    for k in range(n + 1):
        a, b = gamma[k], gamma[k + 1]
        verts.extend(_vertical(k, a, b))
        if k < n:
            verts.append((k + 1, b))
    return LatticePath(tuple(verts))


def vertical_length(g: PioneerVector) -> int:
    return int(np.abs(g.increments()).sum())


def horizontal_weights(g: PioneerVector, env: Environment) -> np.ndarray:
    """F_k(gamma_k) for k = 1..n."""
    ks = np.arange(1, g.n + 1, dtype=np.int64)
    ys = np.asarray(g.gamma[1 : g.n + 1], dtype=np.int64)
    return weights_along(env.kernel_args, ks, ys)


def passage_time_A(g: PioneerVector, env: Environment) -> float:
    """Vertical run lengths plus one horizontal weight per column, exactly rounded."""
    return math.fsum([float(vertical_length(g)), *horizontal_weights(g, env).tolist()])


@dataclass(frozen=True)
class TurnStats:
    U: int
    R: int
    D: int


def turn_stats(g: PioneerVector) -> TurnStats:
    d = g.increments()
    stats = TurnStats(U=int((d > 0).sum()), R=int((d == 0).sum()), D=int((d < 0).sum()))
    assert stats.U + stats.R + stats.D == g.n + 1
    return stats


@dataclass(frozen=True)
class StripStats:
    down_edges: int
    eta: float
    many_down_edges: bool
    enough_shallow_strips: bool


def strip_slope_stats(g: PioneerVector, K: int, eps: float) -> StripStats:
    """Share of width-K strips whose net rise is at most K (v_n + eps).

    The column-n entry is replaced by the target height before differencing.
    Either the path descends along at least eps n / (2K) vertical edges or
    the share exceeds eps / (2 (v_n + eps)); the dichotomy is asserted.
    """
    n = g.n
    if n < 1 or K < 1 or n % K:
        raise DomainError(f"strip width {K} must divide n={n}")
    if not eps > 0:
        raise DomainError("eps must be positive")
    f = np.asarray(g.gamma[: n + 1], dtype=np.int64)
    f[n] = g.m
    v_n = g.m / n
    rises = f[K::K] - f[:-1:K]
    shallow = int((rises <= K * (v_n + eps)).sum())
    eta = K * shallow / n
    down = int(np.clip(-g.increments(), 0, None).sum())
    many_down = down >= eps * n / (2 * K)
    enough = v_n + eps > 0 and eta > eps / (2 * (v_n + eps))
    assert many_down or enough, "strip dichotomy violated"
    return StripStats(down, eta, many_down, enough)


def _loop_erase(verts):
    out, index = [], {}
    for z in verts:
        if z in index:
            cut = index[z]
            for w in out[cut + 1 :]:
                del index[w]
            del out[cut + 1 :]
        else:
            index[z] = len(out)
            out.append(z)
    return out


def _vertical(x, y_from, y_to):
    step = 1 if y_to > y_from else -1
    return [(x, y) for y in range(y_from + step, y_to + step, step)] if y_from != y_to else []


def normalize_to_semidirected(p: LatticePath) -> LatticePath:
    """Loop-erase and straighten left steps into vertical segments.

    Each rewrite replaces a sub-path between two points of one column by the
    vertical segment joining them, which never costs more because vertical
    edges weigh exactly 1.  After the first visit to the target column the
    path runs straight to the target.
    """
    (x1, _), (x2, y2) = p.start, p.end
    if x2 < x1:
        raise ContractError("normalization expects the target to lie to the right of the start")
    verts = list(p.vertices)
    while True:
        verts = _loop_erase(verts)
        hit = next(i for i, (x, _) in enumerate(verts) if x == x2)
        verts = verts[: hit + 1] + _vertical(x2, verts[hit][1], y2)
        left = next((i for i in range(len(verts) - 1) if verts[i + 1][0] == verts[i][0] - 1), None)
        if left is None:
            return LatticePath(tuple(verts))
        x3, y3 = verts[left]
        back = next(j for j in range(left + 2, len(verts)) if verts[j][0] == x3)
        verts = verts[: left + 1] + _vertical(x3, y3, verts[back][1]) + verts[back + 1 :]
