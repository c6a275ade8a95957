"""Stateless random environment of horizontal edge weights.

``F_k(y)`` is the weight of the edge ``((k-1, y), (k, y))``.  It is computed on
demand from ``(master_seed, replica, k, y)``; vertical edges always cost 1 and
are never represented.  Couplings (truncation, two-point reduction, shears,
reflection) reuse the same uniforms, so coupled environments differ only by
the deterministic map applied to each uniform.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property

import numba as nb
import numpy as np

from .dist import WeightDist, uniforms_to_weights
from .errors import ContractError, DomainError, EnvironmentPathologyError
from .rng import STREAM_EDGES, bits_to_unit, cell_bits, column_key, stream_key

_NO_SHIFT = np.zeros(0, dtype=np.int64)
_NO_PINS_I = np.zeros(0, dtype=np.int64)
_NO_PINS_F = np.zeros(0, dtype=np.float64)


@dataclass(frozen=True)
class Environment:
    master_seed: int
    replica: int
    dist: WeightDist
    # shift[k] is added to the queried height in column k before lookup
    shift: tuple | None = None
    reflect: bool = False
    # hand-built instances: ((k, y), weight) overrides in base coordinates
    pins: tuple = field(default=())

    def __post_init__(self):
        if not 0 <= self.master_seed < 2**64 or not 0 <= self.replica < 2**64:
            raise DomainError("seed and replica must be unsigned 64-bit integers")

    @cached_property
    def kernel_args(self) -> tuple:
        key = np.uint64(stream_key(np.uint64(self.master_seed), np.uint64(self.replica), np.uint64(STREAM_EDGES)))
        kind, par, vals, cum, cap = self.dist.kernel_args()
        shift = _NO_SHIFT if self.shift is None else np.asarray(self.shift, dtype=np.int64)
        if self.pins:
            pk = np.array([p[0][0] for p in self.pins], dtype=np.int64)
            py = np.array([p[0][1] for p in self.pins], dtype=np.int64)
            pw = np.array([p[1] for p in self.pins], dtype=np.float64)
        else:
            pk, py, pw = _NO_PINS_I, _NO_PINS_I, _NO_PINS_F
        return (key, kind, par, vals, cum, cap, shift, np.int64(self.reflect), pk, py, pw)

    def with_dist(self, dist: WeightDist) -> "Environment":
        """Same uniforms, different law (truncation / reduction couplings)."""
        return replace(self, dist=dist)

    def with_overlay(self, bits, sign: int) -> "Environment":
        """Environment ``(k, y) -> F_k(y + sign * sum(bits[:k]))``; overlays compose."""
        if sign not in (1, -1):
            raise ContractError(f"overlay sign must be +1 or -1, got {sign}")
        prefix = np.concatenate([[0], np.cumsum(np.asarray(bits, dtype=np.int64))])
        add = sign * prefix
        if self.shift is not None:
            if len(self.shift) != len(add):
                raise ContractError("composed overlays must have equal length")
            add = add + np.asarray(self.shift, dtype=np.int64)
        return replace(self, shift=tuple(int(a) for a in add))

    def reflected(self) -> "Environment":
        """The environment seen upside down: ``(k, y) -> F_k(-y)``."""
        return replace(self, reflect=not self.reflect)

    def with_pins(self, pins: dict) -> "Environment":
        return replace(self, pins=tuple(sorted(pins.items())))

    def horizontal_weight(self, k: int, y: int) -> float:
        if self.shift is not None and not 0 <= k < len(self.shift):
            raise ContractError(f"column {k} lies outside the overlay (length {len(self.shift)})")
        return float(weight_at(self.kernel_args, k, y))

    def column(self, k: int, ys) -> np.ndarray:
        ys = np.asarray(ys, dtype=np.int64)
        return weights_at(self.kernel_args, k, ys)


@nb.njit(cache=True, nogil=True)
def fill_column(envt, k, y_lo, out):
    """out[i] = F_k(y_lo + i)."""
    key, kind, par, vals, cum, cap, shift, refl, pk, py, pw = envt
    ck = column_key(key, k)
    off = 0
    if shift.shape[0] > 0 and k >= 0:
        off = shift[min(k, shift.shape[0] - 1)]
    sgn = -1 if refl else 1
    for i in range(out.shape[0]):
        out[i] = bits_to_unit(cell_bits(ck, sgn * (y_lo + i + off)))
    uniforms_to_weights(kind, par, vals, cum, cap, out)
    for j in range(pk.shape[0]):
        if pk[j] == k:
            i = sgn * py[j] - off - y_lo
            if 0 <= i < out.shape[0]:
                out[i] = pw[j]


@nb.njit(cache=True, nogil=True)
def weight_at(envt, k, y):
    buf = np.empty(1)
    fill_column(envt, k, y, buf)
    return buf[0]


@nb.njit(cache=True, nogil=True)
def weights_at(envt, k, ys):
    out = np.empty(ys.shape[0])
    for i in range(ys.shape[0]):
        out[i] = weight_at(envt, k, ys[i])
    return out


def horizontal_weight(env: Environment, k: int, y: int) -> float:
    return env.horizontal_weight(k, y)


@dataclass(frozen=True)
class DetourReport:
    edge: tuple
    height: int
    detour_time: float
    weight: float


@nb.njit(cache=True, nogil=True)
def _detour_search(envt, k, y, B, cap):
    for j in range(1, cap + 1):
        up = weight_at(envt, k, y + j)
        down = weight_at(envt, k, y - j)
        w = min(up, down)
        if w < B:
            return j, w
    return -1, 0.0


def detour(env: Environment, k: int, y: int, B: float, cap: int = 10**6) -> DetourReport:
    """Nearest parallel edge in column ``k`` with weight below ``B``.

    When both candidates at the minimal height qualify, the lighter one is used.
    """
    if not B > env.dist.t0:
        raise DomainError(f"detour level B={B} must exceed t0={env.dist.t0}")
    j, w = _detour_search(env.kernel_args, k, y, float(B), int(cap))
    if j < 0:
        raise EnvironmentPathologyError(f"no edge below {B} within {cap} rows of ({k}, {y})")
    return DetourReport(edge=(k, y), height=int(j), detour_time=2.0 * j + w, weight=float(w))


@nb.njit(cache=True, nogil=True)
def weights_along(envt, ks, ys):
    out = np.empty(ks.shape[0])
    for i in range(ks.shape[0]):
        out[i] = weight_at(envt, ks[i], ys[i])
    return out
