"""Random integer shears.

A shear sequence is a 0/1 vector; shearing a pioneer vector adds the running
bit count to each coordinate.  Its expected effect matches a linear shear of
intensity ``x``, while staying on the integer lattice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .env import Environment
from .errors import ContractError, DomainError
from .path import PioneerVector, horizontal_weights, target_height
from .rng import STREAM_PERMUTATION, STREAM_SHEAR, numpy_generator, uniform_row


@dataclass(frozen=True, eq=False)
class ShearSeq:
    bits: np.ndarray
    x: float

    def __post_init__(self):
        bits = np.asarray(self.bits, dtype=np.int64)
        if bits.ndim != 1 or np.any((bits != 0) & (bits != 1)):
            raise ContractError("shear bits must be a 1-d 0/1 sequence")
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    @property
    def prefix(self) -> np.ndarray:
        """prefix[k] = bits[0] + ... + bits[k-1]; prefix[0] = 0."""
        return np.concatenate([[0], np.cumsum(self.bits)])

    def __len__(self):
        return int(self.bits.shape[0])

    def __eq__(self, other):
        return isinstance(other, ShearSeq) and np.array_equal(self.bits, other.bits)


def _check_x(x):
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"shear intensity must lie in [0, 1], got {x}")


def sample_shear(x: float, length: int, seed: int, replica: int = 0) -> ShearSeq:
    """i.i.d. Bernoulli(x) bits from a stream disjoint from the edge weights."""
    _check_x(x)
    u = uniform_row(np.uint64(seed), np.uint64(replica), np.uint64(STREAM_SHEAR),
                    np.arange(1, length + 1, dtype=np.int64), np.int64(0))
    return ShearSeq((u < x).astype(np.int64), x)


def permutation_shear(x: float, n: int, v: float, seed: int, replica: int = 0) -> ShearSeq:
    """Exactly ceil((v+x)n) - ceil(vn) ones at uniformly random positions among n+1."""
    _check_x(x)
    ones = target_height(v + x, n) - target_height(v, n)
    if ones > n + 1:
        raise DomainError(f"{ones} ones do not fit into {n + 1} positions")
    rng = numpy_generator(seed, replica, STREAM_PERMUTATION)
    bits = np.zeros(n + 1, dtype=np.int64)
    bits[rng.permutation(n + 1)[:ones]] = 1
    return ShearSeq(bits, x)


def _bits(w):
    return w.bits if isinstance(w, ShearSeq) else np.asarray(w, dtype=np.int64)


def apply_shear_path(g: PioneerVector, w, sign: int) -> tuple:
    """Coordinate k shifted by sign * (w_1 + ... + w_k); coordinate 0 untouched."""
    bits = _bits(w)
    if sign not in (1, -1):
        raise ContractError(f"sign must be +1 or -1, got {sign}")
    if bits.shape[0] < g.n + 1:
        raise ContractError(f"shear of length {bits.shape[0]} cannot cover n + 1 = {g.n + 1} steps")
    prefix = np.concatenate([[0], np.cumsum(bits[: g.n + 1])])
    return tuple(int(a) for a in np.asarray(g.gamma) + sign * prefix)


def delta_V(z: int) -> int:
    """|z + 1| - |z|."""
    return 1 - 2 * (z < 0)


def sheared_time_B(g: PioneerVector, w, sign: int, env: Environment) -> float:
    """Sum of |increment_k + sign * w_{k+1}| plus the unsheared horizontal weights."""
    bits = _bits(w)
    if bits.shape[0] != g.n + 1:
        raise ContractError(f"shear of length {bits.shape[0]} does not match n + 1 = {g.n + 1}")
    vertical = int(np.abs(g.increments() + sign * bits).sum())
    return math.fsum([float(vertical), *horizontal_weights(g, env).tolist()])


def telescoped_difference(g: PioneerVector, w, sign: int) -> int:
    """sum_k 1(w_{k+1} = 1) dV(increment_k), with dV shifted by one for sign -1.

    For sign +1 this is B(+w) - A, for sign -1 it is A - B(-w).
    """
    bits = _bits(w)
    d = g.increments()
    shifted = d if sign == 1 else d - 1
    return int(np.sum(bits * np.where(shifted < 0, -1, 1)))
