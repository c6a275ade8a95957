"""Counter-based uniforms.

Every random quantity in the toolkit is a pure function of integer
coordinates: ``(master_seed, replica, stream, k, y)`` is hashed through
SplitMix64 finalizer rounds into 53 uniform bits.  Nothing is stored, so a
lattice with millions of columns costs O(1) memory and any edge can be
replayed bit-exactly under any coupling.

Each stage XORs one coordinate (pre-multiplied by an odd constant) into the
running state and applies the finalizer, which is a bijection on 64-bit
words; the map is therefore injective in each coordinate separately.
"""

import numba as nb
import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_C_REPLICA = np.uint64(0xD1B54A32D192ED03)
_C_STREAM = np.uint64(0xAEF17502108EF2D9)
_C_COLUMN = np.uint64(0xDB4F0B9175AE2165)
_C_ROW = np.uint64(0x8CB92BA72F3D8DD7)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0

# Stream tags keep the independent sources of randomness disjoint.
STREAM_EDGES = 1
STREAM_SHEAR = 2
STREAM_SITES = 3
STREAM_PERMUTATION = 4
STREAM_ORACLE = 5


@nb.njit(cache=True, nogil=True)
def mix64(z):
    z = np.uint64(z)
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@nb.njit(cache=True, nogil=True)
def stream_key(seed, replica, stream):
    k0 = mix64(np.uint64(seed) + _GOLDEN)
    k1 = mix64(k0 ^ (np.uint64(replica) * _C_REPLICA + _GOLDEN))
    return mix64(k1 ^ (np.uint64(stream) * _C_STREAM + _GOLDEN))


@nb.njit(cache=True, nogil=True)
def column_key(key, k):
    return mix64(key ^ (np.uint64(np.int64(k)) * _C_COLUMN + _GOLDEN))


@nb.njit(cache=True, nogil=True)
def cell_bits(ckey, y):
    return mix64(ckey ^ (np.uint64(np.int64(y)) * _C_ROW))


@nb.njit(cache=True, nogil=True)
def bits_to_unit(h):
    """Map 64 hash bits to the open interval (0, 1)."""
    return (np.float64(h >> _S11) + 0.5) * _INV53


@nb.njit(cache=True, nogil=True)
def uniform_at(seed, replica, stream, k, y):
    return bits_to_unit(cell_bits(column_key(stream_key(seed, replica, stream), k), y))


@nb.njit(cache=True, nogil=True)
def uniform_column(seed, replica, stream, k, ys):
    ck = column_key(stream_key(seed, replica, stream), k)
    out = np.empty(ys.shape[0])
    for i in range(ys.shape[0]):
        out[i] = bits_to_unit(cell_bits(ck, ys[i]))
    return out


@nb.njit(cache=True, nogil=True)
def uniform_row(seed, replica, stream, ks, y):
    key = stream_key(seed, replica, stream)
    out = np.empty(ks.shape[0])
    for i in range(ks.shape[0]):
        out[i] = bits_to_unit(cell_bits(column_key(key, ks[i]), y))
    return out


@nb.njit(cache=True, nogil=True)
def hash_words(seed, replica, k, y):
    """Raw 64-bit output for the edge stream (used by the avalanche check)."""
    return cell_bits(column_key(stream_key(seed, replica, STREAM_EDGES), k), y)


def uniforms(seed: int, replica: int, stream: int, k: int, ys) -> np.ndarray:
    """Uniforms for column ``k`` at the heights ``ys``."""
    return uniform_column(seed, replica, stream, k, np.asarray(ys, dtype=np.int64))


def numpy_generator(seed: int, replica: int, stream: int) -> np.random.Generator:
    """A NumPy generator tied to the same (seed, replica, stream) address."""
    return np.random.default_rng([int(seed) & 0xFFFFFFFFFFFFFFFF, int(replica), int(stream)])
