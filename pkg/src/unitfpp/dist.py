"""Horizontal weight laws, their summaries, and the two couplings used for
comparison arguments: truncation from above and the two-point reduction.

All sampling goes through the generalized inverse CDF so that different laws
evaluated at the same uniform are coupled monotonically.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numba as nb
import numpy as np

from .errors import ConfigError, DomainError

DIRAC, TWOPOINT, UNIFORM, EXPONENTIAL, EMPIRICAL = 0, 1, 2, 3, 4


@nb.njit(cache=True, nogil=True)
def inv_cdf_kernel(kind, par, vals, cum, cap, u):
    if kind == DIRAC:
        x = par[0]
    elif kind == TWOPOINT:
        x = par[0] if u <= par[2] else par[1]
    elif kind == UNIFORM:
        x = par[0] + u * (par[1] - par[0])
    elif kind == EXPONENTIAL:
        x = -math.log1p(-u) / par[0]
    else:
        # first atom whose cumulative mass reaches u
        lo, hi = 0, cum.shape[0] - 1
        while lo < hi:
            mid = (lo + hi) // 2
            if cum[mid] >= u:
                hi = mid
            else:
                lo = mid + 1
        x = vals[lo]
    return x if x < cap else cap


@nb.njit(cache=True, nogil=True)
def uniforms_to_weights(kind, par, vals, cum, cap, buf):
    """In-place inverse CDF over a buffer of uniforms; one branch per law."""
    n = buf.shape[0]
    if kind == DIRAC:
        for i in range(n):
            buf[i] = par[0]
    elif kind == TWOPOINT:
        lo, hi, p = par[0], par[1], par[2]
        for i in range(n):
            buf[i] = lo if buf[i] <= p else hi
    elif kind == UNIFORM:
        a, w = par[0], par[1] - par[0]
        for i in range(n):
            buf[i] = a + buf[i] * w
    elif kind == EXPONENTIAL:
        r = par[0]
        for i in range(n):
            buf[i] = -math.log1p(-buf[i]) / r
    else:
        for i in range(n):
            buf[i] = inv_cdf_kernel(kind, par, vals, cum, np.inf, buf[i])
    if cap < np.inf:
        for i in range(n):
            if buf[i] > cap:
                buf[i] = cap


@nb.njit(cache=True, nogil=True)
def inv_cdf_array(kind, par, vals, cum, cap, us):
    out = us.copy()
    uniforms_to_weights(kind, par, vals, cum, cap, out)
    return out


@dataclass(frozen=True)
class DistSummary:
    t0: float
    atom_at_t0: float


_EMPTY = np.zeros(1)


def _floatify(obj, *names):
    for name in names:
        try:
            object.__setattr__(obj, name, float(getattr(obj, name)))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{name} must be a number") from exc


@dataclass(frozen=True, eq=False)
class WeightDist:
    """Base class; concrete laws provide ``cdf``, ``_mean`` and kernel params."""

    def kernel_args(self) -> tuple:
        kind, par, vals, cum = self._kernel()
        return (np.int64(kind), par, vals, cum, np.float64(self.cap))

    @property
    def cap(self) -> float:
        return math.inf

    @property
    def sup(self) -> float:
        raise NotImplementedError

    def inv_cdf(self, u):
        """Generalized inverse CDF; accepts a scalar or an array of uniforms."""
        arr = np.asarray(u, dtype=np.float64)
        if np.any((arr <= 0.0) | (arr >= 1.0)):
            raise DomainError("inverse CDF needs u in the open interval (0, 1)")
        out = inv_cdf_array(*self.kernel_args(), arr.reshape(-1))
        return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)

    def summary(self) -> DistSummary:
        t0 = self.t0
        return DistSummary(t0=t0, atom_at_t0=self.cdf(t0))

    @property
    def t0(self) -> float:
        raise NotImplementedError

    def cdf(self, x: float) -> float:
        raise NotImplementedError

    def cdf_left(self, x: float) -> float:
        """P(weight < x)."""
        raise NotImplementedError

    def mean(self) -> float:
        raise NotImplementedError

    def variance(self) -> float:
        raise NotImplementedError

    @property
    def is_dirac(self) -> bool:
        return False

    def spec(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True, eq=True)
class Dirac(WeightDist):
    x: float

    def __post_init__(self):
        _floatify(self, "x")
        if not (self.x >= 0 and math.isfinite(self.x)):
            raise ConfigError(f"Dirac atom must be a finite weight >= 0, got {self.x}")

    def _kernel(self):
        return DIRAC, np.array([self.x, 0.0, 0.0, 0.0]), _EMPTY, _EMPTY

    t0 = property(lambda self: float(self.x))
    sup = property(lambda self: float(self.x))
    is_dirac = property(lambda self: True)

    def cdf(self, x):
        return 1.0 if x >= self.x else 0.0

    def cdf_left(self, x):
        return 1.0 if x > self.x else 0.0

    def mean(self):
        return float(self.x)

    def variance(self):
        return 0.0

    def spec(self):
        return f"dirac:{self.x!r}"


@dataclass(frozen=True, eq=True)
class TwoPoint(WeightDist):
    lo: float
    hi: float
    p_lo: float

    def __post_init__(self):
        _floatify(self, "lo", "hi", "p_lo")
        if not (0 <= self.lo < self.hi and math.isfinite(self.hi)):
            raise ConfigError(f"TwoPoint needs 0 <= lo < hi, got lo={self.lo}, hi={self.hi}")
        if not (0 < self.p_lo < 1):
            raise ConfigError(f"TwoPoint needs p_lo in (0, 1), got {self.p_lo}")

    def _kernel(self):
        return TWOPOINT, np.array([self.lo, self.hi, self.p_lo, 0.0]), _EMPTY, _EMPTY

    t0 = property(lambda self: float(self.lo))
    sup = property(lambda self: float(self.hi))

    def cdf(self, x):
        return 0.0 if x < self.lo else (self.p_lo if x < self.hi else 1.0)

    def cdf_left(self, x):
        return 0.0 if x <= self.lo else (self.p_lo if x <= self.hi else 1.0)

    def mean(self):
        return self.p_lo * self.lo + (1 - self.p_lo) * self.hi

    def variance(self):
        return self.p_lo * (1 - self.p_lo) * (self.hi - self.lo) ** 2

    def spec(self):
        return f"twopoint:{self.lo!r},{self.hi!r},{self.p_lo!r}"


@dataclass(frozen=True, eq=True)
class Uniform(WeightDist):
    a: float
    b: float

    def __post_init__(self):
        _floatify(self, "a", "b")
        if not (0 <= self.a < self.b and math.isfinite(self.b)):
            raise ConfigError(f"Uniform needs 0 <= a < b, got a={self.a}, b={self.b}")

    def _kernel(self):
        return UNIFORM, np.array([self.a, self.b, 0.0, 0.0]), _EMPTY, _EMPTY

    t0 = property(lambda self: float(self.a))
    sup = property(lambda self: float(self.b))

    def cdf(self, x):
        return min(1.0, max(0.0, (x - self.a) / (self.b - self.a)))

    cdf_left = cdf

    def mean(self):
        return 0.5 * (self.a + self.b)

    def variance(self):
        return (self.b - self.a) ** 2 / 12.0

    def spec(self):
        return f"uniform:{self.a!r},{self.b!r}"


@dataclass(frozen=True, eq=True)
class Exponential(WeightDist):
    rate: float

    def __post_init__(self):
        _floatify(self, "rate")
        if not (self.rate > 0 and math.isfinite(self.rate)):
            raise ConfigError(f"Exponential rate must be positive, got {self.rate}")

    def _kernel(self):
        return EXPONENTIAL, np.array([self.rate, 0.0, 0.0, 0.0]), _EMPTY, _EMPTY

    t0 = property(lambda self: 0.0)
    sup = property(lambda self: math.inf)

    def cdf(self, x):
        return 0.0 if x < 0 else -math.expm1(-self.rate * x)

    cdf_left = cdf

    def mean(self):
        return 1.0 / self.rate

    def variance(self):
        return 1.0 / self.rate**2

    def spec(self):
        return f"exp:{self.rate!r}"


@dataclass(frozen=True, eq=False)
class Empirical(WeightDist):
    values: tuple
    probs: tuple
    source: str | None = field(default=None, compare=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        probs = np.asarray(self.probs, dtype=np.float64)
        if vals.ndim != 1 or vals.shape != probs.shape or vals.size == 0:
            raise ConfigError("Empirical needs equally long, non-empty value/prob lists")
        if np.any(vals < 0) or not np.all(np.isfinite(vals)):
            raise ConfigError("Empirical values must be finite weights >= 0")
        if np.any(np.diff(vals) <= 0):
            raise ConfigError("Empirical values must be strictly increasing")
        if np.any(probs <= 0):
            raise ConfigError("Empirical probabilities must be positive")
        if abs(math.fsum(probs) - 1.0) > 1e-12:
            raise ConfigError(f"Empirical probabilities sum to {math.fsum(probs)!r}, not 1")
        object.__setattr__(self, "values", tuple(float(v) for v in vals))
        object.__setattr__(self, "probs", tuple(float(p) for p in probs))

    def __eq__(self, other):
        return isinstance(other, Empirical) and (self.values, self.probs) == (other.values, other.probs)

    def __hash__(self):
        return hash((self.values, self.probs))

    def _kernel(self):
        cum = np.cumsum(np.asarray(self.probs))
        cum[-1] = 1.0
        return EMPIRICAL, np.zeros(4), np.asarray(self.values), cum

    t0 = property(lambda self: self.values[0])
    sup = property(lambda self: self.values[-1])
    is_dirac = property(lambda self: len(self.values) == 1)

    def cdf(self, x):
        return min(1.0, math.fsum(p for v, p in zip(self.values, self.probs) if v <= x))

    def cdf_left(self, x):
        return min(1.0, math.fsum(p for v, p in zip(self.values, self.probs) if v < x))

    def mean(self):
        return math.fsum(v * p for v, p in zip(self.values, self.probs))

    def variance(self):
        mu = self.mean()
        return math.fsum(p * (v - mu) ** 2 for v, p in zip(self.values, self.probs))

    def spec(self):
        if self.source is not None:
            return f"empirical:{self.source}"
        raise ConfigError("in-memory Empirical laws have no file spec")

    @classmethod
    def from_csv(cls, path) -> "Empirical":
        path = Path(path)
        try:
            with path.open(newline="") as fh:
                rows = list(csv.DictReader(fh))
            values = [float(r["value"]) for r in rows]
            probs = [float(r["prob"]) for r in rows]
        except (OSError, KeyError, ValueError) as exc:
            raise ConfigError(f"cannot read empirical law from {path}: {exc}") from exc
        return cls(tuple(values), tuple(probs), source=str(path))


@dataclass(frozen=True, eq=True)
class Truncated(WeightDist):
    """The law of ``min(tau, B)`` for ``tau`` drawn from ``base``."""

    base: WeightDist
    B: float

    def _kernel(self):
        return self.base._kernel()

    @property
    def cap(self):
        return float(min(self.B, self.base.cap))

    t0 = property(lambda self: self.base.t0)
    sup = property(lambda self: min(self.B, self.base.sup))

    def cdf(self, x):
        return 1.0 if x >= self.B else self.base.cdf(x)

    def cdf_left(self, x):
        return 1.0 if x > self.B else self.base.cdf_left(x)

    def mean(self):
        return _capped_moment(self.base, self.B, 1)

    def variance(self):
        return _capped_moment(self.base, self.B, 2) - self.mean() ** 2

    def spec(self):
        raise ConfigError("truncated laws have no spec string")


def _capped_moment(base: WeightDist, B: float, order: int) -> float:
    """E[min(tau, B)^order] in closed form."""
    if isinstance(base, Truncated):
        return _capped_moment(base.base, min(B, base.B), order)
    if isinstance(base, Uniform):
        a, b = base.a, base.b
        c = min(B, b)
        inner = (c ** (order + 1) - a ** (order + 1)) / ((order + 1) * (b - a))
        return inner + (b - c) / (b - a) * c**order
    if isinstance(base, Exponential):
        r = base.rate
        if order == 1:
            return -math.expm1(-r * B) / r
        # E[min(X,B)^2] = int_0^B 2x e^{-rx} dx + B^2 e^{-rB}
        return 2.0 / r**2 * (1 - math.exp(-r * B) * (1 + r * B)) + B * B * math.exp(-r * B)
    atoms = {
        Dirac: lambda d: [(d.x, 1.0)],
        TwoPoint: lambda d: [(d.lo, d.p_lo), (d.hi, 1 - d.p_lo)],
        Empirical: lambda d: list(zip(d.values, d.probs)),
    }[type(base)](base)
    return math.fsum(p * min(v, B) ** order for v, p in atoms)


def inv_cdf(dist: WeightDist, u):
    return dist.inv_cdf(u)


def summary(dist: WeightDist) -> DistSummary:
    return dist.summary()


def truncate(dist: WeightDist, B: float) -> WeightDist:
    """Return the law of ``min(tau, B)``; identity when ``B`` caps nothing."""
    if not B > dist.t0:
        raise DomainError(f"truncation level {B} must exceed t0={dist.t0}")
    if B >= dist.sup:
        return dist
    return Truncated(dist, float(B))


@dataclass(frozen=True)
class BernoulliReduction:
    """Two-point comparison law and the rule coupling it below the original.

    ``law`` is ``TwoPoint(t0, threshold, p)`` with ``p = P(tau < threshold)``;
    a weight strictly below the threshold maps to ``t0``, anything else to
    ``threshold``.  Evaluated at a common uniform this is exactly the
    inverse-CDF coupling, so the mapped weight never exceeds the original.
    """

    law: WeightDist
    t0: float
    threshold: float
    p: float
    v: float
    degenerate: bool = False

    def couple(self, tau):
        tau = np.asarray(tau, dtype=np.float64)
        out = np.where(tau < self.threshold, self.t0, self.threshold)
        return float(out) if out.ndim == 0 else out

    @property
    def admissible(self) -> bool:
        return (not self.degenerate) and self.v * self.p <= 1.0 - self.p


DEFAULT_REDUCTION_LEVELS = (1.0, 0.99, 0.9, 0.5)


def upper_quantile(dist: WeightDist, level: float) -> float:
    """inf{x : G(x) > level}."""
    if isinstance(dist, Truncated):
        return min(upper_quantile(dist.base, level), dist.B)
    if isinstance(dist, Dirac):
        return dist.x
    if isinstance(dist, TwoPoint):
        return dist.lo if dist.p_lo > level else dist.hi
    if isinstance(dist, Empirical):
        for v in dist.values:
            if dist.cdf(v) > level:
                return v
        return dist.values[-1]
    if isinstance(dist, Uniform):
        return dist.a + min(max(level, 0.0), 1.0) * (dist.b - dist.a)
    if isinstance(dist, Exponential):
        return -math.log1p(-level) / dist.rate if level < 1 else math.inf
    raise ConfigError(f"no quantile rule for {type(dist).__name__}")


def bernoulli_reduction(dist: WeightDist, v: float, levels=DEFAULT_REDUCTION_LEVELS) -> BernoulliReduction:
    """Two-point law below ``dist`` whose directed time constant sits above v + t0.

    Candidate thresholds are upper quantiles at ``level / (1 + v)``; the
    smallest admissible one (threshold > t0 and 0 < P(tau < threshold)) wins.
    """
    if v < 0:
        raise DomainError(f"slope must be >= 0, got {v}")
    t0 = dist.t0
    target = 1.0 / (1.0 + v)
    best = None
    for level in levels:
        if not 0 < level <= 1:
            raise DomainError(f"reduction levels must lie in (0, 1], got {level}")
        t = upper_quantile(dist, level * target)
        p = dist.cdf_left(t)
        if t > t0 and math.isfinite(t) and 0 < p <= target and p < 1:
            if best is None or t < best[0]:
                best = (t, p)
    if best is None:
        return BernoulliReduction(Dirac(t0), t0, t0, 1.0, v, degenerate=True)
    t, p = best
    return BernoulliReduction(TwoPoint(t0, t, p), t0, t, p, v)


def parse_dist(spec: str) -> WeightDist:
    """Parse ``dirac:X``, ``twopoint:LO,HI,P``, ``uniform:A,B``, ``exp:RATE``
    or ``empirical:PATH.csv``."""
    name, sep, rest = spec.partition(":")
    if not sep:
        raise ConfigError(f"distribution spec {spec!r} lacks a ':'")
    name = name.strip().lower()
    if name == "empirical":
        return Empirical.from_csv(rest)
    try:
        args = [float(a) for a in rest.split(",")]
    except ValueError as exc:
        raise ConfigError(f"bad numbers in distribution spec {spec!r}") from exc
    ctors = {"dirac": (Dirac, 1), "twopoint": (TwoPoint, 3), "uniform": (Uniform, 2), "exp": (Exponential, 1)}
    if name not in ctors:
        raise ConfigError(f"unknown distribution {name!r}")
    ctor, arity = ctors[name]
    if len(args) != arity:
        raise ConfigError(f"{name} takes {arity} parameter(s), got {len(args)}")
    return ctor(*args)
