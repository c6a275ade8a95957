import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unitfpp.dist import (
    Dirac,
    Empirical,
    Exponential,
    Truncated,
    TwoPoint,
    Uniform,
    bernoulli_reduction,
    inv_cdf,
    parse_dist,
    summary,
    truncate,
)
from unitfpp.errors import ConfigError, DomainError
from unitfpp.rng import STREAM_ORACLE, uniforms

LAWS = [
    Dirac(2.0),
    TwoPoint(1.0, 3.0, 0.25),
    Uniform(1.0, 2.0),
    Exponential(1.5),
    Empirical((0.0, 0.5, 2.0), (0.2, 0.3, 0.5)),
    Truncated(Exponential(1.0), 0.7),
]


def test_inverse_cdf_examples():
    assert inv_cdf(Dirac(2), 0.3) == 2
    assert inv_cdf(TwoPoint(1, 3, 0.25), 0.2) == 1
    assert inv_cdf(TwoPoint(1, 3, 0.25), 0.9) == 3
    assert inv_cdf(Uniform(1, 2), 0.5) == 1.5


def test_inverse_cdf_rejects_closed_endpoints():
    with pytest.raises(DomainError):
        inv_cdf(Uniform(0, 1), 0.0)
    with pytest.raises(DomainError):
        inv_cdf(Uniform(0, 1), 1.0)


def test_summaries():
    assert (summary(TwoPoint(1, 3, 0.5)).t0, summary(TwoPoint(1, 3, 0.5)).atom_at_t0) == (1, 0.5)
    assert (summary(Uniform(0, 1)).t0, summary(Uniform(0, 1)).atom_at_t0) == (0, 0)
    s = summary(Dirac(0))
    assert (s.t0, s.atom_at_t0) == (0, 1)
    assert summary(Empirical((0.5, 1.0), (0.25, 0.75))).atom_at_t0 == 0.25
    assert summary(Exponential(2.0)).atom_at_t0 == 0


@pytest.mark.parametrize(
    "bad",
    [
        lambda: TwoPoint(3, 1, 0.5),
        lambda: TwoPoint(1, 3, 1.0),
        lambda: TwoPoint(-1, 3, 0.5),
        lambda: Uniform(2, 2),
        lambda: Exponential(0),
        lambda: Dirac(-1),
        lambda: Empirical((0.0, 1.0), (0.5, 0.4)),
        lambda: Empirical((1.0, 0.0), (0.5, 0.5)),
    ],
)
def test_malformed_parameters(bad):
    with pytest.raises(ConfigError):
        bad()


def test_truncate_examples():
    t = truncate(Uniform(0, 2), 1)
    assert isinstance(t, Truncated)
    assert t.cdf_left(1.0) == pytest.approx(0.5)
    assert t.cdf(1.0) == 1.0
    assert t.summary().atom_at_t0 == 0
    assert truncate(Dirac(2), 3) == Dirac(2)
    with pytest.raises(DomainError):
        truncate(Uniform(1, 2), 1.0)


@pytest.mark.parametrize("dist", LAWS, ids=lambda d: type(d).__name__)
@given(u=st.floats(min_value=1e-12, max_value=1 - 1e-12), w=st.floats(min_value=1e-12, max_value=1 - 1e-12))
@settings(max_examples=60, deadline=None)
def test_inverse_cdf_monotone(dist, u, w):
    lo, hi = sorted((u, w))
    assert inv_cdf(dist, lo) <= inv_cdf(dist, hi)


@given(
    u=st.floats(min_value=1e-12, max_value=1 - 1e-12),
    B=st.floats(min_value=0.01, max_value=5.0),
)
@settings(max_examples=100, deadline=None)
def test_truncation_coupling_is_a_cap(u, B):
    base = Exponential(1.0)
    assert inv_cdf(truncate(base, B), u) == min(inv_cdf(base, u), B)
    assert inv_cdf(truncate(base, B), u) <= inv_cdf(base, u)


@pytest.mark.parametrize("dist", LAWS, ids=lambda d: type(d).__name__)
def test_sample_mean_and_support_floor(dist):
    u = uniforms(11, 0, STREAM_ORACLE, 1, np.arange(1_000_000))
    x = dist.inv_cdf(u)
    se = math.sqrt(dist.variance() / x.size)
    assert abs(x.mean() - dist.mean()) <= 4 * se + 1e-12
    assert x.min() >= dist.t0
    if isinstance(dist, (Dirac, TwoPoint, Empirical)):
        assert x.min() == dist.t0


def test_bernoulli_reduction_examples():
    r = bernoulli_reduction(Uniform(1, 2), 1.0, levels=(1.0,))
    assert r.law == TwoPoint(1, 1.5, 0.5)
    assert r.admissible
    assert r.couple(1.2) == 1.0
    default = bernoulli_reduction(Uniform(1, 2), 1.0)
    assert default.law == TwoPoint(1, 1.25, 0.25)
    two = bernoulli_reduction(TwoPoint(1, 3, 0.5), 1.0)
    assert two.law == TwoPoint(1, 3, 0.5)
    assert bernoulli_reduction(Dirac(1), 1.0).degenerate


@given(u=st.floats(min_value=1e-9, max_value=1 - 1e-9), v=st.floats(min_value=0, max_value=5))
@settings(max_examples=100, deadline=None)
def test_reduced_weight_stays_below(u, v):
    dist = Uniform(1, 2)
    r = bernoulli_reduction(dist, v)
    tau = inv_cdf(dist, u)
    assert r.couple(tau) <= tau
    assert r.couple(tau) == inv_cdf(r.law, u)


def test_parse_dist(tmp_path):
    assert parse_dist("dirac:1") == Dirac(1)
    assert parse_dist("twopoint:1,3,0.5") == TwoPoint(1, 3, 0.5)
    assert parse_dist("exp:2") == Exponential(2)
    f = tmp_path / "law.csv"
    f.write_text("value,prob\n0.5,0.25\n1.5,0.75\n")
    e = parse_dist(f"empirical:{f}")
    assert e.values == (0.5, 1.5) and e.spec() == f"empirical:{f}"
    assert e.summary().atom_at_t0 == 0.25
    for bad in ("nope", "gamma:1", "uniform:1", "uniform:a,b"):
        with pytest.raises(ConfigError):
            parse_dist(bad)
