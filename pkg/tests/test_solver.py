import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unitfpp.checks import oracle_battery, sheared_oracle_battery
from unitfpp.dist import Dirac, Exponential, TwoPoint, Uniform
from unitfpp.env import Environment
from unitfpp.errors import ContractError, DomainError, OracleScopeError
from unitfpp.path import passage_time_A, target_height, turn_stats
from unitfpp.shear import sample_shear
from unitfpp.solver import (
    brute_force_passage,
    brute_force_sheared,
    passage_time_directed,
    passage_time_semidirected,
    passage_time_site,
    semidirected_time,
    sheared_passage,
)


def hand_instance():
    pins = {(1, 0): 5.0, (2, 0): 5.0, (1, 1): 1.0, (2, 1): 1.0}
    return Environment(0, 0, Dirac(9.0)).with_pins(pins)


@pytest.mark.parametrize("n,m", [(0, 0), (0, -3), (1, 2), (5, -4), (17, 9)])
def test_deterministic_laws(n, m):
    zero = passage_time_semidirected(Environment(1, 0, Dirac(0)), n, m)
    assert zero.time == abs(m)
    one = passage_time_semidirected(Environment(1, 0, Dirac(1)), n, m)
    assert one.time == n + abs(m)
    if m >= 0:
        assert passage_time_directed(Environment(1, 0, Dirac(1)), n, m) == n + m


def test_hand_instance():
    env = hand_instance()
    res = passage_time_semidirected(env, 2, 0)
    assert res.time == 4 and res.gamma.gamma == (0, 1, 1, 0)
    assert passage_time_directed(env, 2, 0) == 10
    assert brute_force_passage(env, 2, 0, hmax=10) == 4
    assert brute_force_passage(Environment(0, 0, Dirac(1)), 3, 2, hmax=4) == 5


def test_oracle_scope():
    with pytest.raises(OracleScopeError):
        brute_force_passage(Environment(0, 0, Uniform(0, 1)), 6, 0, hmax=20, budget=10**5)


def test_oracle_battery_small():
    rep = oracle_battery(150, seed=3)
    assert rep.ok, rep.failures[:3]


@given(seed=st.integers(0, 10**6), n=st.integers(1, 60), m=st.integers(-80, 80),
       law=st.sampled_from([TwoPoint(1, 3, 0.5), Uniform(0, 1), Exponential(1.0), TwoPoint(0, 1, 0.5)]))
@settings(max_examples=80, deadline=None)
def test_geodesic_contract(seed, n, m, law):
    env = Environment(seed, 0, law)
    res = passage_time_semidirected(env, n, m)
    assert res.time == passage_time_A(res.gamma, env)
    assert res.gamma.gamma[0] == 0 and res.gamma.m == m
    t = turn_stats(res.gamma)
    assert t.U + t.R + t.D == n + 1
    assert max(abs(h) for h in res.gamma.gamma) <= res.cylinder_halfheight
    if not res.expanded:
        lo, hi = res.band
        assert all(lo < h < hi for h in res.gamma.gamma[1:-1]) or n == 0
    assert abs(semidirected_time(env, n, m) - res.time) <= 1e-9 * res.time
    assert res.time >= law.t0 * n + abs(m)
    # reflection: solving to -m on the upside-down environment
    assert passage_time_semidirected(env.reflected(), n, -m).time == res.time
    if m >= 0:
        assert passage_time_directed(env, n, m) >= semidirected_time(env, n, m) - 1e-9


def test_site_model_endpoints():
    assert passage_time_site(1.0, 0, 0, 40, 7) == 0
    assert passage_time_site(0.0, 0, 0, 40, 7) == 40 + 7 + 1
    assert passage_time_site(0.0, 0, 0, 5, -3) == 9


def test_site_model_rare_shortcuts():
    # with few free sites, fast paths are rare: T/n stays above v + 1 - 0.2
    ratios = np.array([passage_time_site(0.005, 1, r, 500, 500) / 500 for r in range(200)])
    assert np.mean(ratios >= 1.8) >= 0.95


@pytest.mark.xfail(strict=True, reason="at p=0.05 the mean of T/n is about 1.49; free sites are too dense")
def test_site_model_stated_density():
    ratios = np.array([passage_time_site(0.05, 1, r, 500, 500) / 500 for r in range(200)])
    assert np.mean(ratios >= 1.8) >= 0.95


def test_sheared_passage_examples():
    env = Environment(2, 0, TwoPoint(1, 3, 0.5))
    n, v = 30, 0.5
    zero = np.zeros(n + 1, dtype=np.int64)
    assert sheared_passage(env, n, v, zero, 1) == semidirected_time(env, n, target_height(v, n))
    assert sheared_passage(env, 0, 0.0, [1], 1) == 1
    assert sheared_passage(env, 0, 0.0, [1], -1) == 1
    with pytest.raises(ContractError):
        sheared_passage(env, 3, 0.0, [1, 0], 1)


def test_sheared_brute_force_6x6():
    for r in range(5):
        env = Environment(7, r, Uniform(0, 1))
        w = sample_shear(0.5, 6, 7, r)
        for sign in (1, -1):
            fast = sheared_passage(env, 5, 0.4, w, sign, exact=True)
            slow = brute_force_sheared(env, 5, target_height(0.4, 5), w.bits, sign, hmax=6)
            assert fast == slow


def test_sheared_oracle_battery():
    rep = sheared_oracle_battery(60, seed=11)
    assert rep.ok, rep.failures[:3]


def test_directed_rejects_negative_target():
    with pytest.raises(DomainError):
        passage_time_directed(Environment(0, 0, Dirac(1)), 3, -1)
