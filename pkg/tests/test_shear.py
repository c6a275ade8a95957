import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unitfpp.dist import TwoPoint, Uniform
from unitfpp.env import Environment
from unitfpp.errors import ContractError, DomainError
from unitfpp.path import PioneerVector, passage_time_A
from unitfpp.shear import (
    ShearSeq,
    apply_shear_path,
    delta_V,
    permutation_shear,
    sample_shear,
    sheared_time_B,
    telescoped_difference,
)


def test_sample_shear_extremes_and_mean():
    assert sample_shear(0.0, 50, 1).bits.sum() == 0
    assert sample_shear(1.0, 50, 1).bits.sum() == 50
    w = sample_shear(0.5, 100_000, 3)
    assert abs(w.bits.mean() - 0.5) <= 4 * math.sqrt(0.25 / 100_000)
    assert sample_shear(0.5, 100, 3, 2) == sample_shear(0.5, 100, 3, 2)
    with pytest.raises(DomainError):
        sample_shear(1.5, 10, 0)


def test_prefix_invariants():
    w = sample_shear(0.3, 40, 8)
    pre = w.prefix
    assert pre[0] == 0 and np.all(np.diff(pre) >= 0) and pre[-1] <= len(w)
    assert np.array_equal(pre[1:], np.cumsum(w.bits))


def test_apply_shear_examples():
    g = PioneerVector((0, 1, 2))
    assert apply_shear_path(g, ShearSeq(np.array([1, 0, 1]), 0.5), 1) == (0, 2, 3)
    assert apply_shear_path(g, [0, 0, 0], -1) == g.gamma
    with pytest.raises(ContractError):
        apply_shear_path(g, [1], 1)


@given(d=st.lists(st.integers(-5, 5), min_size=1, max_size=15), data=st.data())
@settings(max_examples=200, deadline=None)
def test_shear_inverse(d, data):
    g = PioneerVector(tuple(np.concatenate([[0], np.cumsum(d)]).tolist()))
    bits = data.draw(st.lists(st.integers(0, 1), min_size=len(d), max_size=len(d)))
    assert apply_shear_path(PioneerVector(apply_shear_path(g, bits, 1)), bits, -1) == g.gamma


def test_delta_v():
    assert (delta_V(0), delta_V(-1), delta_V(5)) == (1, -1, 1)
    for z in range(-10, 10):
        assert delta_V(z) == abs(z + 1) - abs(z)


def test_permutation_shear():
    assert permutation_shear(0.0, 20, 0.7, 1).bits.sum() == 0
    w = permutation_shear(0.5, 9, 0.0, 1)
    assert len(w) == 10 and w.bits.sum() == 5
    assert permutation_shear(1.0, 3, 0.3, 0).bits.sum() == 3
    with pytest.raises(DomainError):
        permutation_shear(1.2, 3, 0.0, 0)


@given(x=st.floats(0, 1), v=st.floats(0, 3), n=st.integers(0, 60))
@settings(max_examples=100, deadline=None)
def test_permutation_shear_count(x, v, n):
    from unitfpp.path import target_height

    w = permutation_shear(x, n, v, 5)
    assert len(w) == n + 1 and w.bits.sum() == target_height(v + x, n) - target_height(v, n)


def test_permutation_shear_is_exchangeable():
    means = np.mean([permutation_shear(0.5, 9, 0.0, 1, r).bits for r in range(10_000)], axis=0)
    assert np.all(np.abs(means - 0.5) <= 4 * math.sqrt(0.25 / 10_000))


DYADIC = TwoPoint(0.5, 2.25, 0.25)


@given(d=st.lists(st.integers(-4, 4), min_size=1, max_size=10), seed=st.integers(0, 500), data=st.data())
@settings(max_examples=200, deadline=None)
def test_shear_identities(d, seed, data):
    g = PioneerVector(tuple(np.concatenate([[0], np.cumsum(d)]).tolist()))
    bits = np.array(data.draw(st.lists(st.integers(0, 1), min_size=len(d), max_size=len(d))))
    for sign in (1, -1):
        for dist in (DYADIC, Uniform(0, 1)):
            env = Environment(seed, 0, dist)
            image = PioneerVector(apply_shear_path(g, bits, sign))
            assert sheared_time_B(g, bits, sign, env) == passage_time_A(image, env.with_overlay(bits, -sign))
        env = Environment(seed, 0, DYADIC)
        A, B = passage_time_A(g, env), sheared_time_B(g, bits, sign, env)
        assert (B - A if sign == 1 else A - B) == telescoped_difference(g, bits, sign)
    assert sheared_time_B(g, np.zeros(len(d), dtype=int), 1, Environment(seed, 0, DYADIC)) == passage_time_A(
        g, Environment(seed, 0, DYADIC))
