import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unitfpp.combinatorics import (
    count_jump_tuples,
    count_paths_bound,
    count_paths_within,
    enumerate_jump_table,
    enumerate_jump_tuples_naive,
    naive_closed_form,
)
from unitfpp.dist import Dirac, TwoPoint, Uniform
from unitfpp.env import Environment
from unitfpp.errors import DomainError, RangeError
from unitfpp.estimators import (
    FLAT,
    NOT_FLAT,
    classify_flat_edge,
    derivative_bounds_report,
    estimate_lambda,
    estimate_lambda_sweep,
    limit_shape_curve,
    sheared_lambda_check,
    tail_estimates,
)
from unitfpp.exact import exact_lambda_directed_twopoint
from unitfpp.path import target_height
from unitfpp.stats import mean_stderr, run_replicas


# ------------------------------------------------------------------ helpers

def test_mean_stderr_constant_sample_is_exact():
    m, se = mean_stderr([0.1 + 0.2] * 7)
    assert m == 0.1 + 0.2 and se == 0.0


def test_run_replicas_order_is_stable():
    assert run_replicas(lambda r: r * r, 20, workers=4, first=3) == [r * r for r in range(3, 23)]


# ------------------------------------------------------------ exact formula

def test_exact_formula_examples():
    assert exact_lambda_directed_twopoint(0, 1, 0.5, 2) == 2
    assert exact_lambda_directed_twopoint(0, 1, 0.5, 1) == 1
    assert exact_lambda_directed_twopoint(0, 1, 0.5, 0.5) == pytest.approx(0.5 + (math.sqrt(0.5) - 0.5) ** 2)
    assert exact_lambda_directed_twopoint(0, 1, 0.5, 0.5) == pytest.approx(0.542893, abs=1e-6)


@pytest.mark.parametrize("args", [(1, 1, 0.5, 1), (-1, 1, 0.5, 1), (0, 1, 0, 1), (0, 1, 1, 1), (0, 1, 0.5, -1)])
def test_exact_formula_domain(args):
    with pytest.raises(DomainError):
        exact_lambda_directed_twopoint(*args)


@given(l0=st.floats(0, 2), gap=st.floats(0.01, 3), p=st.floats(0.01, 0.99), v=st.floats(0, 10))
@settings(max_examples=200, deadline=None)
def test_exact_formula_shape(l0, gap, p, v):
    k = l0 + gap
    lam = exact_lambda_directed_twopoint(l0, k, p, v)
    assert lam >= l0 + v - 1e-12
    # the two branches meet at the critical slope
    crit = (1 - p) / p
    assert exact_lambda_directed_twopoint(l0, k, p, crit) == pytest.approx(l0 + crit)
    # convexity along a small symmetric stencil
    h = 0.05
    if v >= h:
        mid = exact_lambda_directed_twopoint(l0, k, p, v)
        side = exact_lambda_directed_twopoint(l0, k, p, v - h) + exact_lambda_directed_twopoint(l0, k, p, v + h)
        assert mid <= side / 2 + 1e-12


def test_directed_simulation_matches_formula():
    est = estimate_lambda(TwoPoint(0, 1, 0.5), 0.5, 2000, 50, seed=1, model="directed")
    assert abs(est.mean - 0.542893) <= 0.01 * 0.542893


# ----------------------------------------------------------- lambda estimate

@pytest.mark.parametrize("x", [1.0, 2.5])
def test_dirac_estimates_are_exact(x):
    for v in (0.0, 0.3, 1.0, 2.7):
        for n in (7, 100):
            est = estimate_lambda(Dirac(x), v, n, 3, seed=0)
            assert est.mean == x + target_height(v, n) / n and est.stderr == 0.0


def test_atomic_linear_regime():
    est = estimate_lambda(TwoPoint(1, 3, 0.5), 2.0, 1000, 50, seed=5)
    assert abs(est.mean - 3) <= 0.02 * 3
    assert est.mean >= est.lower_bound_pathwise


def test_estimates_are_reproducible_and_worker_independent():
    a = estimate_lambda_sweep(Uniform(1, 2), [0, 0.5], 150, 6, seed=4, workers=1)
    b = estimate_lambda_sweep(Uniform(1, 2), [0, 0.5], 150, 6, seed=4, workers=3)
    assert [(e.mean, e.stderr, e.samples) for e in a] == [(e.mean, e.stderr, e.samples) for e in b]


def test_lipschitz_convexity_and_positivity():
    vs = [0.0, 0.5, 1.0]
    ests = estimate_lambda_sweep(Uniform(1, 2), vs, 400, 20, seed=2)
    (a, b, c) = ests
    for e, f in ((a, b), (b, c), (a, c)):
        tol = 3 * math.hypot(e.stderr, f.stderr)
        assert abs(e.mean - f.mean) <= abs(e.v - f.v) + 1 / 400 + tol
    assert b.mean <= (a.mean + c.mean) / 2 + 3 * math.hypot(a.stderr, b.stderr, c.stderr)
    for dist in (Uniform(0, 1), TwoPoint(0, 1, 0.5)):
        e0 = estimate_lambda(dist, 0.0, 300, 10, seed=1)
        assert e0.mean > 3 * e0.stderr


def test_replicas_needed():
    with pytest.raises(DomainError):
        estimate_lambda(Dirac(1), 0, 10, 1, seed=0)


# --------------------------------------------------------------- limit shape

def test_dirac_shape_is_the_diamond():
    grid = np.linspace(0, 1.5, 12)
    c = limit_shape_curve(Dirac(1), 50, 2, grid, seed=0)
    assert np.max(np.abs(c.points.sum(axis=1) - 1)) <= 1e-9
    assert tuple(c.points[0]) == (1.0, 0.0) and tuple(c.points[-1]) == (0.0, 1.0)
    assert len(c.closure) == 4 * len(c.points)
    assert np.all(c.radii > 0)
    assert np.all(np.abs(c.chord_slack) <= 1e-12)


def test_shape_lies_above_chord():
    c = limit_shape_curve(Uniform(1, 2), 200, 10, np.linspace(0, 1.3, 5), seed=3)
    assert np.all(c.chord_slack >= -3 * c.chord_slack_stderr)
    assert c.points[0][0] == pytest.approx(1 / c.estimates[0].mean)


def test_shape_grid_domain():
    with pytest.raises(DomainError):
        limit_shape_curve(Dirac(1), 10, 2, [math.pi / 2], seed=0)


# ----------------------------------------------------------------- flat edge

def test_flat_edge_examples():
    atom = classify_flat_edge(TwoPoint(1, 3, 0.5), 1.0, 1000, 50, seed=0)
    assert atom.has_atom and atom.onset_v == 1.0 and atom.test_v == (2.0,)
    assert atom.verdict == FLAT
    d = classify_flat_edge(Dirac(2), 1.0, 100, 5, seed=0)
    assert d.has_atom and d.onset_v == 0 and d.excess == (0.0,) and d.verdict == FLAT
    u = classify_flat_edge(Uniform(1, 2), n=300, replicas=20, seed=0)
    assert not u.has_atom and u.verdict == NOT_FLAT
    assert all(e > 0 for e in u.excess)
    with pytest.raises(DomainError):
        classify_flat_edge(Dirac(0))


# ------------------------------------------------------- derivative bounds

def test_dirac_derivative_report():
    n = 200
    r = derivative_bounds_report(Dirac(1), 0.0, 0.2, n, 3, seed=0)
    assert r.upper_stat == (n + 1) / n and r.lower_stat == -(n + 1) / n
    assert r.lower_stat <= 0 <= r.upper_stat
    assert r.up_minus_down == 0 and r.right_ratio == (n + 1) / n
    assert r.upper_holds and r.lower_holds and r.lipschitz_holds


def test_derivative_bounds_two_point():
    r = derivative_bounds_report(TwoPoint(1, 2, 0.5), 1.0, 0.2, 1000, 30, seed=1)
    assert r.upper_holds and r.lower_holds and r.lipschitz_holds
    assert r.upper_stat - r.lower_stat == pytest.approx(2 * r.right_ratio)


def test_up_down_symmetry_at_zero():
    r = derivative_bounds_report(Uniform(1, 2), 0.0, 0.2, 300, 30, seed=2)
    assert abs(r.up_minus_down) <= 3 * r.up_minus_down_stderr


# ------------------------------------------------------------- sheared check

def test_shear_check_without_shear_is_plain_estimate():
    s = sheared_lambda_check(Uniform(1, 2), 0.5, 0.0, 200, 8, seed=3)
    e = estimate_lambda(Uniform(1, 2), 0.5, 200, 8, seed=3)
    assert s.mean_B_over_n == e.mean and s.target == e.mean and s.paired_stderr == 0


def test_shear_check_dirac():
    s = sheared_lambda_check(Dirac(1), 0.5, 0.3, 400, 10, seed=1)
    assert s.mean_B_over_n == pytest.approx(1 + 0.5 + 0.3, abs=0.03)
    assert s.target == 1 + target_height(0.8, 400) / 400


def test_shear_check_two_point():
    s = sheared_lambda_check(TwoPoint(1, 3, 0.5), 0.0, 0.5, 500, 30, seed=4)
    assert s.agrees


def test_shear_check_domain():
    with pytest.raises(DomainError):
        sheared_lambda_check(Dirac(1), 0.2, 0.5, 10, 2, seed=0, sign=-1)


# --------------------------------------------------------------------- tails

def test_dirac_tails_are_empty():
    t = tail_estimates(Dirac(1), 1.0, (20, 40), 0.1, 10, seed=0)
    assert all(r.right_count == r.left_count == r.length_count == 0 for r in t.rows)
    assert t.right_slope == t.left_slope == 0.0


def test_fixed_target_tail_decays():
    t = tail_estimates(TwoPoint(1, 3, 0.5), 1.0, (50,), 0.3, 2000, seed=1)
    assert all(a >= b for a, b in zip(t.fixed_tail, t.fixed_tail[1:]))
    assert t.fixed_slope <= -0.2


def test_right_tail_rate_at_small_eps():
    t = tail_estimates(TwoPoint(1, 3, 0.5), 1.0, (100, 200, 400), 0.01, 400, seed=1)
    assert t.right_slope < 0


# ------------------------------------------------------------ combinatorics

def test_jump_tuple_examples():
    assert count_jump_tuples(1, 1) == 2
    assert count_jump_tuples(2, 2) == 8
    assert count_jump_tuples(2, 2, "at_most") == 13
    assert naive_closed_form(2, 2) == 9


def test_jump_tuples_match_enumeration():
    exact, at_most = enumerate_jump_table(8, 8)
    for M in range(1, 9):
        for k in range(1, 9):
            assert count_jump_tuples(M, k, "exact_sum") == exact[M - 1, k - 1]
            assert count_jump_tuples(M, k, "at_most") == at_most[M - 1, k - 1]
    for M in range(1, 4):
        for k in range(1, 4):
            assert enumerate_jump_tuples_naive(M, k) == exact[M - 1, k - 1]


def test_jump_tuple_errors():
    with pytest.raises(RangeError):
        count_jump_tuples(80, 80, "at_most")
    with pytest.raises(DomainError):
        count_jump_tuples(0, 3)
    with pytest.raises(DomainError):
        count_jump_tuples(2, 2, "sideways")


def test_path_count_bound():
    assert count_paths_bound(0, 1) == pytest.approx(2 * math.e)
    assert count_paths_bound(3, 2) > count_paths_bound(3, 1.5) and count_paths_bound(4, 1) > count_paths_bound(3, 1)
    assert count_paths_within(Environment(0, 0, Dirac(0)), 0, 1, 1) <= 2
    assert count_paths_within(Environment(0, 0, Dirac(1)), 3, 0, 3) == 1
    with pytest.raises(DomainError):
        count_paths_bound(1, 0.5)


@pytest.mark.parametrize("n", range(0, 5))
@pytest.mark.parametrize("C", [1, 2])
def test_enumerated_paths_within_bound(n, C):
    env = Environment(3, 0, Uniform(0, 1))
    budget = C * max(n, 1)
    assert count_paths_within(env, n, 0, budget) <= count_paths_bound(n, C)
