import itertools
import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from affinega.geometry import IDENTITY, AffineParams, warp
from affinega.matching import (
    S_TO_W,
    W_TO_S,
    MatchOrder,
    distance_matrix,
    evaluate,
    evaluate_population,
    fresh_match_order,
    greedy_assign,
)

SQRT101 = math.sqrt(101)


def order_of(n, k):
    return MatchOrder(np.arange(n), np.arange(k))


def pairs(m):
    return sorted(zip(*np.nonzero(m)))


def test_distance_matrix_examples():
    assert distance_matrix([[0, 0]], [[0, 0]]).tolist() == [[0.0]]
    assert distance_matrix([[0, 0]], [[3, 4]]).tolist() == [[5.0]]
    delta = distance_matrix([[0, 0], [10, 0]], [[0, 1], [10, 1]])
    np.testing.assert_array_equal(delta, [[1.0, SQRT101], [SQRT101, 1.0]])


@pytest.mark.parametrize("order", [(0, 1), (1, 0)])
def test_greedy_uncontested(order):
    delta = np.array([[1.0, SQRT101], [SQRT101, 1.0]])
    assert pairs(greedy_assign(delta, order, W_TO_S)) == [(0, 0), (1, 1)]
    assert pairs(greedy_assign(delta, order, S_TO_W)) == [(0, 0), (1, 1)]


def test_greedy_first_visitor_claims_single_target():
    delta = distance_matrix([[0, 0], [0.5, 0]], [[0, 0]])
    assert pairs(greedy_assign(delta, (0, 1), W_TO_S)) == [(0, 0)]
    assert pairs(greedy_assign(delta, (1, 0), W_TO_S)) == [(1, 0)]


@pytest.mark.parametrize("d", [0.0, 2.5, 1e9])
def test_greedy_single_pair(d):
    for direction in (W_TO_S, S_TO_W):
        assert greedy_assign([[d]], [0], direction).tolist() == [[1]]


def test_greedy_ties_go_to_lowest_index():
    delta = np.array([[2.0, 1.0, 1.0]])
    assert pairs(greedy_assign(delta, [0], W_TO_S)) == [(0, 1)]
    assert pairs(greedy_assign(delta.T, [0], S_TO_W)) == [(1, 0)]


def test_greedy_rejects_bad_order():
    with pytest.raises(ValueError):
        greedy_assign(np.ones((2, 2)), [0, 0], W_TO_S)
    with pytest.raises(ValueError):
        greedy_assign(np.ones((2, 3)), [0, 1], S_TO_W)
    with pytest.raises(ValueError):
        greedy_assign(np.ones((2, 2)), [0, 1], "sideways")


@pytest.mark.parametrize("order", list(itertools.permutations(range(3))))
def test_evaluate_identity_coincidence_is_zero(order):
    s = np.array([[0.0, 0.0], [3.0, 1.0], [-2.0, 5.0]])
    res = evaluate(s, s, IDENTITY, MatchOrder(np.array(order), np.array(order[::-1])))
    assert res.fitness == 0.0
    np.testing.assert_array_equal(np.diag(res.q), [2, 2, 2])
    np.testing.assert_array_equal(np.diag(res.q_star), [0.5, 0.5, 0.5])


def test_evaluate_bidirectional_half_weight():
    s = [[0, 1], [10, 1]]
    d = [[0, 0], [10, 0]]
    for w in itertools.permutations(range(2)):
        for so in itertools.permutations(range(2)):
            assert evaluate(s, d, IDENTITY, MatchOrder(np.array(w), np.array(so))).fitness == 1.0


def test_evaluate_is_order_dependent():
    s = [[0, 0]]
    d = [[0, 0], [0.5, 0]]
    first = evaluate(s, d, IDENTITY, MatchOrder(np.array([0, 1]), np.array([0])))
    second = evaluate(s, d, IDENTITY, MatchOrder(np.array([1, 0]), np.array([0])))
    assert first.fitness == 0.0
    assert second.fitness == 0.5
    # the S->W pass still claims warped point 0, so (1, 0) is one-directional
    assert pairs(second.m_prime) == [(1, 0)]
    assert pairs(second.m_double_prime) == [(0, 0)]
    assert second.m.tolist() == [[0.0], [1.0]]


def test_evaluate_matrices_are_consistent():
    rng = np.random.default_rng(3)
    s = rng.uniform(0, 10, (7, 2))
    d = rng.uniform(0, 10, (5, 2))
    c = AffineParams((1.1, 0.1, 0.2, -0.1, 0.9, 0.3))
    res = evaluate(s, d, c, fresh_match_order(5, 7, rng))
    np.testing.assert_array_equal(res.q, res.m_prime + res.m_double_prime)
    np.testing.assert_array_equal(res.q_star, np.where(res.q > 0, 1.0 / np.maximum(res.q, 1), 0.0))
    np.testing.assert_array_equal(res.m, res.m_prime * res.q_star)
    assert res.fitness == pytest.approx(float(np.sum(res.m * res.delta)), rel=1e-12)


def test_fresh_match_order_trivial_and_deterministic():
    o = fresh_match_order(1, 1, 0)
    assert o.w_order.tolist() == [0] and o.s_order.tolist() == [0]
    a = fresh_match_order(10, 7, np.random.default_rng(42))
    b = fresh_match_order(10, 7, np.random.default_rng(42))
    np.testing.assert_array_equal(a.w_order, b.w_order)
    np.testing.assert_array_equal(a.s_order, b.s_order)
    with pytest.raises(ValueError):
        fresh_match_order(0, 3)


def test_fresh_match_order_is_uniform():
    rng = np.random.default_rng(2024)
    counts = Counter(tuple(fresh_match_order(3, 1, rng).w_order) for _ in range(10_000))
    assert len(counts) == 6
    for perm in itertools.permutations(range(3)):
        assert abs(counts[perm] / 10_000 - 1 / 6) <= 0.02
    chi2 = sum((c - 10_000 / 6) ** 2 / (10_000 / 6) for c in counts.values())
    # 5 degrees of freedom, 99.9% quantile
    assert chi2 < 20.52


coords = st.floats(-20, 20, allow_nan=False, allow_infinity=False)
point_sets = st.lists(st.tuples(coords, coords), min_size=1, max_size=8).map(np.array)


@st.composite
def instances(draw):
    s = draw(point_sets)
    d = draw(point_sets)
    theta = draw(st.tuples(*[st.floats(-2, 2)] * 6))
    w_order = np.array(draw(st.permutations(range(len(d)))))
    s_order = np.array(draw(st.permutations(range(len(s)))))
    return s, d, AffineParams(theta), MatchOrder(w_order, s_order)


@given(instances())
@settings(max_examples=300, deadline=None)
def test_matching_properties(inst):
    s, d, c, order = inst
    res = evaluate(s, d, c, order)
    n, k = len(d), len(s)
    assert res.fitness >= 0.0
    for m in (res.m_prime, res.m_double_prime):
        assert m.sum(axis=1).max() <= 1
        assert m.sum(axis=0).max() <= 1
        assert m.sum() == min(n, k)
    assert set(np.unique(res.q)) <= {0, 1, 2}
    again = evaluate(s, d, c, order)
    assert again.fitness == res.fitness
    expected = oracles.objective(s.tolist(), d.tolist(), c.theta, order.w_order.tolist(), order.s_order.tolist())
    assert res.fitness == pytest.approx(expected, rel=1e-12, abs=1e-12)


@given(instances())
@settings(max_examples=200, deadline=None)
def test_zero_at_coincidence(inst):
    _, d, c, _ = inst
    s = warp(c, d)
    for seed in range(3):
        assert evaluate(s, d, c, fresh_match_order(len(d), len(s), seed)).fitness == 0.0


def test_population_evaluation_matches_single_evaluation_bitwise():
    rng = np.random.default_rng(8)
    s = rng.uniform(0, 100, (40, 2))
    d = rng.uniform(0, 100, (35, 2))
    genes = rng.normal([1, 0, 0, 0, 1, 0], 0.2, (25, 6))
    order = fresh_match_order(35, 40, rng)
    batch = evaluate_population(s, d, genes, order)
    single = [evaluate(s, d, g, order).fitness for g in genes]
    assert batch.tolist() == single


def test_distance_matrix_matches_warp_then_numpy():
    rng = np.random.default_rng(9)
    d = rng.uniform(0, 50, (6, 2))
    s = rng.uniform(0, 50, (4, 2))
    c = AffineParams((0.9, -0.3, 1, 0.3, 0.9, -2))
    w = warp(c, d)
    expected = np.sqrt(((w[:, None, :] - s[None, :, :]) ** 2).sum(-1))
    np.testing.assert_allclose(evaluate(s, d, c, order_of(6, 4)).delta, expected, rtol=1e-15)
