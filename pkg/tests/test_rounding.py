import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from budgeted_shapley.core import Coalition, PreconditionError, TabularGame
from budgeted_shapley.generators import random_knapsack
from budgeted_shapley.knapsack import GameInstance, KnapsackGame, knapsack_value, w_max
from budgeted_shapley.oracle import brute_subsets_all
from budgeted_shapley.rounding import (
    RoundedGame,
    check_additive_gap,
    parse_rational,
    round_instance,
    rounded_value,
    shapley_approx,
)
from budgeted_shapley.vector_dp import shapley_exact_dp


def test_rounding_example():
    inst = GameInstance.from_pairs([(1, 10), (1, 7)], 1)
    r = round_instance(inst, "1/2")
    assert r.scale == 5 and r.rounded_weights == (2, 1) and not r.fallback


def test_fallback_when_scale_at_most_one():
    inst = GameInstance.from_pairs([(1, 2), (1, 1)], 1)
    r = round_instance(inst, "1/2")
    assert r.fallback
    assert shapley_approx(inst, 1, "1/2") == shapley_exact_dp(inst, 1)


def test_all_zero_weights():
    inst = GameInstance.from_pairs([(1, 0), (2, 0)], 2)
    assert shapley_approx(inst, 2, 1) == 0


@pytest.mark.parametrize("bad", ["0", "-1/2", "abc", 0.5])
def test_bad_epsilon(bad):
    inst = GameInstance.from_pairs([(1, 2)], 1)
    with pytest.raises(PreconditionError):
        round_instance(inst, bad)


def test_parse_rational_forms():
    assert parse_rational("0.25") == Fraction(1, 4)
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational(2) == 2


@given(st.integers(0, 10**6), st.integers(1, 10**6))
def test_rational_round_trip(num, den):
    x = Fraction(num, den)
    assert parse_rational(str(x)) == x


def test_sandwich_and_error_bound():
    rng = random.Random(11)
    for _ in range(40):
        inst = random_knapsack(rng, rng.randint(1, 7), bin_max=4, weight_max=50)
        eps = rng.choice(["1/4", "1/2", "1", "2"])
        r = round_instance(inst, eps)
        bound = r.error_bound
        for mask in range(1 << inst.n_agents):
            s = Coalition(mask, inst.n_agents)
            v = knapsack_value(inst, s)
            assert v - bound <= rounded_value(r, s) <= v
        if not r.fallback:
            assert max(r.rounded_weights) <= Fraction(inst.bin_size) / r.epsilon
        for i in range(1, inst.n_agents + 1):
            assert abs(shapley_approx(inst, i, eps) - shapley_exact_dp(inst, i)) <= bound


def test_approx_equals_shapley_of_rounded_game():
    rng = random.Random(5)
    for _ in range(20):
        inst = random_knapsack(rng, rng.randint(1, 6), bin_max=3, weight_max=40)
        r = round_instance(inst, "1/2")
        expected = brute_subsets_all(RoundedGame(r)).values
        assert tuple(shapley_approx(inst, i, "1/2") for i in range(1, inst.n_agents + 1)) == expected


def test_error_bound_uses_w_max():
    inst = GameInstance.from_pairs([(2, 3), (1, 1)], 2)
    assert round_instance(inst, 1).error_bound == w_max(inst) == 3


@given(st.lists(st.integers(-8, 8), min_size=7, max_size=7), st.data())
@settings(max_examples=60, deadline=None)
def test_additive_gap_bounds_shapley_difference(values, data):
    alpha = data.draw(st.integers(0, 5))
    gaps = [0] + data.draw(st.lists(st.integers(0, alpha), min_size=7, max_size=7))
    v = TabularGame(3, (0, *values))
    v_prime = TabularGame(3, tuple(a - g for a, g in zip(v.table, gaps)))
    assert check_additive_gap(v, v_prime, alpha)
    phi, phi_prime = brute_subsets_all(v), brute_subsets_all(v_prime)
    assert all(abs(x - y) <= alpha for x, y in zip(phi.values, phi_prime.values))


def test_additive_gap_detects_violations():
    v = TabularGame(2, (0, 3, 3, 5))
    assert not check_additive_gap(v, TabularGame(2, (0, 3, 4, 5)), 1)  # v' above v
    assert not check_additive_gap(v, TabularGame(2, (0, 3, 3, 2)), 2)  # gap 3 > 2
