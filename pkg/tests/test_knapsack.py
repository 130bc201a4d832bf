import random

import pytest

from budgeted_shapley.core import Coalition, PreconditionError
from budgeted_shapley.knapsack import GameInstance, KnapsackGame, knapsack_value, value_vector, w_max

from conftest import naive_knapsack


def inst(pairs, bin_size):
    return GameInstance.from_pairs(pairs, bin_size)


def test_empty_coalition_is_worth_nothing():
    g = inst([(1, 2), (1, 1)], 1)
    assert knapsack_value(g, Coalition.empty(2)) == 0


@pytest.mark.parametrize(
    "pairs, bin_size, expected",
    [([(1, 2), (1, 1)], 1, 2), ([(2, 3), (1, 1)], 2, 3)],
)
def test_knapsack_value_examples(pairs, bin_size, expected):
    # expected values from naive_knapsack over all sub-subsets
    assert naive_knapsack(pairs, bin_size, [1, 2]) == expected
    assert knapsack_value(inst(pairs, bin_size), Coalition.full(2)) == expected


def test_value_vector_examples():
    assert value_vector(inst([(1, 1)], 2), Coalition.empty(1)) == (0, 0, 0)
    assert value_vector(inst([(1, 2)], 2), Coalition.full(1)) == (0, 2, 2)
    assert value_vector(inst([(1, 2), (2, 3)], 2), Coalition.full(2)) == (0, 2, 3)


@pytest.mark.parametrize(
    "pairs, bin_size, expected",
    [([(1, 2), (1, 1)], 1, 2), ([(2, 3), (1, 1)], 2, 3), ([(3, 2)], 3, 2), ([(2, 3)], 3, 5)],
)
def test_w_max(pairs, bin_size, expected):
    assert w_max(inst(pairs, bin_size)) == expected


@pytest.mark.parametrize("pairs, bin_size", [([(0, 1)], 1), ([(3, 1)], 2), ([(1, -1)], 1), ([], 1)])
def test_invalid_instances_rejected(pairs, bin_size):
    with pytest.raises(PreconditionError):
        inst(pairs, bin_size)


def test_oversized_agents_can_be_dropped():
    g = GameInstance.from_pairs([(1, 2), (5, 9), (2, 1)], 2, drop_oversized=True)
    assert g.pairs == [(1, 2), (2, 1)]


def random_instance(rng, n):
    b = rng.randint(1, 4)
    return inst([(rng.randint(1, b), rng.randint(0, 6)) for _ in range(n)], b)


def test_matches_brute_force_and_vector_top_coordinate(rng):
    for _ in range(40):
        n = rng.randint(1, 8)
        g = random_instance(rng, n)
        table = KnapsackGame(g).tabulate()
        for mask in range(1 << n):
            s = Coalition(mask, n)
            expected = naive_knapsack(g.pairs, g.bin_size, s.members)
            assert knapsack_value(g, s) == expected == table[mask]
            vec = value_vector(g, s)
            assert vec[g.bin_size] == expected
            assert vec[0] == 0
            assert all(a <= b for a, b in zip(vec, vec[1:]))
            assert vec[-1] <= w_max(g)


def test_monotone_in_coalition(rng):
    for _ in range(20):
        n = rng.randint(2, 10)
        g = random_instance(rng, n)
        table = KnapsackGame(g).tabulate()
        for mask in range(1 << n):
            for j in range(n):
                assert table[mask] <= table[mask | 1 << j]


def test_additive_regime():
    rng = random.Random(3)
    for n in range(1, 9):
        weights = [rng.randint(0, 9) for _ in range(n)]
        g = inst([(1, w) for w in weights], n + rng.randint(0, 2))
        for mask in range(1 << n):
            s = Coalition(mask, n)
            assert knapsack_value(g, s) == sum(weights[i - 1] for i in s.members)
