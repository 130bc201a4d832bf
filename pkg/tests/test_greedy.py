import random
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from budgeted_shapley.core import Coalition
from budgeted_shapley.greedy import (
    GreedyGame,
    greedy_order,
    greedy_per_element,
    greedy_select,
    greedy_value,
    shapley_greedy,
)
from budgeted_shapley.knapsack import GameInstance, knapsack_value
from budgeted_shapley.oracle import brute_subsets_all
from budgeted_shapley.engine import shapley_via_per_element

from conftest import naive_greedy, naive_knapsack, naive_shapley


@st.composite
def instances(draw, max_n=7):
    bin_size = draw(st.integers(1, 5))
    n = draw(st.integers(1, max_n))
    pairs = draw(
        st.lists(st.tuples(st.integers(1, bin_size), st.integers(0, 8)), min_size=n, max_size=n)
    )
    return GameInstance.from_pairs(pairs, bin_size)


def test_selection_example():
    inst = GameInstance.from_pairs([(1, 3), (2, 4)], 2)
    assert greedy_select(inst, Coalition.full(2)).members == (2,)
    assert [shapley_greedy(inst, i) for i in (1, 2)] == [Fraction(3, 2), Fraction(5, 2)]


def test_ratio_ties_go_to_lower_index():
    inst = GameInstance.from_pairs([(2, 4), (1, 2), (1, 3)], 2)
    assert greedy_order(inst) == (3, 1, 2)


def test_empty_coalition_selects_nothing():
    inst = GameInstance.from_pairs([(1, 3)], 1)
    assert greedy_value(inst, Coalition.empty(1)) == 0


@given(instances(max_n=8))
@settings(max_examples=80, deadline=None)
def test_value_matches_naive_and_half_approximates(inst):
    n = inst.n_agents
    for mask in range(1 << n):
        s = Coalition(mask, n)
        g = greedy_value(inst, s)
        assert g == naive_greedy(inst.pairs, inst.bin_size, s.members)
        assert greedy_select(inst, s).mask & ~mask == 0
        assert inst.length(greedy_select(inst, s)) <= inst.bin_size
        assert g <= knapsack_value(inst, s) <= 2 * g


@given(instances(max_n=6))
@settings(max_examples=60, deadline=None)
def test_shapley_matches_naive_oracle(inst):
    n = inst.n_agents
    expected = naive_shapley(n, lambda s: naive_greedy(inst.pairs, inst.bin_size, s))
    values = [shapley_greedy(inst, i) for i in range(1, n + 1)]
    assert values == expected
    assert sum(values) == greedy_value(inst, Coalition.full(n))


def test_per_element_reproduces_value():
    rng = random.Random(9)
    for _ in range(30):
        n = rng.randint(1, 7)
        b = rng.randint(1, 4)
        inst = GameInstance.from_pairs([(rng.randint(1, b), rng.randint(0, 6)) for _ in range(n)], b)
        p = greedy_per_element(inst)
        for mask in range(1 << n):
            s = Coalition(mask, n)
            picked = 0
            for e in p.elements():
                d = p.membership(e)
                state = d.initial_state()
                for j in p.order:
                    if j in s:
                        state = d.update(state, j)
                picked += p.weight(e) * d.final(state)
            assert picked == greedy_value(inst, s)


def test_engine_order_matches_greedy_order_brute(rng):
    for _ in range(20):
        n = rng.randint(1, 7)
        b = rng.randint(1, 4)
        inst = GameInstance.from_pairs([(rng.randint(1, b), rng.randint(0, 6)) for _ in range(n)], b)
        p = greedy_per_element(inst)
        brute = brute_subsets_all(GreedyGame(inst)).values
        assert tuple(
            shapley_via_per_element(p, i, ordered=True) for i in range(1, n + 1)
        ) == brute
