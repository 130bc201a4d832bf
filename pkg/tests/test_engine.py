from dataclasses import dataclass
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from budgeted_shapley.core import CapacityError, Coalition, ContractViolation, FunctionGame, PreconditionError
from budgeted_shapley.oracle import brute_subsets_all
from budgeted_shapley.engine import (
    Decomposition,
    DecompositionGame,
    check_order_agnostic,
    evaluate,
    shapley_engine,
    shapley_via_decomposition,
    shapley_via_decomposition_ordered,
)

from conftest import naive_shapley


@dataclass(frozen=True)
class CappedSum(Decomposition):
    """v(S) = min(sum of weights, cap) squared; order-agnostic."""

    weights: tuple[int, ...]
    cap: int

    @property
    def n_agents(self):
        return len(self.weights)

    def initial_state(self):
        return 0

    def update(self, state, agent):
        return min(state + self.weights[agent - 1], self.cap)

    def final(self, state):
        return state * state


@dataclass(frozen=True)
class LastSeen(Decomposition):
    """v(S) = weight of the last agent fed in; depends on processing order."""

    weights: tuple[int, ...]
    order: tuple[int, ...] | None = None

    @property
    def n_agents(self):
        return len(self.weights)

    def initial_state(self):
        return None

    def update(self, state, agent):
        return agent

    def final(self, state):
        return 0 if state is None else self.weights[state - 1]


@dataclass(frozen=True)
class Constant(Decomposition):
    """final(initial_state) is nonzero; the engine must still treat v(empty) as 0."""

    n_agents: int

    def initial_state(self):
        return 0

    def update(self, state, agent):
        return state

    def final(self, state):
        return 7


def game_of(d, order=None):
    def v(s):
        if not s:
            return 0
        state = d.initial_state()
        for j in order or sorted(s):
            if j in s:
                state = d.update(state, j)
        return d.final(state)

    return v


@given(st.lists(st.integers(0, 4), min_size=1, max_size=6), st.integers(0, 10))
@settings(max_examples=50, deadline=None)
def test_agnostic_engine_matches_naive(weights, cap):
    d = CappedSum(tuple(weights), cap)
    n = len(weights)
    expected = naive_shapley(n, game_of(d))
    assert [shapley_via_decomposition(d, i) for i in range(1, n + 1)] == expected


@given(st.lists(st.integers(0, 5), min_size=1, max_size=6), st.data())
@settings(max_examples=50, deadline=None)
def test_ordered_engine_matches_naive(weights, data):
    n = len(weights)
    order = tuple(data.draw(st.permutations(range(1, n + 1))))
    d = LastSeen(tuple(weights), order)
    expected = naive_shapley(n, game_of(d, order))
    assert [shapley_via_decomposition_ordered(d, order, i) for i in range(1, n + 1)] == expected
    assert [shapley_engine(d, i) for i in range(1, n + 1)] == expected
    for mask in range(1 << n):
        s = Coalition(mask, n)
        assert evaluate(d, s) == game_of(d, order)(frozenset(s.members))


def test_empty_convention_overrides_initial_final():
    d = Constant(3)
    # v(S) = 7 for nonempty S, so each agent gets 7/3
    assert [shapley_via_decomposition(d, i) for i in (1, 2, 3)] == [Fraction(7, 3)] * 3
    assert DecompositionGame(d).value(Coalition.empty(3)) == 0


def test_order_sensitive_model_is_rejected():
    d = LastSeen((1, 2, 3, 4))
    with pytest.raises(ContractViolation, match="order"):
        check_order_agnostic(d)
    with pytest.raises(ContractViolation):
        shapley_via_decomposition(d, 1)


def test_declared_order_requires_ordered_mode():
    d = LastSeen((1, 2), (2, 1))
    with pytest.raises(PreconditionError):
        shapley_via_decomposition(d, 1)


def test_bad_agent_and_order():
    d = CappedSum((1, 2), 3)
    with pytest.raises(PreconditionError):
        shapley_via_decomposition(d, 3)
    with pytest.raises(PreconditionError):
        shapley_via_decomposition_ordered(d, (1, 1), 1)


def test_state_budget():
    d = CappedSum(tuple(2**j for j in range(10)), 10**6)
    with pytest.raises(CapacityError):
        shapley_via_decomposition(d, 1, state_budget=50)


def test_agnostic_on_function_game_brute_equivalence():
    d = CappedSum((3, 1, 4, 1, 5), 9)
    g = FunctionGame(5, lambda s: evaluate(d, s))
    assert [shapley_via_decomposition(d, i) for i in range(1, 6)] == list(brute_subsets_all(g).values)
