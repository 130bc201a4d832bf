"""Shapley values from algorithmic representations.

A :class:`Decomposition` computes ``v(S)`` by starting from an initial state,
folding in the agents of ``S`` one at a time and reading off a final value.
When the states reachable over all coalitions form a small set, the Shapley
value follows from counting subsets per ``(cardinality, state)``.

Two propagation modes are offered:

* order-agnostic: ``update`` may see the agents of ``S`` in any order, so the
  state of ``S + i`` is ``update(state(S), i)``;
* order-specific: agents must be fed in a fixed global order; each subset is
  tracked as a pair of states (without ``i``, with ``i``) and ``i`` is folded
  into the second coordinate when its turn comes.

A :class:`PerElementDecomposition` writes ``v(S)`` as the total weight of the
elements selected for ``S``, each element having its own membership
decomposition. Every game here follows the convention ``v(empty) = 0``, even
when ``final(initial_state)`` says otherwise.
"""

from __future__ import annotations

import random
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Sequence

from .core import Coalition, ContractViolation, Number, PreconditionError, shapley_coefficient
from .counting import DEFAULT_STATE_BUDGET, CountTable, propagate, weighted_marginal_sum

State = Hashable


class Decomposition(ABC):
    """Setup / update / final factoring of a value-function algorithm.

    Setup happens in the constructor; ``initial_state`` returns the state
    before any agent is seen. States must be hashable and compare by value.
    ``order`` is ``None`` for order-agnostic decompositions, otherwise the
    global processing order of agents ``1..n``.
    """

    n_agents: int
    order: tuple[int, ...] | None = None

    @abstractmethod
    def initial_state(self) -> State: ...

    @abstractmethod
    def update(self, state: State, agent: int) -> State: ...

    @abstractmethod
    def final(self, state: State) -> Number: ...


class PerElementDecomposition(ABC):
    """``v(S) = sum of weight(e)`` over the elements ``e`` selected for ``S``."""

    n_agents: int
    order: tuple[int, ...] | None = None

    @abstractmethod
    def elements(self) -> Sequence[Hashable]: ...

    @abstractmethod
    def weight(self, element: Hashable) -> Number: ...

    @abstractmethod
    def membership(self, element: Hashable) -> Decomposition:
        """Decomposition whose ``final`` is 1 iff ``element`` is selected."""


@dataclass(frozen=True)
class StatePair:
    without_i: State
    with_i: State


def _processing_order(n: int, order: Sequence[int] | None) -> tuple[int, ...]:
    if order is None:
        return tuple(range(1, n + 1))
    order = tuple(order)
    if sorted(order) != list(range(1, n + 1)):
        raise PreconditionError(f"order {order} is not a permutation of 1..{n}")
    return order


def evaluate(d: Decomposition, coalition: Coalition) -> Number:
    """Run the decomposition on ``coalition`` directly."""
    if coalition.mask == 0:
        return 0
    state = d.initial_state()
    for j in _processing_order(d.n_agents, d.order):
        if j in coalition:
            state = d.update(state, j)
    return d.final(state)


def selected_elements(p: PerElementDecomposition, coalition: Coalition) -> list[Hashable]:
    """Elements selected for ``coalition`` by running every membership decomposition."""
    if coalition.mask == 0:
        return []
    return [e for e in p.elements() if evaluate(p.membership(e), coalition) == 1]


def evaluate_per_element(p: PerElementDecomposition, coalition: Coalition) -> Number:
    return sum((p.weight(e) for e in selected_elements(p, coalition)), 0)


@dataclass(frozen=True)
class DecompositionGame:
    """A decomposition viewed as a ValueFunction (direct execution)."""

    decomposition: Decomposition

    @property
    def n_agents(self) -> int:
        return self.decomposition.n_agents

    def value(self, coalition: Coalition) -> Number:
        return evaluate(self.decomposition, coalition)


@dataclass(frozen=True)
class PerElementGame:
    decomposition: PerElementDecomposition

    @property
    def n_agents(self) -> int:
        return self.decomposition.n_agents

    def value(self, coalition: Coalition) -> Number:
        return evaluate_per_element(self.decomposition, coalition)


def check_order_agnostic(
    d: Decomposition, trials: int = 16, max_size: int = 6, seed: int = 0
) -> None:
    """Spot-check that the final state of a random coalition ignores processing order.

    Raises :class:`ContractViolation` naming a witness pair of orderings.
    """
    rng = random.Random(seed)
    n = d.n_agents
    for _ in range(trials):
        members = rng.sample(range(1, n + 1), rng.randint(2, min(max_size, n))) if n >= 2 else []
        if len(members) < 2:
            return
        first = list(members)
        second = list(members)
        rng.shuffle(second)
        s1 = s2 = d.initial_state()
        for j in first:
            s1 = d.update(s1, j)
        for j in second:
            s2 = d.update(s2, j)
        if s1 != s2:
            raise ContractViolation(
                f"decomposition is not order-agnostic: order {first} gives {s1!r}, "
                f"order {second} gives {s2!r}"
            )


def _check_agent(n: int, i: int) -> None:
    if not 1 <= i <= n:
        raise PreconditionError(f"agent {i} outside 1..{n}")


def _empty_correction(d: Decomposition, n: int) -> Fraction:
    # The partition with s = 0 is S = empty. Its regular marginal subtracts
    # final(initial_state); the convention v(empty) = 0 subtracts nothing.
    base = d.final(d.initial_state())
    if not base:
        return Fraction(0)
    return shapley_coefficient(0, n) * base


def agnostic_table(
    d: Decomposition,
    excluded: int,
    order: Sequence[int] | None = None,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> CountTable:
    """Counts of subsets of ``N \\ {excluded}`` by ``(cardinality, final state)``."""
    agents = [j for j in _processing_order(d.n_agents, order) if j != excluded]
    return propagate(d.initial_state(), agents, d.update, d.n_agents, state_budget)


def ordered_table(
    d: Decomposition,
    order: Sequence[int],
    i: int,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> CountTable:
    """Counts of subsets ``S`` of ``N \\ {i}`` by ``(|S|, StatePair(state(S), state(S+i)))``."""
    order = _processing_order(d.n_agents, order)
    init = d.initial_state()
    table = CountTable.start(StatePair(init, init), d.n_agents)
    update = d.update
    for j in order:
        if j == i:
            table.remap(lambda p: StatePair(p.without_i, update(p.with_i, i)))
        else:
            table.add_agent(
                lambda p, j=j: StatePair(update(p.without_i, j), update(p.with_i, j)),
                state_budget,
            )
    return table


def shapley_via_decomposition(
    d: Decomposition,
    i: int,
    state_budget: int = DEFAULT_STATE_BUDGET,
    verify: bool = True,
) -> Fraction:
    """Shapley value of agent ``i`` for an order-agnostic decomposition."""
    n = d.n_agents
    _check_agent(n, i)
    if d.order is not None:
        raise PreconditionError(
            "decomposition declares a processing order; use shapley_via_decomposition_ordered"
        )
    if verify:
        check_order_agnostic(d)
    table = agnostic_table(d, i, state_budget=state_budget)
    final, update = d.final, d.update
    phi = weighted_marginal_sum(table, lambda v: final(update(v, i)) - final(v), n)
    return phi + _empty_correction(d, n)


def shapley_via_decomposition_ordered(
    d: Decomposition,
    order: Sequence[int],
    i: int,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> Fraction:
    """Shapley value of agent ``i`` when agents must be processed in ``order``."""
    n = d.n_agents
    _check_agent(n, i)
    table = ordered_table(d, order, i, state_budget)
    final = d.final
    phi = weighted_marginal_sum(table, lambda p: final(p.with_i) - final(p.without_i), n)
    return phi + _empty_correction(d, n)


def shapley_via_per_element(
    p: PerElementDecomposition,
    i: int,
    ordered: bool = False,
    order: Sequence[int] | None = None,
    state_budget: int = DEFAULT_STATE_BUDGET,
    verify: bool = True,
) -> Fraction:
    """Shapley value of agent ``i`` summed element by element.

    For each element, subsets are counted by the membership states with and
    without ``i``; the difference of the two membership bits is the element's
    share of ``i``'s marginal contribution.
    """
    n = p.n_agents
    _check_agent(n, i)
    if ordered and order is None:
        order = p.order
        if order is None:
            raise PreconditionError("ordered mode needs an order")
    total = Fraction(0)
    for e in p.elements():
        w = p.weight(e)
        if not w:
            continue
        d = p.membership(e)
        if ordered:
            phi_e = shapley_via_decomposition_ordered(d, order, i, state_budget)
        else:
            phi_e = shapley_via_decomposition(d, i, state_budget, verify)
        total += w * phi_e
    return total


def shapley_engine_all(
    model: Decomposition | PerElementDecomposition,
    agents: Iterable[int] | None = None,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> list[Fraction]:
    """Engine values for several agents, choosing the mode the model declares."""
    agents = range(1, model.n_agents + 1) if agents is None else agents
    return [shapley_engine(model, i, state_budget) for i in agents]


def shapley_engine(
    model: Decomposition | PerElementDecomposition,
    i: int,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> Fraction:
    if isinstance(model, PerElementDecomposition):
        return shapley_via_per_element(
            model, i, ordered=model.order is not None, state_budget=state_budget
        )
    if model.order is not None:
        return shapley_via_decomposition_ordered(model, model.order, i, state_budget)
    return shapley_via_decomposition(model, i, state_budget)
