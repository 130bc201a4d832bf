"""Greedy knapsack budgeted games.

The value of a coalition is the weight of the set returned by the classical
greedy 2-approximation: scan agents by weight/length ratio (best first),
pack them until the first one that does not fit, then return the packed set
or the single heaviest agent, whichever weighs more.

Shapley values come from the order-specific per-element engine, with one
element per agent and a per-element state that replays the scan.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key, lru_cache
from typing import NamedTuple

from .core import Coalition
from .counting import DEFAULT_STATE_BUDGET
from .engine import Decomposition, PerElementDecomposition, shapley_via_per_element
from .knapsack import GameInstance


@lru_cache(maxsize=256)
def greedy_order(inst: GameInstance) -> tuple[int, ...]:
    """Agents by nonincreasing ``w/l``; equal ratios by lower index first."""

    def cmp(a: int, b: int) -> int:
        lhs = inst.weights[a - 1] * inst.lengths[b - 1]
        rhs = inst.weights[b - 1] * inst.lengths[a - 1]
        if lhs != rhs:
            return -1 if lhs > rhs else 1
        return a - b

    return tuple(sorted(range(1, inst.n_agents + 1), key=cmp_to_key(cmp)))


def _beats(inst: GameInstance, j: int, a: int | None) -> bool:
    # argmax by weight, ties to the lowest index
    if a is None:
        return True
    wj, wa = inst.weights[j - 1], inst.weights[a - 1]
    return wj > wa or (wj == wa and j < a)


def greedy_select(inst: GameInstance, coalition: Coalition) -> Coalition:
    """The set chosen by the greedy heuristic for ``coalition``."""
    if coalition.mask == 0:
        return coalition
    heaviest = None
    for j in coalition.members:
        if _beats(inst, j, heaviest):
            heaviest = j
    packed: list[int] = []
    used = 0
    for j in greedy_order(inst):
        if j not in coalition:
            continue
        if used + inst.lengths[j - 1] > inst.bin_size:
            break
        used += inst.lengths[j - 1]
        packed.append(j)
    n = inst.n_agents
    if sum(inst.weights[j - 1] for j in packed) >= inst.weights[heaviest - 1]:
        return Coalition.of(n, packed)
    return Coalition.of(n, [heaviest])


def greedy_value(inst: GameInstance, coalition: Coalition) -> int:
    return inst.weight(greedy_select(inst, coalition))


@dataclass(frozen=True)
class GreedyGame:
    """The greedy knapsack budgeted game as a ValueFunction."""

    instance: GameInstance

    @property
    def n_agents(self) -> int:
        return self.instance.n_agents

    def value(self, coalition: Coalition) -> int:
        return greedy_value(self.instance, coalition)


class ScanState(NamedTuple):
    """Progress of the greedy scan as seen by one element ``e``.

    ``used`` is the packed length, or ``bin_size + 1`` once the scan has
    stopped. ``heaviest`` is the current argmax agent (``None`` before any
    agent is seen).
    """

    used: int
    packed_weight: int
    heaviest: int | None
    e_present: bool
    e_packed: bool


@dataclass(frozen=True)
class GreedyMembership(Decomposition):
    """Is element ``e`` in the greedy selection? Agents must arrive in greedy order."""

    instance: GameInstance
    element: int

    @property
    def n_agents(self) -> int:
        return self.instance.n_agents

    @property
    def order(self) -> tuple[int, ...]:  # type: ignore[override]
        return greedy_order(self.instance)

    def initial_state(self) -> ScanState:
        return ScanState(0, 0, None, False, False)

    def update(self, state: ScanState, agent: int) -> ScanState:
        inst = self.instance
        used, packed_weight, heaviest, e_present, e_packed = state
        if _beats(inst, agent, heaviest):
            heaviest = agent
        is_e = agent == self.element
        stopped = used > inst.bin_size
        if not stopped:
            if used + inst.lengths[agent - 1] <= inst.bin_size:
                used += inst.lengths[agent - 1]
                packed_weight += inst.weights[agent - 1]
                e_packed = e_packed or is_e
            else:
                used = inst.bin_size + 1
        return ScanState(used, packed_weight, heaviest, e_present or is_e, e_packed)

    def final(self, state: ScanState) -> int:
        if not state.e_present:
            return 0
        if state.packed_weight >= self.instance.weights[state.heaviest - 1]:
            return int(state.e_packed)
        return int(state.heaviest == self.element)


@dataclass(frozen=True)
class GreedyPerElement(PerElementDecomposition):
    instance: GameInstance

    @property
    def n_agents(self) -> int:
        return self.instance.n_agents

    @property
    def order(self) -> tuple[int, ...]:  # type: ignore[override]
        return greedy_order(self.instance)

    def elements(self) -> range:
        return range(1, self.n_agents + 1)

    def weight(self, element: int) -> int:
        return self.instance.weights[element - 1]

    def membership(self, element: int) -> GreedyMembership:
        return GreedyMembership(self.instance, element)


def greedy_per_element(inst: GameInstance) -> GreedyPerElement:
    return GreedyPerElement(inst)


def shapley_greedy(
    inst: GameInstance, i: int, state_budget: int = DEFAULT_STATE_BUDGET
) -> Fraction:
    """Exact Shapley value of agent ``i`` in the greedy knapsack budgeted game."""
    p = greedy_per_element(inst)
    return shapley_via_per_element(p, i, ordered=True, order=p.order, state_budget=state_budget)
