"""Exact Shapley values for knapsack budgeted games via value-vector counting.

Subsets of ``N \\ {i}`` are grouped by ``(|S|, V_S)`` where ``V_S`` is the
value vector of ``S``. Agent ``i``'s marginal contribution depends only on
``V_S``, so one count per group replaces one evaluation per subset. Running
time is polynomial in ``n`` for a fixed bin size and weight bound.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .core import PreconditionError
from .counting import DEFAULT_STATE_BUDGET, CountTable, propagate, weighted_marginal_sum
from .knapsack import GameInstance, ValueVector, zero_vector


def update_vector(u: ValueVector, length: int, weight: int) -> ValueVector:
    """Value vector after adding one agent of the given length and weight."""
    if not 0 < length < len(u):
        raise PreconditionError(f"length {length} outside 1..{len(u) - 1}")
    if weight == 0:
        return u
    head = u[:length]
    tail = tuple(max(u[b], u[b - length] + weight) for b in range(length, len(u)))
    return head + tail


def marginal_from_vector(v: ValueVector, length: int, weight: int) -> int:
    """Marginal contribution of an agent to any coalition whose value vector is ``v``."""
    top = len(v) - 1
    if not 0 < length <= top:
        raise PreconditionError(f"length {length} outside 1..{top}")
    return max(v[top - length] + weight - v[top], 0)


def _agent_order(inst: GameInstance, excluded: int, order: Sequence[int] | None) -> list[int]:
    n = inst.n_agents
    if not 1 <= excluded <= n:
        raise PreconditionError(f"agent {excluded} outside 1..{n}")
    if order is None:
        return [j for j in range(1, n + 1) if j != excluded]
    rest = [j for j in order if j != excluded]
    if sorted(rest) != [j for j in range(1, n + 1) if j != excluded]:
        raise PreconditionError("order must be a permutation of the agents")
    return rest


def build_count_table(
    inst: GameInstance,
    excluded: int,
    order: Sequence[int] | None = None,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> CountTable:
    """Counts of subsets of ``N \\ {excluded}`` by ``(cardinality, value vector)``.

    Agents are processed in ``order`` (default: ascending index); the final
    table does not depend on the order.
    """
    agents = _agent_order(inst, excluded, order)
    lengths, weights = inst.lengths, inst.weights
    return propagate(
        zero_vector(inst.bin_size),
        agents,
        lambda u, j: update_vector(u, lengths[j - 1], weights[j - 1]),
        inst.n_agents,
        state_budget,
    )


def shapley_exact_dp(
    inst: GameInstance,
    i: int,
    order: Sequence[int] | None = None,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> Fraction:
    """Exact Shapley value of agent ``i`` in the knapsack budgeted game."""
    table = build_count_table(inst, i, order, state_budget)
    l_i, w_i = inst.lengths[i - 1], inst.weights[i - 1]
    return weighted_marginal_sum(
        table, lambda v: marginal_from_vector(v, l_i, w_i), inst.n_agents
    )


def shapley_exact_dp_all(
    inst: GameInstance, agents: Iterable[int] | None = None, state_budget: int = DEFAULT_STATE_BUDGET
) -> list[Fraction]:
    agents = range(1, inst.n_agents + 1) if agents is None else agents
    return [shapley_exact_dp(inst, i, state_budget=state_budget) for i in agents]
