"""Sparse subset counting over DP states.

A :class:`CountTable` maps each reachable state to the number of subsets of
the processed agents that end in that state, split by subset cardinality.
The per-cardinality counts of one state are packed into a single integer:
the count for cardinality ``s`` lives in bits ``[s*width, (s+1)*width)``.
Adding an agent to every subset of a state is then a left shift by ``width``
and merging two states is plain integer addition. ``width`` exceeds the bit
length of ``2**(n-1)``, so no field can overflow into its neighbour.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, Hashable, Iterable, Iterator

from .core import CapacityError, Number, coefficient_numerators

DEFAULT_STATE_BUDGET = 1_000_000


def field_width(n_agents: int) -> int:
    return n_agents + 1


@dataclass
class CountTable:
    """Subset counts keyed by ``(cardinality, state)``.

    ``layer`` is the number of agents processed so far, so the counts sum to
    ``2**layer``. Absent keys have count zero.
    """

    width: int
    layer: int
    packed: dict[Hashable, int]

    @classmethod
    def start(cls, initial_state: Hashable, n_agents: int) -> "CountTable":
        return cls(field_width(n_agents), 0, {initial_state: 1})

    @property
    def n_states(self) -> int:
        return len(self.packed)

    def get(self, s: int, state: Hashable) -> int:
        return (self.packed.get(state, 0) >> (s * self.width)) & ((1 << self.width) - 1)

    def unpack(self, poly: int) -> list[int]:
        mask = (1 << self.width) - 1
        out = []
        while poly:
            out.append(poly & mask)
            poly >>= self.width
        return out

    def items(self) -> Iterator[tuple[int, Hashable, int]]:
        """``(cardinality, state, count)`` for every nonzero entry."""
        for state, poly in self.packed.items():
            for s, c in enumerate(self.unpack(poly)):
                if c:
                    yield s, state, c

    def as_dict(self) -> dict[tuple[int, Hashable], int]:
        return {(s, state): c for s, state, c in self.items()}

    def total(self) -> int:
        return sum(c for _, _, c in self.items())

    def add_agent(
        self,
        take: Callable[[Hashable], Hashable],
        state_budget: int = DEFAULT_STATE_BUDGET,
    ) -> None:
        """Extend every subset by skipping or taking one more agent."""
        new = dict(self.packed)
        for state, poly in self.packed.items():
            nxt = take(state)
            new[nxt] = new.get(nxt, 0) + (poly << self.width)
        self.layer += 1
        if len(new) > state_budget:
            raise CapacityError(
                f"state budget {state_budget} exceeded at layer {self.layer} "
                f"({len(new)} distinct states)",
                layer=self.layer,
                states=len(new),
            )
        self.packed = new

    def remap(self, fn: Callable[[Hashable], Hashable]) -> None:
        """Apply ``fn`` to every state without changing subset counts."""
        new: dict[Hashable, int] = {}
        for state, poly in self.packed.items():
            key = fn(state)
            new[key] = new.get(key, 0) + poly
        self.packed = new


def propagate(
    initial_state: Hashable,
    agents: Iterable[int],
    update: Callable[[Hashable, int], Hashable],
    n_agents: int,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> CountTable:
    """Count subsets of ``agents`` by (cardinality, final state) by forward propagation."""
    table = CountTable.start(initial_state, n_agents)
    for j in agents:
        table.add_agent(lambda st, j=j: update(st, j), state_budget)
    return table


def weighted_marginal_sum(
    table: CountTable,
    marginal: Callable[[Hashable], Number],
    n_agents: int,
) -> Fraction:
    """``sum_{s,state} count * s!(n-s-1)!/n! * marginal(state)``.

    States are grouped by marginal first so each distinct marginal value is
    unpacked once.
    """
    by_marginal: dict[Number, int] = defaultdict(int)
    for state, poly in table.packed.items():
        m = marginal(state)
        if m:
            by_marginal[m] += poly
    weights = coefficient_numerators(n_agents)
    total = Fraction(0)
    for m, poly in by_marginal.items():
        counts = table.unpack(poly)
        total += m * sum(c * weights[s] for s, c in enumerate(counts))
    return total / factorial(n_agents)
