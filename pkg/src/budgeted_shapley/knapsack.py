"""Knapsack budgeted games.

Each agent carries an integer ``(length, weight)`` pair. The value of a
coalition is the best total weight of a sub-coalition whose total length fits
in the bin. Values are computed with the classical capacity-indexed DP.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import Coalition, PreconditionError

#: Optimal values at every capacity ``0..bin_size``; coordinate ``b`` is the best
#: weight achievable with total length at most ``b``.
ValueVector = tuple[int, ...]


@dataclass(frozen=True)
class GameInstance:
    """Agents ``1..n`` with lengths and weights, plus the bin size.

    Only a single budget constraint is modelled; a multi-constraint variant
    would replace ``lengths`` by per-agent length vectors.
    """

    lengths: tuple[int, ...]
    weights: tuple[int, ...]
    bin_size: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "lengths", tuple(int(x) for x in self.lengths))
        object.__setattr__(self, "weights", tuple(int(x) for x in self.weights))
        if not self.lengths:
            raise PreconditionError("a game needs at least one agent")
        if len(self.lengths) != len(self.weights):
            raise PreconditionError("lengths and weights differ in size")
        if self.bin_size <= 0:
            raise PreconditionError(f"bin size must be positive, got {self.bin_size}")
        for i, (l, w) in enumerate(zip(self.lengths, self.weights), start=1):
            if l <= 0:
                raise PreconditionError(f"agent {i}: length must be positive, got {l}")
            if l > self.bin_size:
                raise PreconditionError(
                    f"agent {i}: length {l} exceeds bin size {self.bin_size}"
                )
            if w < 0:
                raise PreconditionError(f"agent {i}: weight must be nonnegative, got {w}")

    @classmethod
    def from_pairs(
        cls,
        pairs: Iterable[tuple[int, int]],
        bin_size: int,
        drop_oversized: bool = False,
    ) -> "GameInstance":
        """Build from ``(length, weight)`` pairs.

        With ``drop_oversized`` agents longer than the bin are discarded (they
        can never be packed, so they are null players) instead of rejected.
        Dropping relabels the remaining agents.
        """
        pairs = list(pairs)
        if drop_oversized:
            pairs = [(l, w) for l, w in pairs if l <= bin_size]
        return cls(tuple(l for l, _ in pairs), tuple(w for _, w in pairs), bin_size)

    @property
    def n_agents(self) -> int:
        return len(self.lengths)

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return list(zip(self.lengths, self.weights))

    def length(self, coalition: Coalition) -> int:
        return sum(self.lengths[i - 1] for i in coalition.members)

    def weight(self, coalition: Coalition) -> int:
        return sum(self.weights[i - 1] for i in coalition.members)

    def with_weights(self, weights: Sequence[int]) -> "GameInstance":
        return GameInstance(self.lengths, tuple(weights), self.bin_size)


def zero_vector(bin_size: int) -> ValueVector:
    return (0,) * (bin_size + 1)


def _add_item(vec: list[int], length: int, weight: int) -> None:
    # Descending capacities so each item is used at most once.
    for b in range(len(vec) - 1, length - 1, -1):
        cand = vec[b - length] + weight
        if cand > vec[b]:
            vec[b] = cand


def value_vector(inst: GameInstance, coalition: Coalition) -> ValueVector:
    """Optimal knapsack values of ``coalition`` at every capacity ``0..bin_size``."""
    vec = [0] * (inst.bin_size + 1)
    for i in coalition.members:
        _add_item(vec, inst.lengths[i - 1], inst.weights[i - 1])
    return tuple(vec)


def knapsack_value(inst: GameInstance, coalition: Coalition) -> int:
    """Best total weight of a sub-coalition that fits in the bin."""
    return value_vector(inst, coalition)[inst.bin_size]


def w_max(inst: GameInstance) -> int:
    """``ceil(bin_size * max_i w_i / l_i)``, an upper bound on v(N)."""
    num, den = 0, 1
    for w, l in zip(inst.weights, inst.lengths):
        if w * den > num * l:
            num, den = w, l
    return -(-inst.bin_size * num // den)


@dataclass(frozen=True)
class KnapsackGame:
    """The knapsack budgeted game as a ValueFunction."""

    instance: GameInstance

    @property
    def n_agents(self) -> int:
        return self.instance.n_agents

    def value(self, coalition: Coalition) -> int:
        return knapsack_value(self.instance, coalition)

    def tabulate(self) -> list[int]:
        """Values of all ``2**n`` coalitions, built by adding one agent at a time."""
        inst = self.instance
        n = inst.n_agents
        vectors: list[list[int]] = [[0] * (inst.bin_size + 1)]
        for mask in range(1, 1 << n):
            low = (mask & -mask).bit_length() - 1
            vec = vectors[mask & (mask - 1)].copy()
            _add_item(vec, inst.lengths[low], inst.weights[low])
            vectors.append(vec)
        return [vec[inst.bin_size] for vec in vectors]
