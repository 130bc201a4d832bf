"""Shared domain types, exact Shapley coefficients and axiom checks.

Agents are labeled ``1..n`` throughout the public API. Coalitions are stored
as integer bitmasks where agent ``i`` occupies bit ``i - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import factorial
from typing import Any, Callable, Iterable, Iterator, Protocol, Sequence, Union

Number = Union[int, Fraction]

#: Largest agent count for which enumeration-based checks run by default.
ENUMERATION_CAP = 20

ALGORITHMS = (
    "brute-subset",
    "brute-permutation",
    "monte-carlo",
    "vector-dp",
    "rounding",
    "engine",
)


class ShapleyError(Exception):
    """Base class for errors raised by this package."""


class PreconditionError(ShapleyError, ValueError):
    """An argument violates a documented precondition."""


class CapacityError(ShapleyError):
    """A computation would exceed its enumeration cap or state budget."""

    def __init__(self, message: str, *, layer: int | None = None, states: int | None = None):
        super().__init__(message)
        self.layer = layer
        self.states = states


class ContractViolation(ShapleyError):
    """A user-supplied object does not honour the contract it declares."""


@dataclass(frozen=True)
class Coalition:
    """A subset of the agents ``1..n``."""

    mask: int
    n: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise PreconditionError(f"agent count must be nonnegative, got {self.n}")
        if self.mask < 0 or self.mask >> self.n:
            raise PreconditionError(f"mask {self.mask:#x} has bits outside agents 1..{self.n}")

    @classmethod
    def of(cls, n: int, members: Iterable[int] = ()) -> "Coalition":
        mask = 0
        for i in members:
            if not 1 <= i <= n:
                raise PreconditionError(f"agent {i} outside 1..{n}")
            mask |= 1 << (i - 1)
        return cls(mask, n)

    @classmethod
    def empty(cls, n: int) -> "Coalition":
        return cls(0, n)

    @classmethod
    def full(cls, n: int) -> "Coalition":
        return cls((1 << n) - 1, n)

    @cached_property
    def size(self) -> int:
        return self.mask.bit_count()

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(i + 1 for i in range(self.n) if self.mask >> i & 1)

    def __contains__(self, agent: object) -> bool:
        return isinstance(agent, int) and 1 <= agent <= self.n and bool(self.mask >> (agent - 1) & 1)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __len__(self) -> int:
        return self.size

    def with_agent(self, agent: int) -> "Coalition":
        return Coalition(self.mask | 1 << (agent - 1), self.n)

    def without_agent(self, agent: int) -> "Coalition":
        return Coalition(self.mask & ~(1 << (agent - 1)), self.n)

    def restrict(self, lo: int, hi: int) -> "Coalition":
        """Members with index in ``[lo, hi]`` (the slice ``X_{lo,hi}``)."""
        lo = max(lo, 1)
        hi = min(hi, self.n)
        if lo > hi:
            return Coalition(0, self.n)
        window = ((1 << (hi - lo + 1)) - 1) << (lo - 1)
        return Coalition(self.mask & window, self.n)

    def __repr__(self) -> str:
        return f"Coalition({set(self.members) or '{}'}, n={self.n})"


class ValueFunction(Protocol):
    """A characteristic function over agents ``1..n_agents`` with v(empty) = 0."""

    n_agents: int

    def value(self, coalition: Coalition) -> Number: ...


@dataclass(frozen=True)
class FunctionGame:
    """Adapter turning a plain callable on coalitions into a ValueFunction."""

    n_agents: int
    fn: Callable[[Coalition], Number]

    def value(self, coalition: Coalition) -> Number:
        if coalition.mask == 0:
            return 0
        return self.fn(coalition)


@dataclass(frozen=True)
class TabularGame:
    """A game given by its full value table, indexed by coalition mask."""

    n_agents: int
    table: tuple[Number, ...]

    def __post_init__(self) -> None:
        if len(self.table) != 1 << self.n_agents:
            raise PreconditionError(
                f"table has {len(self.table)} entries, expected {1 << self.n_agents}"
            )
        if self.table[0] != 0:
            raise PreconditionError("v(empty) must be 0")

    def value(self, coalition: Coalition) -> Number:
        return self.table[coalition.mask]


@dataclass(frozen=True)
class SumGame:
    """Pointwise sum ``v + w`` of two games over the same agents."""

    left: Any
    right: Any

    def __post_init__(self) -> None:
        if self.left.n_agents != self.right.n_agents:
            raise PreconditionError("games must share the agent set")

    @property
    def n_agents(self) -> int:
        return self.left.n_agents

    def value(self, coalition: Coalition) -> Number:
        return self.left.value(coalition) + self.right.value(coalition)


def tabulate(game: ValueFunction, cap: int = ENUMERATION_CAP) -> list[Number]:
    """Values of every coalition, indexed by mask.

    Games exposing a ``tabulate`` method are asked for their own table, which
    lets them build values incrementally instead of evaluating each subset.
    """
    n = game.n_agents
    if n > cap:
        raise CapacityError(f"{n} agents exceeds enumeration cap {cap}")
    own = getattr(game, "tabulate", None)
    if own is not None:
        return list(own())
    return [game.value(Coalition(mask, n)) for mask in range(1 << n)]


@lru_cache(maxsize=None)
def coefficient_numerators(n: int) -> tuple[int, ...]:
    """``s! (n-s-1)!`` for ``s = 0..n-1``; divide by ``n!`` for the coefficient."""
    return tuple(factorial(s) * factorial(n - s - 1) for s in range(n))


def shapley_coefficient(s: int, n: int) -> Fraction:
    """Weight ``s! (n-s-1)! / n!`` of a coalition of size ``s`` in an ``n``-agent game."""
    if n < 1 or not 0 <= s <= n - 1:
        raise PreconditionError(f"need 0 <= s <= n-1 and n >= 1, got s={s}, n={n}")
    return Fraction(coefficient_numerators(n)[s], factorial(n))


@dataclass(frozen=True)
class ShapleyResult:
    """Per-agent Shapley values with provenance."""

    values: tuple[Fraction, ...]
    algorithm: str
    parameters: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise PreconditionError(f"unknown algorithm tag {self.algorithm!r}")
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))

    @property
    def exact(self) -> bool:
        return self.algorithm != "monte-carlo"

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, agent: int) -> Fraction:
        """Value of agent ``agent`` (1-based)."""
        if not 1 <= agent <= len(self.values):
            raise IndexError(agent)
        return self.values[agent - 1]

    @property
    def total(self) -> Fraction:
        return sum(self.values, Fraction(0))


def _check_agent(game: ValueFunction, agent: int) -> None:
    if not 1 <= agent <= game.n_agents:
        raise PreconditionError(f"agent {agent} outside 1..{game.n_agents}")


def check_efficiency(game: ValueFunction, result: ShapleyResult) -> bool:
    """True iff the values sum exactly to v(N)."""
    if len(result) != game.n_agents:
        raise PreconditionError(f"result has {len(result)} values for {game.n_agents} agents")
    return result.total == game.value(Coalition.full(game.n_agents))


def _marginal_profile(table: Sequence[Number], n: int, agent: int) -> list[Number]:
    bit = 1 << (agent - 1)
    return [table[m | bit] - table[m] for m in range(1 << n) if not m & bit]


def check_symmetry_pair(
    game: ValueFunction,
    i: int,
    j: int,
    result: ShapleyResult,
    cap: int = ENUMERATION_CAP,
) -> bool:
    """Symmetry axiom for one pair; vacuously true if ``i`` and ``j`` are not interchangeable."""
    _check_agent(game, i)
    _check_agent(game, j)
    if i == j:
        raise PreconditionError("symmetry check needs two distinct agents")
    n = game.n_agents
    table = tabulate(game, cap)
    bi, bj = 1 << (i - 1), 1 << (j - 1)
    for m in range(1 << n):
        if m & (bi | bj):
            continue
        if table[m | bi] != table[m | bj]:
            return True
    return result[i] == result[j]


def check_null_player(
    game: ValueFunction,
    i: int,
    result: ShapleyResult,
    cap: int = ENUMERATION_CAP,
) -> bool:
    """Null-player axiom for ``i``; vacuously true unless every marginal of ``i`` is zero."""
    _check_agent(game, i)
    table = tabulate(game, cap)
    if any(_marginal_profile(table, game.n_agents, i)):
        return True
    return result[i] == 0


def symmetric_pairs(game: ValueFunction, cap: int = ENUMERATION_CAP) -> list[tuple[int, int]]:
    """All interchangeable agent pairs ``(i, j)`` with ``i < j``."""
    n = game.n_agents
    table = tabulate(game, cap)
    pairs = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            bi, bj = 1 << (i - 1), 1 << (j - 1)
            if all(
                table[m | bi] == table[m | bj] for m in range(1 << n) if not m & (bi | bj)
            ):
                pairs.append((i, j))
    return pairs


def null_players(game: ValueFunction, cap: int = ENUMERATION_CAP) -> list[int]:
    table = tabulate(game, cap)
    n = game.n_agents
    return [i for i in range(1, n + 1) if not any(_marginal_profile(table, n, i))]
