"""Concrete decompositions for classic compact game representations.

Each game comes with a plain reference value function (used by the oracles)
and a decomposition for the counting engine:

* weighted majority games: running weight capped at the quota;
* MC-nets: one element per rule, counting satisfied positive and
  violated negative literals;
* multi-issue games: one element per (issue, sub-coalition of the issue);
* top-k games: one element per agent, counting heavier agents.

The greedy knapsack game lives in :mod:`budgeted_shapley.greedy` and is
re-exported here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Hashable, Sequence

from .core import Coalition, Number, PreconditionError
from .engine import Decomposition, PerElementDecomposition
from .greedy import GreedyGame, GreedyMembership, GreedyPerElement, greedy_per_element  # noqa: F401
from .knapsack import GameInstance

MAX_ISSUE_SIZE = 16


# -- weighted majority games -------------------------------------------------


@dataclass(frozen=True)
class WmgInstance:
    quota: int
    weights: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if not self.weights:
            raise PreconditionError("a game needs at least one agent")
        if self.quota < 0:
            raise PreconditionError(f"quota must be nonnegative, got {self.quota}")
        for i, w in enumerate(self.weights, start=1):
            if w < 0:
                raise PreconditionError(f"agent {i}: weight must be nonnegative, got {w}")

    @property
    def n_agents(self) -> int:
        return len(self.weights)

    def value(self, coalition: Coalition) -> int:
        if coalition.mask == 0:
            return 0
        return int(sum(self.weights[i - 1] for i in coalition.members) >= self.quota)


@dataclass(frozen=True)
class WmgDecomposition(Decomposition):
    instance: WmgInstance

    @property
    def n_agents(self) -> int:
        return self.instance.n_agents

    def initial_state(self) -> int:
        return 0

    def update(self, state: int, agent: int) -> int:
        return min(state + self.instance.weights[agent - 1], self.instance.quota)

    def final(self, state: int) -> int:
        return int(state == self.instance.quota)


def wmg_decomposition(inst: WmgInstance) -> WmgDecomposition:
    return WmgDecomposition(inst)


# -- MC-nets -----------------------------------------------------------------


@dataclass(frozen=True)
class Rule:
    """Conjunction of ``positive`` agents and negated ``negative`` agents."""

    positive: frozenset[int]
    negative: frozenset[int]
    value: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "positive", frozenset(self.positive))
        object.__setattr__(self, "negative", frozenset(self.negative))
        object.__setattr__(self, "value", Fraction(self.value))
        if self.positive & self.negative:
            raise PreconditionError(f"rule uses agents {sorted(self.positive & self.negative)} both ways")

    def satisfied_by(self, coalition: Coalition) -> bool:
        members = set(coalition.members)
        return self.positive <= members and not self.negative & members


@dataclass(frozen=True)
class McNetInstance:
    n_agents: int
    rules: tuple[Rule, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "rules", tuple(self.rules))
        if self.n_agents < 1:
            raise PreconditionError("a game needs at least one agent")
        for k, r in enumerate(self.rules, start=1):
            bad = [a for a in r.positive | r.negative if not 1 <= a <= self.n_agents]
            if bad:
                raise PreconditionError(f"rule {k}: agents {sorted(bad)} outside 1..{self.n_agents}")

    def value(self, coalition: Coalition) -> Fraction:
        if coalition.mask == 0:
            return Fraction(0)
        return sum((r.value for r in self.rules if r.satisfied_by(coalition)), Fraction(0))


@dataclass(frozen=True)
class RuleMembership(Decomposition):
    """State ``(positives present, |negative| - negatives present)``."""

    rule: Rule
    n_agents: int

    def initial_state(self) -> tuple[int, int]:
        return (0, len(self.rule.negative))

    def update(self, state: tuple[int, int], agent: int) -> tuple[int, int]:
        pos, neg = state
        if agent in self.rule.positive:
            return (pos + 1, neg)
        if agent in self.rule.negative:
            return (pos, neg - 1)
        return state

    def final(self, state: tuple[int, int]) -> int:
        return int(state == (len(self.rule.positive), len(self.rule.negative)))


@dataclass(frozen=True)
class McNetPerElement(PerElementDecomposition):
    instance: McNetInstance

    @property
    def n_agents(self) -> int:
        return self.instance.n_agents

    def elements(self) -> range:
        return range(len(self.instance.rules))

    def weight(self, element: int) -> Fraction:
        return self.instance.rules[element].value

    def membership(self, element: int) -> RuleMembership:
        return RuleMembership(self.instance.rules[element], self.n_agents)


def mcnet_per_element(inst: McNetInstance) -> McNetPerElement:
    return McNetPerElement(inst)


# -- multi-issue games -------------------------------------------------------


@dataclass(frozen=True)
class Issue:
    """A sub-game on ``agents`` given by an explicit table.

    ``table`` maps frozensets of agents to values; missing subsets are worth 0.
    """

    agents: frozenset[int]
    table: dict[frozenset[int], int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "agents", frozenset(self.agents))
        table = {frozenset(k): v for k, v in self.table.items()}
        object.__setattr__(self, "table", table)
        if len(self.agents) > MAX_ISSUE_SIZE:
            raise PreconditionError(
                f"issue over {len(self.agents)} agents exceeds the cap of {MAX_ISSUE_SIZE}"
            )
        for c in table:
            if not c <= self.agents:
                raise PreconditionError(f"table entry {sorted(c)} is not inside issue {sorted(self.agents)}")
        if table.get(frozenset(), 0) != 0:
            raise PreconditionError("an issue must be worth 0 on the empty set")

    def value(self, part: frozenset[int]) -> int:
        return self.table.get(part, 0)

    def subsets(self) -> list[frozenset[int]]:
        members = sorted(self.agents)
        return [frozenset(c) for r in range(len(members) + 1) for c in combinations(members, r)]


@dataclass(frozen=True)
class MultiIssueInstance:
    n_agents: int
    issues: tuple[Issue, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "issues", tuple(self.issues))
        if self.n_agents < 1:
            raise PreconditionError("a game needs at least one agent")
        for k, issue in enumerate(self.issues, start=1):
            bad = [a for a in issue.agents if not 1 <= a <= self.n_agents]
            if bad:
                raise PreconditionError(f"issue {k}: agents {sorted(bad)} outside 1..{self.n_agents}")

    def value(self, coalition: Coalition) -> int:
        members = frozenset(coalition.members)
        return sum(issue.value(members & issue.agents) for issue in self.issues)


@dataclass(frozen=True)
class IssuePartMembership(Decomposition):
    """Selected iff ``S`` meets the issue in exactly ``part``.

    State ``(members of part seen, members of issue minus part seen)``.
    """

    part: frozenset[int]
    rest: frozenset[int]
    n_agents: int

    def initial_state(self) -> tuple[int, int]:
        return (0, 0)

    def update(self, state: tuple[int, int], agent: int) -> tuple[int, int]:
        inside, outside = state
        if agent in self.part:
            return (inside + 1, outside)
        if agent in self.rest:
            return (inside, outside + 1)
        return state

    def final(self, state: tuple[int, int]) -> int:
        return int(state == (len(self.part), 0))


@dataclass(frozen=True)
class MultiIssuePerElement(PerElementDecomposition):
    instance: MultiIssueInstance

    @property
    def n_agents(self) -> int:
        return self.instance.n_agents

    def elements(self) -> list[tuple[int, frozenset[int]]]:
        return [(k, part) for k, issue in enumerate(self.instance.issues) for part in issue.subsets()]

    def weight(self, element: tuple[int, frozenset[int]]) -> int:
        k, part = element
        return self.instance.issues[k].value(part)

    def membership(self, element: tuple[int, frozenset[int]]) -> IssuePartMembership:
        k, part = element
        issue = self.instance.issues[k]
        return IssuePartMembership(part, issue.agents - part, self.n_agents)


def multi_issue_per_element(inst: MultiIssueInstance) -> MultiIssuePerElement:
    return MultiIssuePerElement(inst)


# -- top-k games -------------------------------------------------------------


@dataclass(frozen=True)
class TopKInstance:
    k: int
    weights: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if not self.weights:
            raise PreconditionError("a game needs at least one agent")
        if self.k < 0:
            raise PreconditionError(f"k must be nonnegative, got {self.k}")
        for i, w in enumerate(self.weights, start=1):
            if w < 0:
                raise PreconditionError(f"agent {i}: weight must be nonnegative, got {w}")

    @property
    def n_agents(self) -> int:
        return len(self.weights)

    def value(self, coalition: Coalition) -> int:
        ws = sorted((self.weights[i - 1] for i in coalition.members), reverse=True)
        return sum(ws[: self.k])

    def ranks_above(self, j: int, e: int) -> bool:
        """Agent ``j`` beats ``e``: heavier, or equally heavy with a lower index."""
        wj, we = self.weights[j - 1], self.weights[e - 1]
        return wj > we or (wj == we and j < e)


@dataclass(frozen=True)
class TopKMembership(Decomposition):
    """State ``(agents ranked above e seen, capped at k; e seen)``."""

    instance: TopKInstance
    element: int

    @property
    def n_agents(self) -> int:
        return self.instance.n_agents

    def initial_state(self) -> tuple[int, bool]:
        return (0, False)

    def update(self, state: tuple[int, bool], agent: int) -> tuple[int, bool]:
        above, present = state
        if agent == self.element:
            return (above, True)
        if self.instance.ranks_above(agent, self.element):
            return (min(above + 1, self.instance.k), present)
        return state

    def final(self, state: tuple[int, bool]) -> int:
        above, present = state
        return int(present and above < self.instance.k)


@dataclass(frozen=True)
class TopKPerElement(PerElementDecomposition):
    instance: TopKInstance

    @property
    def n_agents(self) -> int:
        return self.instance.n_agents

    def elements(self) -> range:
        return range(1, self.n_agents + 1)

    def weight(self, element: int) -> int:
        return self.instance.weights[element - 1]

    def membership(self, element: int) -> TopKMembership:
        return TopKMembership(self.instance, element)


def topk_per_element(inst: TopKInstance) -> TopKPerElement:
    return TopKPerElement(inst)


def reference_game(inst: object):
    """The plain value function of a catalog instance."""
    if isinstance(inst, GameInstance):
        return GreedyGame(inst)
    return inst


def decomposition_for(inst: object) -> Decomposition | PerElementDecomposition:
    """The engine model of a catalog instance."""
    if isinstance(inst, WmgInstance):
        return wmg_decomposition(inst)
    if isinstance(inst, McNetInstance):
        return mcnet_per_element(inst)
    if isinstance(inst, MultiIssueInstance):
        return multi_issue_per_element(inst)
    if isinstance(inst, TopKInstance):
        return topk_per_element(inst)
    if isinstance(inst, GameInstance):
        return greedy_per_element(inst)
    raise PreconditionError(f"no decomposition for {type(inst).__name__}")
