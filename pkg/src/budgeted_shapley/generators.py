"""Seeded random game instances for tests, comparisons and axiom checks."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from .catalog import Issue, McNetInstance, MultiIssueInstance, Rule, TopKInstance, WmgInstance
from .core import PreconditionError
from .knapsack import GameInstance

KINDS = ("knapsack", "greedy-knapsack", "wmg", "mcnet", "multi-issue", "topk")


def random_knapsack(
    rng: random.Random, n: int, bin_max: int = 3, weight_max: int = 4, weight_min: int = 0
) -> GameInstance:
    bin_size = rng.randint(1, bin_max)
    pairs = [(rng.randint(1, bin_size), rng.randint(weight_min, weight_max)) for _ in range(n)]
    return GameInstance.from_pairs(pairs, bin_size)


def random_wmg(rng: random.Random, n: int, weight_max: int = 5) -> WmgInstance:
    weights = tuple(rng.randint(0, weight_max) for _ in range(n))
    quota = rng.randint(0, max(sum(weights), 1))
    return WmgInstance(quota, weights)


def random_mcnet(rng: random.Random, n: int, max_rules: int = 4) -> McNetInstance:
    rules = []
    for _ in range(rng.randint(1, max_rules)):
        size = rng.randint(1, min(n, 3))
        literals = rng.sample(range(1, n + 1), size)
        cut = rng.randint(1, size)
        value = Fraction(rng.randint(-6, 6), rng.choice((1, 2, 3)))
        rules.append(Rule(frozenset(literals[:cut]), frozenset(literals[cut:]), value))
    return McNetInstance(n, tuple(rules))


def random_multi_issue(
    rng: random.Random, n: int, max_issues: int = 3, max_issue_size: int = 3
) -> MultiIssueInstance:
    issues = []
    for _ in range(rng.randint(1, max_issues)):
        members = rng.sample(range(1, n + 1), rng.randint(1, min(n, max_issue_size)))
        table = {
            frozenset(c): rng.randint(-3, 6)
            for r in range(1, len(members) + 1)
            for c in combinations(members, r)
        }
        issues.append(Issue(frozenset(members), table))
    return MultiIssueInstance(n, tuple(issues))


def random_topk(rng: random.Random, n: int, weight_max: int = 6) -> TopKInstance:
    return TopKInstance(rng.randint(0, n), tuple(rng.randint(0, weight_max) for _ in range(n)))


def random_instance(kind: str, rng: random.Random, n: int):
    """A random instance of ``kind`` with ``n`` agents."""
    if kind in ("knapsack", "greedy-knapsack"):
        return random_knapsack(rng, n, bin_max=4, weight_max=6)
    if kind == "wmg":
        return random_wmg(rng, n)
    if kind == "mcnet":
        return random_mcnet(rng, n)
    if kind == "multi-issue":
        return random_multi_issue(rng, n)
    if kind == "topk":
        return random_topk(rng, n)
    raise PreconditionError(f"unknown game kind {kind!r}")
