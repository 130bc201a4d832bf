"""Shared helpers: naive oracles written independently of the library."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, permutations
from math import factorial

import pytest


def naive_knapsack(pairs, capacity, members):
    """Best weight over all sub-subsets of ``members`` (1-based) that fit."""
    best = 0
    members = list(members)
    for r in range(len(members) + 1):
        for sub in combinations(members, r):
            if sum(pairs[i - 1][0] for i in sub) <= capacity:
                best = max(best, sum(pairs[i - 1][1] for i in sub))
    return best


def naive_shapley(n, v):
    """Shapley values by averaging over every ordering; ``v`` maps frozensets to numbers."""
    totals = [Fraction(0)] * n
    for perm in permutations(range(1, n + 1)):
        seen = frozenset()
        for i in perm:
            totals[i - 1] += v(seen | {i}) - v(seen)
            seen = seen | {i}
    return [t / factorial(n) for t in totals]


def all_subsets(n):
    for r in range(n + 1):
        for c in combinations(range(1, n + 1), r):
            yield frozenset(c)


@pytest.fixture
def rng():
    return random.Random(20240611)


def naive_greedy(pairs, capacity, members):
    """Ratio-greedy packing with the single-heaviest-item fallback."""
    from fractions import Fraction as F

    members = sorted(members, key=lambda j: (-F(pairs[j - 1][1], pairs[j - 1][0]), j))
    if not members:
        return 0
    packed, used = 0, 0
    for j in members:
        length, weight = pairs[j - 1]
        if used + length > capacity:
            break
        used += length
        packed += weight
    return max(packed, max(pairs[j - 1][1] for j in members))


_VERDICTS: list[str] = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line per acceptance criterion, then assert it."""

    def _verdict(name, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else "")
        print(line)
        _VERDICTS.append(line)
        assert ok, line

    return _verdict


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in _VERDICTS:
            terminalreporter.write_line(line)
