"""Ground-truth Shapley values by enumeration, and a Monte Carlo baseline.

Everything fast in this package is checked against these functions on small
games. The enumeration routines tabulate the game once (``2**n`` values) and
then work on the table.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import factorial
from typing import Sequence

import numpy as np

from .core import (
    ENUMERATION_CAP,
    CapacityError,
    Coalition,
    Number,
    PreconditionError,
    ShapleyResult,
    ValueFunction,
    coefficient_numerators,
    tabulate,
)

PERMUTATION_CAP = 10
#: Permutations per independently seeded block. Fixed so that results do not
#: depend on how blocks are spread over workers.
MC_BLOCK = 1024
MC_GENERATOR = "numpy.random.PCG64 via SeedSequence(seed).spawn(blocks)"


@dataclass(frozen=True)
class SamplerConfig:
    samples: int
    seed: int = 0

    def __post_init__(self) -> None:
        if self.samples < 1:
            raise PreconditionError(f"sample count must be at least 1, got {self.samples}")
        if not 0 <= self.seed < 1 << 64:
            raise PreconditionError(f"seed must be an unsigned 64-bit integer, got {self.seed}")


def _check_agent(n: int, i: int) -> None:
    if not 1 <= i <= n:
        raise PreconditionError(f"agent {i} outside 1..{n}")


def _subsets_sum(table: Sequence[Number], n: int, i: int) -> Fraction:
    weights = coefficient_numerators(n)
    bit = 1 << (i - 1)
    acc = 0
    for mask in range(1 << n):
        if mask & bit:
            continue
        acc += weights[mask.bit_count()] * (table[mask | bit] - table[mask])
    return Fraction(acc) / factorial(n)


def shapley_brute_subsets(game: ValueFunction, i: int, cap: int = ENUMERATION_CAP) -> Fraction:
    """Shapley value of agent ``i`` by summing over all coalitions without ``i``."""
    _check_agent(game.n_agents, i)
    return _subsets_sum(tabulate(game, cap), game.n_agents, i)


def brute_subsets_all(game: ValueFunction, cap: int = ENUMERATION_CAP) -> ShapleyResult:
    table = tabulate(game, cap)
    n = game.n_agents
    return ShapleyResult(tuple(_subsets_sum(table, n, i) for i in range(1, n + 1)), "brute-subset")


def shapley_brute_permutations(
    game: ValueFunction, i: int, cap: int = PERMUTATION_CAP
) -> Fraction:
    """Shapley value of agent ``i`` as the mean marginal over all ``n!`` orderings."""
    n = game.n_agents
    _check_agent(n, i)
    if n > cap:
        raise CapacityError(f"{n} agents exceeds permutation cap {cap}")
    table = tabulate(game, max(cap, n))
    bit = 1 << (i - 1)
    acc = 0
    for perm in permutations(range(n)):
        before = 0
        for j in perm:
            if j == i - 1:
                break
            before |= 1 << j
        acc += table[before | bit] - table[before]
    return Fraction(acc) / factorial(n)


def brute_permutations_all(game: ValueFunction, cap: int = PERMUTATION_CAP) -> ShapleyResult:
    n = game.n_agents
    if n > cap:
        raise CapacityError(f"{n} agents exceeds permutation cap {cap}")
    table = tabulate(game, max(cap, n))
    acc = [0] * n
    for perm in permutations(range(n)):
        before = 0
        prev = table[0]
        for j in perm:
            before |= 1 << j
            cur = table[before]
            acc[j] += cur - prev
            prev = cur
    return ShapleyResult(tuple(Fraction(a) / factorial(n) for a in acc), "brute-permutation")


def _block_sizes(samples: int) -> list[int]:
    full, rest = divmod(samples, MC_BLOCK)
    return [MC_BLOCK] * full + ([rest] if rest else [])


def _mc_block(game: ValueFunction, seed_seq: np.random.SeedSequence, size: int) -> list[Number]:
    """Summed marginals per agent over ``size`` random orderings."""
    n = game.n_agents
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    cache: dict[int, Number] = {0: 0}

    def v(mask: int) -> Number:
        if mask not in cache:
            cache[mask] = game.value(Coalition(mask, n))
        return cache[mask]

    acc: list[Number] = [0] * n
    for _ in range(size):
        before = 0
        prev: Number = 0
        for j in rng.permutation(n).tolist():
            before |= 1 << j
            cur = v(before)
            acc[j] += cur - prev
            prev = cur
    return acc


def monte_carlo_all(game: ValueFunction, cfg: SamplerConfig, executor=None) -> ShapleyResult:
    """Mean marginal of every agent over ``cfg.samples`` uniformly random orderings.

    The sample budget is split into fixed-size blocks, each with its own child
    seed spawned from ``cfg.seed``; the result is identical whether blocks run
    serially or on ``executor``.
    """
    sizes = _block_sizes(cfg.samples)
    seeds = np.random.SeedSequence(cfg.seed).spawn(len(sizes))
    if executor is None:
        partials = [_mc_block(game, sq, k) for sq, k in zip(seeds, sizes)]
    else:
        partials = list(executor.map(_mc_block, [game] * len(sizes), seeds, sizes))
    n = game.n_agents
    totals = [sum((p[j] for p in partials), 0) for j in range(n)]
    return ShapleyResult(
        tuple(Fraction(t) / cfg.samples for t in totals),
        "monte-carlo",
        {"samples": cfg.samples, "seed": cfg.seed, "generator": MC_GENERATOR},
    )


def shapley_monte_carlo(game: ValueFunction, i: int, cfg: SamplerConfig) -> Fraction:
    """Monte Carlo estimate for agent ``i``; deterministic in ``(seed, samples)``."""
    _check_agent(game.n_agents, i)
    return monte_carlo_all(game, cfg)[i]
