"""Dispatch from (game kind, algorithm) to a Shapley computation.

Per-agent work may run in a process pool. All exact paths use rational
arithmetic and Monte Carlo splits its sample budget into fixed seeded blocks,
so results do not depend on the pool size.
"""

from __future__ import annotations

import os
from concurrent.futures import Executor, ProcessPoolExecutor
from contextlib import contextmanager
from fractions import Fraction
from typing import Any, Iterator

from .catalog import decomposition_for
from .core import PreconditionError, ShapleyResult
from .counting import DEFAULT_STATE_BUDGET
from .engine import shapley_engine
from .greedy import GreedyGame
from .knapsack import KnapsackGame
from .oracle import SamplerConfig, brute_permutations_all, brute_subsets_all, monte_carlo_all
from .rounding import RoundedGame, parse_rational, round_instance, shapley_approx
from .vector_dp import shapley_exact_dp

EXACT = ("brute-subset", "brute-permutation", "vector-dp", "engine")

_ALLOWED = {
    "knapsack": ("brute-subset", "brute-permutation", "monte-carlo", "vector-dp", "rounding"),
    "greedy-knapsack": ("brute-subset", "brute-permutation", "monte-carlo", "engine"),
    "wmg": ("brute-subset", "brute-permutation", "monte-carlo", "engine"),
    "mcnet": ("brute-subset", "brute-permutation", "monte-carlo", "engine"),
    "multi-issue": ("brute-subset", "brute-permutation", "monte-carlo", "engine"),
    "topk": ("brute-subset", "brute-permutation", "monte-carlo", "engine"),
}

DEFAULT_SAMPLES = 10_000


def allowed_algorithms(kind: str) -> tuple[str, ...]:
    try:
        return _ALLOWED[kind]
    except KeyError:
        raise PreconditionError(f"unknown game kind {kind!r}") from None


def game_for(kind: str, payload: Any):
    """The characteristic function of an instance of ``kind``."""
    if kind == "knapsack":
        return KnapsackGame(payload)
    if kind == "greedy-knapsack":
        return GreedyGame(payload)
    allowed_algorithms(kind)
    return payload


def default_jobs() -> int:
    return os.cpu_count() or 1


@contextmanager
def worker_pool(jobs: int) -> Iterator[Executor | None]:
    if jobs <= 1:
        yield None
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield pool


def _agent_value(
    kind: str, payload: Any, algorithm: str, i: int, epsilon: Fraction | None, budget: int
) -> Fraction:
    if algorithm == "vector-dp":
        return shapley_exact_dp(payload, i, state_budget=budget)
    if algorithm == "rounding":
        return shapley_approx(payload, i, epsilon, state_budget=budget)
    return shapley_engine(decomposition_for(payload), i, budget)


def solve(
    kind: str,
    payload: Any,
    algorithm: str,
    *,
    epsilon: Any = None,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    jobs: int = 1,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> ShapleyResult:
    """Shapley values of every agent of ``payload`` with ``algorithm``."""
    if algorithm not in allowed_algorithms(kind):
        raise PreconditionError(
            f"algorithm {algorithm!r} does not apply to {kind} games "
            f"(choose from {', '.join(allowed_algorithms(kind))})"
        )
    game = game_for(kind, payload)
    if algorithm == "brute-subset":
        return brute_subsets_all(game)
    if algorithm == "brute-permutation":
        return brute_permutations_all(game)
    if algorithm == "monte-carlo":
        with worker_pool(jobs) as pool:
            return monte_carlo_all(game, SamplerConfig(samples, seed), pool)

    params: dict[str, Any] = {}
    eps = None
    if algorithm == "rounding":
        if epsilon is None:
            raise PreconditionError("the rounding algorithm needs an epsilon")
        eps = parse_rational(epsilon)
        r = round_instance(payload, eps)
        params = {
            "epsilon": eps,
            "scale": r.scale,
            "fallback": r.fallback,
            "error-bound": r.error_bound,
        }
    agents = range(1, game.n_agents + 1)
    with worker_pool(jobs) as pool:
        args = (kind, payload, algorithm)
        if pool is None:
            values = [_agent_value(*args, i, eps, state_budget) for i in agents]
        else:
            n = len(agents)
            values = list(
                pool.map(
                    _agent_value,
                    [kind] * n, [payload] * n, [algorithm] * n, agents, [eps] * n, [state_budget] * n,
                )
            )
    return ShapleyResult(tuple(values), algorithm, params)


def axiom_game(kind: str, payload: Any, algorithm: str, epsilon: Any = None):
    """The game whose exact Shapley value ``algorithm`` computes.

    That is the game itself, except for rounding, which is exact for the
    rounded game.
    """
    if algorithm == "rounding":
        return RoundedGame(round_instance(payload, parse_rational(epsilon)))
    return game_for(kind, payload)
