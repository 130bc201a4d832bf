"""Command-line interface.

Exit codes: 0 success, 2 input error, 3 capacity error, 4 invariant failure.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Sequence

from .core import (
    CapacityError,
    Coalition,
    ContractViolation,
    PreconditionError,
    SumGame,
    check_efficiency,
    check_null_player,
    check_symmetry_pair,
    null_players,
    symmetric_pairs,
)
from .counting import DEFAULT_STATE_BUDGET
from .formats import (
    DEFAULT_PRECISION,
    InstanceFile,
    ResultFile,
    dump_result,
    instance_digest,
    load_instance,
    render_decimal,
)
from .generators import random_instance
from .knapsack import w_max
from .oracle import brute_subsets_all
from .rounding import parse_rational
from .solvers import DEFAULT_SAMPLES, EXACT, axiom_game, default_jobs, game_for, solve

EXIT_OK, EXIT_INPUT, EXIT_CAPACITY, EXIT_INVARIANT = 0, 2, 3, 4


class InvariantFailure(Exception):
    pass


def _parse_coalition(text: str, n: int) -> Coalition:
    text = text.strip()
    if text == "all":
        return Coalition.full(n)
    members = []
    for tok in filter(None, (t.strip() for t in text.split(","))):
        try:
            members.append(int(tok))
        except ValueError:
            raise PreconditionError(f"bad agent index {tok!r}") from None
    return Coalition.of(n, members)


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _solve(inst: InstanceFile, algorithm: str, args: argparse.Namespace):
    return solve(
        inst.kind,
        inst.payload,
        algorithm,
        epsilon=args.epsilon,
        samples=args.samples,
        seed=args.seed,
        jobs=args.jobs,
        state_budget=args.state_budget,
    )


def cmd_value(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    game = game_for(inst.kind, inst.payload)
    coalition = _parse_coalition(args.agents, inst.n_agents)
    print(game.value(coalition))
    return EXIT_OK


def cmd_shapley(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    game = game_for(inst.kind, inst.payload)
    start = time.perf_counter()
    result = _solve(inst, args.algorithm, args)
    elapsed = time.perf_counter() - start
    total = game.value(Coalition.full(inst.n_agents))
    if result.algorithm in EXACT and not check_efficiency(game, result):
        raise InvariantFailure(f"values sum to {result.total}, but v(N) = {total}")
    out = ResultFile(
        instance_digest=instance_digest(inst),
        algorithm=result.algorithm,
        parameters={k: str(v) for k, v in result.parameters.items()},
        values=list(result.values),
        total=Fraction(total),
        wall_time=elapsed,
        precision=args.precision,
    )
    text = dump_result(out)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _tolerance(a: str, b: str, inst: InstanceFile, epsilon) -> Fraction | None:
    """Declared max per-agent gap between two algorithms; None if not defined."""
    if "monte-carlo" in (a, b):
        return None
    if "rounding" in (a, b):
        if a == b:
            return Fraction(0)
        return parse_rational(epsilon) * w_max(inst.payload)
    return Fraction(0)


def cmd_compare(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    algorithms = [a.strip() for a in args.algorithms.split(",") if a.strip()]
    if len(algorithms) < 2:
        raise PreconditionError("compare needs at least two algorithms")
    results = {a: _solve(inst, a, args) for a in algorithms}
    n = inst.n_agents
    p = args.precision
    width = max(len(a) for a in algorithms)
    print("agent  " + "  ".join(f"{a:>{max(width, p + 6)}}" for a in algorithms))
    for i in range(1, n + 1):
        label = inst.labels.get(i, str(i))
        cells = "  ".join(
            f"{render_decimal(results[a][i], p):>{max(width, p + 6)}}" for a in algorithms
        )
        print(f"{label:<6} {cells}")
    ok = True
    for a, b in combinations(algorithms, 2):
        gap = max(abs(x - y) for x, y in zip(results[a].values, results[b].values))
        tol = _tolerance(a, b, inst, args.epsilon)
        if tol is None:
            verdict = "info (estimate, no declared tolerance)"
        elif gap <= tol:
            verdict = "PASS"
        else:
            verdict = "FAIL"
            ok = False
        tol_text = "-" if tol is None else str(tol)
        print(f"{a} vs {b}: max |diff| = {gap} ({render_decimal(gap, p)}), tolerance {tol_text}: {verdict}")
    return EXIT_OK if ok else EXIT_INVARIANT


def cmd_axioms(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    algorithm = args.algorithm
    estimate = algorithm == "monte-carlo"
    game = axiom_game(inst.kind, inst.payload, algorithm, args.epsilon)
    result = _solve(inst, algorithm, args)
    n = inst.n_agents
    if algorithm == "rounding":
        print("axioms checked against the rounded game")

    checks: list[tuple[str, bool]] = []
    checks.append(("efficiency", check_efficiency(game, result)))

    pairs = symmetric_pairs(game)
    sym_ok = all(check_symmetry_pair(game, i, j, result) for i in range(1, n + 1) for j in range(i + 1, n + 1))
    checks.append((f"symmetry ({len(pairs)} interchangeable pair(s))", sym_ok))

    null_ok = all(check_null_player(game, i, result) for i in range(1, n + 1))
    checks.append((f"null player ({len(null_players(game))} null agent(s))", null_ok))

    other_payload = random_instance(inst.kind, random.Random(args.seed), n)
    other = InstanceFile(inst.kind, other_payload)
    other_result = _solve(other, algorithm, args)
    other_game = axiom_game(inst.kind, other_payload, algorithm, args.epsilon)
    combined = brute_subsets_all(SumGame(game, other_game))
    lin_ok = all(
        a + b == c for a, b, c in zip(result.values, other_result.values, combined.values)
    )
    checks.append(("linearity", lin_ok))

    failed = False
    for name, ok in checks:
        if estimate:
            status = f"{'holds' if ok else 'violated'} (estimate - axiom not guaranteed)"
        else:
            status = "PASS" if ok else "FAIL"
            failed |= not ok
        print(f"{name}: {status}")
    return EXIT_INVARIANT if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="budgeted-shapley",
        description="Exact and approximate Shapley values for knapsack budgeted games and compact game representations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--instance", required=True, help="instance file")
        p.add_argument("--epsilon", help="rounding precision, e.g. 1/2 or 0.5")
        p.add_argument("--samples", type=_positive, default=DEFAULT_SAMPLES, help="Monte Carlo permutations")
        p.add_argument("--seed", type=_u64, default=0, help="unsigned 64-bit seed")
        p.add_argument("--jobs", type=_positive, default=default_jobs(), help="worker processes")
        p.add_argument("--state-budget", type=_positive, default=DEFAULT_STATE_BUDGET,
                       help="max distinct DP states per layer")
        p.add_argument("--precision", type=_positive, default=DEFAULT_PRECISION,
                       help="significant digits of decimal renderings")

    p = sub.add_parser("value", help="print v(S) for a coalition")
    p.add_argument("--instance", required=True)
    p.add_argument("--agents", default="all", help="comma list of agents, 'all', or '' for the empty set")
    p.set_defaults(func=cmd_value)

    p = sub.add_parser("shapley", help="compute Shapley values and write a result file")
    common(p)
    p.add_argument("--algorithm", required=True)
    p.add_argument("--out", help="result file (default: stdout)")
    p.set_defaults(func=cmd_shapley)

    p = sub.add_parser("compare", help="compare algorithms on one instance")
    common(p)
    p.add_argument("--algorithms", required=True, help="comma list of algorithms")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("axioms", help="check the Shapley axioms for an algorithm's output")
    common(p)
    p.add_argument("--algorithm", required=True)
    p.set_defaults(func=cmd_axioms)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (InvariantFailure, ContractViolation) as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (PreconditionError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
