"""Additive approximation of knapsack Shapley values by weight rounding.

With ``k = eps * w_max / bin_size`` every weight is rounded down to
``floor(w / k)``. The rounded game ``v'(S) = k * knapsack_opt'(S)`` satisfies
``v(S) - eps*w_max <= v'(S) <= v(S)``, so its Shapley values are within
``eps * w_max`` of the true ones, and the rounded weights are bounded by
``floor(bin_size / eps)`` regardless of the original magnitudes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .core import ENUMERATION_CAP, Coalition, Number, PreconditionError, ValueFunction, tabulate
from .counting import DEFAULT_STATE_BUDGET
from .knapsack import GameInstance, KnapsackGame, knapsack_value, w_max
from .vector_dp import shapley_exact_dp

Rational = Union[int, Fraction, str]


def parse_rational(text: Rational) -> Fraction:
    """Exact rational from ``"1/2"``, ``"0.5"``, an int or a Fraction. Floats are refused."""
    if isinstance(text, float):
        raise PreconditionError("pass epsilon as a string or Fraction, not a float")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise PreconditionError(f"not a rational number: {text!r}") from exc


@dataclass(frozen=True)
class RoundedInstance:
    """A knapsack instance with weights rounded down to multiples of ``scale``.

    ``fallback`` is set when ``scale <= 1``: rounding would not shrink the
    state space, so the rounded game is taken to be the original game.
    """

    base: GameInstance
    epsilon: Fraction
    scale: Fraction
    rounded_weights: tuple[int, ...]
    fallback: bool

    @property
    def n_agents(self) -> int:
        return self.base.n_agents

    @property
    def rounded(self) -> GameInstance:
        return self.base.with_weights(self.rounded_weights)

    @property
    def error_bound(self) -> Fraction:
        return self.epsilon * w_max(self.base)


def round_instance(inst: GameInstance, eps: Rational) -> RoundedInstance:
    eps = parse_rational(eps)
    if eps <= 0:
        raise PreconditionError(f"epsilon must be positive, got {eps}")
    k = eps * w_max(inst) / inst.bin_size
    if k == 0:
        # all weights zero: nothing to round
        return RoundedInstance(inst, eps, Fraction(1), inst.weights, True)
    rounded = tuple(w * k.denominator // k.numerator for w in inst.weights)
    return RoundedInstance(inst, eps, k, rounded, k <= 1)


def rounded_value(r: RoundedInstance, coalition: Coalition) -> Fraction:
    """``k`` times the knapsack optimum of ``coalition`` under rounded weights."""
    if r.fallback:
        return Fraction(knapsack_value(r.base, coalition))
    return r.scale * knapsack_value(r.rounded, coalition)


@dataclass(frozen=True)
class RoundedGame:
    """The rounded game ``v'`` as a ValueFunction."""

    rounded_instance: RoundedInstance

    @property
    def n_agents(self) -> int:
        return self.rounded_instance.n_agents

    def value(self, coalition: Coalition) -> Fraction:
        return rounded_value(self.rounded_instance, coalition)

    def tabulate(self) -> list[Fraction]:
        r = self.rounded_instance
        if r.fallback:
            return [Fraction(x) for x in KnapsackGame(r.base).tabulate()]
        return [r.scale * x for x in KnapsackGame(r.rounded).tabulate()]


def shapley_approx(
    inst: GameInstance,
    i: int,
    eps: Rational,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> Fraction:
    """Shapley value of agent ``i`` within ``eps * w_max`` of the exact value.

    This is exactly the Shapley value of the rounded game. In fallback mode it
    is the exact value.
    """
    r = round_instance(inst, eps)
    if r.fallback:
        return shapley_exact_dp(inst, i, state_budget=state_budget)
    return r.scale * shapley_exact_dp(r.rounded, i, state_budget=state_budget)


def check_additive_gap(
    v: ValueFunction,
    v_prime: ValueFunction,
    alpha: Number,
    cap: int = ENUMERATION_CAP,
) -> bool:
    """True iff ``v'(S) <= v(S) <= v'(S) + alpha`` for every coalition ``S``."""
    if v.n_agents != v_prime.n_agents:
        raise PreconditionError("games must share the agent set")
    exact = tabulate(v, cap)
    approx = tabulate(v_prime, cap)
    return all(a <= e <= a + alpha for e, a in zip(exact, approx))
