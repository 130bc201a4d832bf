"""Shapley values for knapsack budgeted games and algorithmically represented games."""

from .catalog import (
    Issue,
    McNetInstance,
    MultiIssueInstance,
    Rule,
    TopKInstance,
    WmgInstance,
    mcnet_per_element,
    multi_issue_per_element,
    topk_per_element,
    wmg_decomposition,
)
from .core import (
    CapacityError,
    Coalition,
    ContractViolation,
    FunctionGame,
    PreconditionError,
    ShapleyResult,
    SumGame,
    TabularGame,
    check_efficiency,
    check_null_player,
    check_symmetry_pair,
    shapley_coefficient,
)
from .engine import (
    Decomposition,
    PerElementDecomposition,
    shapley_engine,
    shapley_engine_all,
    shapley_via_decomposition,
    shapley_via_decomposition_ordered,
    shapley_via_per_element,
)
from .greedy import GreedyGame, greedy_per_element, greedy_select, greedy_value, shapley_greedy
from .knapsack import GameInstance, KnapsackGame, knapsack_value, value_vector, w_max
from .oracle import SamplerConfig, shapley_brute_permutations, shapley_brute_subsets, shapley_monte_carlo
from .rounding import check_additive_gap, round_instance, rounded_value, shapley_approx
from .solvers import solve
from .vector_dp import build_count_table, marginal_from_vector, shapley_exact_dp, update_vector

__version__ = "0.1.0"
