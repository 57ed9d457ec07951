"""Chu-Beasley genetic algorithm for the multidimensional knapsack problem,
with efficiency-group randomization of the repair ordering."""

from .ga import GaConfig, Operator, RunStats, StopReason, run
from .instance import Instance, Solution, fits, generate_instance, is_feasible, objective, set_bit
from .io import ParseError, format_instance, parse_instance, parse_instances, read_instance
from .lp import (
    EfficiencyVector,
    LpSolution,
    LpStatus,
    WeightSource,
    compute_efficiencies,
    dual_efficiencies,
    solve_lp_relaxation,
)
from .oracle import enumerate_optimum, lp_bound_check
from .ordering import (
    EfficiencyGroups,
    EfficiencyOrdering,
    dual_ordering,
    get_efficiency_groups,
    rg_shuffle,
    rg_swap,
)
from .repair import heuristic_repair, repair_population

__all__ = [
    "EfficiencyGroups", "EfficiencyOrdering", "EfficiencyVector", "GaConfig", "Instance",
    "LpSolution", "LpStatus", "Operator", "ParseError", "RunStats", "Solution", "StopReason",
    "WeightSource", "compute_efficiencies", "dual_efficiencies", "dual_ordering",
    "enumerate_optimum", "fits", "format_instance", "generate_instance", "get_efficiency_groups",
    "heuristic_repair", "is_feasible", "lp_bound_check", "objective", "parse_instance",
    "parse_instances", "read_instance", "repair_population", "rg_shuffle", "rg_swap", "run",
    "set_bit", "solve_lp_relaxation",
]
