"""Steady-state Chu-Beasley GA with stall-triggered ordering randomization.

A generation is ``N`` attempts, each producing one child by two binary
tournaments, uniform crossover and a two-bit flip mutation.  The child is
repaired and replaces the worst member when it is unique and strictly
better.  When a whole generation yields no replacement and an operator is
configured, one group of the repair ordering is randomized.

Every stochastic draw comes from one ``numpy.random.Generator`` seeded from
the config, in this order: initial bits, per child (tournament 1, tournament
2, crossover mask, mutation positions), and the operator's group choice and
permutation after stalled generations.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numba
import numpy as np

from .instance import Instance, Solution
from .lp import WeightSource, dual_efficiencies
from .ordering import (
    EfficiencyGroups,
    EfficiencyOrdering,
    dual_ordering,
    get_efficiency_groups,
    rg_shuffle,
    rg_swap,
)
from .repair import heuristic_repair, repair_kernel

log = logging.getLogger(__name__)

NO_TARGET = np.iinfo(np.int64).max
INIT_REROLLS_PER_MEMBER = 50


class Operator(str, Enum):
    NONE = "none"
    RG_SWAP = "rg_swap"
    RG_SHUFFLE = "rg_shuffle"


class StopReason(str, Enum):
    TARGET_REACHED = "target_reached"
    BUDGET_EXHAUSTED = "budget_exhausted"


_OPERATORS = {Operator.RG_SWAP: rg_swap, Operator.RG_SHUFFLE: rg_shuffle}


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 100
    max_evaluations: int = 100_000_000
    operator: Operator = Operator.NONE
    decimals: int = 1
    seed: int = 0
    target_value: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "operator", Operator(self.operator))
        if self.population_size < 2:
            raise ValueError("population_size must be >= 2 for binary tournaments")
        if self.max_evaluations < self.population_size:
            raise ValueError("max_evaluations must be >= population_size")
        if self.operator is not Operator.NONE and self.decimals < 1:
            raise ValueError("decimals must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


@dataclass
class RunStats:
    best_value: int = 0
    best_solution: Solution | None = None
    evaluations: int = 0
    generations: int = 0
    randomizations: int = 0
    # Replacements accepted after the first randomization; 0 if none happened.
    post_randomization_improvements: int = 0
    wall_time: float = 0.0
    stop_reason: StopReason = StopReason.BUDGET_EXHAUSTED
    weight_source: WeightSource = WeightSource.DUAL
    group_sizes: list[int] = field(default_factory=list)


@dataclass
class Population:
    """``N`` solutions stored row-wise: bits ``(N, n)``, profit ``(N,)``, usage ``(N, m)``."""

    bits: np.ndarray
    profit: np.ndarray
    usage: np.ndarray

    @classmethod
    def from_solutions(cls, sols: list[Solution]) -> Population:
        return cls(
            np.array([s.bits for s in sols], dtype=np.uint8),
            np.array([s.profit for s in sols], dtype=np.int64),
            np.array([s.usage for s in sols], dtype=np.int64),
        )

    def __len__(self) -> int:
        return self.bits.shape[0]

    @property
    def members(self) -> list[Solution]:
        return [
            Solution(self.bits[k].copy(), int(self.profit[k]), self.usage[k].copy())
            for k in range(len(self))
        ]

    def worst(self) -> int:
        return int(np.argmin(self.profit))

    def best(self) -> int:
        return int(np.argmax(self.profit))

    def contains(self, bits) -> bool:
        return bool(np.any(np.all(self.bits == np.asarray(bits, dtype=np.uint8), axis=1)))

    def is_unique(self) -> bool:
        return len({row.tobytes() for row in self.bits}) == len(self)


@numba.njit(cache=True)
def binary_tournament(profit, rng):
    """Index of the fitter of two uniform draws (with replacement); ties keep the first."""
    a = rng.integers(0, profit.shape[0])
    b = rng.integers(0, profit.shape[0])
    return b if profit[b] > profit[a] else a


@numba.njit(cache=True)
def uniform_crossover(p1, p2, child, rng):
    for j in range(child.shape[0]):
        child[j] = p1[j] if rng.random() < 0.5 else p2[j]


@numba.njit(cache=True)
def flip_two_bits(x, rng):
    n = x.shape[0]
    a = rng.integers(0, n)
    b = rng.integers(0, n - 1)
    if b >= a:
        b += 1
    x[a] ^= 1
    x[b] ^= 1


@numba.njit(cache=True)
def _make_child(pop_bits, pop_profit, child, rng):
    a = binary_tournament(pop_profit, rng)
    b = binary_tournament(pop_profit, rng)
    uniform_crossover(pop_bits[a], pop_bits[b], child, rng)
    flip_two_bits(child, rng)


@numba.njit(cache=True)
def _is_new(child, profit, pop_bits, pop_profit):
    n = child.shape[0]
    for k in range(pop_profit.shape[0]):
        if pop_profit[k] != profit:
            continue
        same = True
        for j in range(n):
            if pop_bits[k, j] != child[j]:
                same = False
                break
        if same:
            return False
    return True


@numba.njit(cache=True)
def generation_kernel(
    pop_bits, pop_profit, pop_usage, perm, profits, weights_t, capacities, rng, attempts, target
):
    """Run up to ``attempts`` child attempts; returns (attempts done, improvements, target hit)."""
    n, m = weights_t.shape
    child = np.empty(n, dtype=np.uint8)
    usage = np.empty(m, dtype=np.int64)
    improvements = 0
    done = 0
    hit = False
    for _ in range(attempts):
        _make_child(pop_bits, pop_profit, child, rng)
        profit = 0
        usage[:] = 0
        for j in range(n):
            if child[j]:
                profit += profits[j]
                for i in range(m):
                    usage[i] += weights_t[j, i]
        profit = repair_kernel(child, usage, profit, perm, profits, weights_t, capacities)
        done += 1
        worst = 0
        for k in range(1, pop_profit.shape[0]):
            if pop_profit[k] < pop_profit[worst]:
                worst = k
        if profit > pop_profit[worst] and _is_new(child, profit, pop_bits, pop_profit):
            pop_bits[worst, :] = child
            pop_profit[worst] = profit
            pop_usage[worst, :] = usage
            improvements += 1
            if profit >= target:
                hit = True
                break
    return done, improvements, hit


def new_solution(pop: Population, inst: Instance, rng: np.random.Generator) -> Solution:
    """Unrepaired child of two tournament winners, with two bits flipped."""
    child = np.empty(inst.n, dtype=np.uint8)
    _make_child(pop.bits, pop.profit, child, rng)
    return Solution.from_bits(inst, child)


def run_generation(
    pop: Population,
    ordering: EfficiencyOrdering,
    inst: Instance,
    rng: np.random.Generator,
    stats: RunStats,
    *,
    max_evaluations: int | None = None,
    target: int | None = None,
) -> int:
    """One generation of ``len(pop)`` attempts; returns the number of replacements.

    Stops early when the evaluation budget runs out or a replacement reaches
    ``target``.  Updates ``stats`` evaluations, generations and best value.
    """
    attempts = len(pop)
    if max_evaluations is not None:
        attempts = min(attempts, max_evaluations - stats.evaluations)
    if attempts <= 0:
        return 0
    done, improvements, _ = generation_kernel(
        pop.bits, pop.profit, pop.usage,
        np.ascontiguousarray(ordering.perm, dtype=np.int64),
        inst.profits, inst.weights_t, inst.capacities,
        rng, attempts, NO_TARGET if target is None else int(target),
    )
    stats.evaluations += int(done)
    stats.generations += 1
    stats.best_value = int(pop.profit.max())
    return int(improvements)


def initial_population(
    inst: Instance,
    ordering: EfficiencyOrdering,
    size: int,
    rng: np.random.Generator,
    max_evaluations: int,
) -> tuple[Population, int]:
    """Random repaired members, re-rolling duplicates; returns (population, evaluations used).

    Duplicates are re-rolled up to ``50 * size`` times in total, or until the
    evaluation budget is spent; after that they are admitted.
    """
    members: list[Solution] = []
    seen: set[bytes] = set()
    rerolls = 0
    evaluations = 0
    warned = False
    while len(members) < size:
        bits = (rng.random(inst.n) < 0.5).astype(np.uint8)
        sol = heuristic_repair(Solution.from_bits(inst, bits), ordering, inst)
        evaluations += 1
        key = sol.key()
        if key in seen:
            if rerolls < INIT_REROLLS_PER_MEMBER * size and evaluations < max_evaluations:
                rerolls += 1
                continue
            if not warned:
                log.warning(
                    "%s: could not find %d distinct repaired solutions; admitting duplicates",
                    inst.name, size,
                )
                warned = True
        seen.add(key)
        members.append(sol)
    return Population.from_solutions(members), evaluations


def warm_up() -> None:
    """Load or compile the kernels so the first timed run does not pay for it."""
    inst = Instance([2, 1, 1], [[1, 1, 1]], [2], name="warm-up")
    run(inst, GaConfig(population_size=2, max_evaluations=4, operator=Operator.RG_SWAP))


ProgressHook = Callable[[int, int, int], None]


def run(inst: Instance, cfg: GaConfig, progress: ProgressHook | None = None) -> RunStats:
    """Solve ``inst`` with the configured GA variant.

    ``progress(generation, best_value, improvements)`` is called after every
    generation when given.
    """
    if inst.n < 2:
        raise ValueError("the two-bit mutation needs at least 2 items")
    start = time.perf_counter()
    rng = np.random.default_rng(cfg.seed)
    stats = RunStats()

    eff, stats.weight_source = dual_efficiencies(inst)
    ordering = dual_ordering(eff)
    op = _OPERATORS.get(cfg.operator)
    groups: EfficiencyGroups | None = None
    if op is not None:
        groups = get_efficiency_groups(ordering, cfg.decimals)
        stats.group_sizes = groups.sizes()

    pop, stats.evaluations = initial_population(
        inst, ordering, cfg.population_size, rng, cfg.max_evaluations
    )
    stats.best_value = int(pop.profit.max())
    target = cfg.target_value

    while True:
        if target is not None and stats.best_value >= target:
            stats.stop_reason = StopReason.TARGET_REACHED
            break
        if stats.evaluations >= cfg.max_evaluations:
            stats.stop_reason = StopReason.BUDGET_EXHAUSTED
            break
        before = stats.evaluations
        improvements = run_generation(
            pop, ordering, inst, rng, stats,
            max_evaluations=cfg.max_evaluations, target=target,
        )
        if stats.randomizations:
            stats.post_randomization_improvements += improvements
        if progress is not None:
            progress(stats.generations, stats.best_value, improvements)
        full_generation = stats.evaluations - before == len(pop)
        if (
            op is not None
            and improvements <= 0
            and full_generation
            and stats.evaluations < cfg.max_evaluations
        ):
            if op(ordering, groups, rng):
                stats.randomizations += 1

    best = pop.best()
    stats.best_solution = Solution(pop.bits[best].copy(), int(pop.profit[best]), pop.usage[best].copy())
    stats.wall_time = time.perf_counter() - start
    return stats
