"""Item orderings, efficiency groups, and the in-group randomization operators."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lp import EfficiencyVector


@dataclass
class EfficiencyOrdering:
    """Item permutation used by the repair; position 0 is the most efficient item.

    ``eff_scaled`` is indexed by item, not by position.
    """

    perm: np.ndarray
    eff_scaled: np.ndarray

    def copy(self) -> EfficiencyOrdering:
        return EfficiencyOrdering(self.perm.copy(), self.eff_scaled)

    def rounded_levels(self, d: int) -> np.ndarray:
        """Integer rounding levels along the permutation (level / 10**d is the value)."""
        return round_levels(self.eff_scaled[self.perm], d)


def dual_ordering(eff: EfficiencyVector) -> EfficiencyOrdering:
    """Items sorted by non-increasing efficiency, ties by ascending index."""
    perm = np.argsort(-eff.values, kind="stable").astype(np.int64)
    return EfficiencyOrdering(perm, eff.scaled)


def round_levels(x: np.ndarray, d: int) -> np.ndarray:
    """``floor(x * 10**d + 0.5)`` as integers (round half up on non-negative values)."""
    return np.floor(np.asarray(x, dtype=float) * 10.0**d + 0.5).astype(np.int64)


def round_scaled(x, d: int) -> np.ndarray:
    return round_levels(x, d) / 10.0**d


@dataclass(frozen=True)
class EfficiencyGroups:
    d: int
    groups: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.groups)

    def sizes(self) -> list[int]:
        return [hi - lo for lo, hi in self.groups]


def get_efficiency_groups(ordering: EfficiencyOrdering, d: int) -> EfficiencyGroups:
    """Maximal runs ``[lo, hi)`` of positions sharing a rounded efficiency.

    Runs of a single item are not groups.
    """
    if d < 1:
        raise ValueError(f"decimals must be >= 1, got {d}")
    levels = ordering.rounded_levels(d)
    n = levels.shape[0]
    # Start of each run: position 0 plus every position whose level changes.
    starts = np.concatenate([[0], np.flatnonzero(levels[1:] != levels[:-1]) + 1, [n]])
    groups = tuple(
        (int(lo), int(hi)) for lo, hi in zip(starts[:-1], starts[1:]) if hi - lo >= 2
    )
    return EfficiencyGroups(d, groups)


def rg_swap(
    ordering: EfficiencyOrdering, groups: EfficiencyGroups, rng: np.random.Generator
) -> bool:
    """Swap two distinct positions inside a uniformly chosen group.

    Returns False (and leaves the ordering untouched) when there are no groups.
    """
    if not groups.groups:
        return False
    lo, hi = groups.groups[rng.integers(len(groups.groups))]
    size = hi - lo
    a = int(rng.integers(size))
    b = int(rng.integers(size - 1))
    if b >= a:
        b += 1
    perm = ordering.perm
    perm[lo + a], perm[lo + b] = perm[lo + b], perm[lo + a]
    return True


def rg_shuffle(
    ordering: EfficiencyOrdering, groups: EfficiencyGroups, rng: np.random.Generator
) -> bool:
    """Uniformly permute (Fisher-Yates) the items of a uniformly chosen group.

    Returns False (and leaves the ordering untouched) when there are no groups.
    """
    if not groups.groups:
        return False
    lo, hi = groups.groups[rng.integers(len(groups.groups))]
    rng.shuffle(ordering.perm[lo:hi])
    return True
