"""Exact solvers for small instances, used as ground truth."""

from __future__ import annotations

import numpy as np

from .instance import Instance
from .lp import LpSolution

MAX_ENUM_ITEMS = 25
_BLOCK_BITS = 14


class OracleRefused(ValueError):
    pass


def _patterns(k: int) -> np.ndarray:
    """All ``2**k`` bit patterns of length k in lexicographic order (first column most significant)."""
    codes = np.arange(2**k, dtype=np.int64)
    shifts = np.arange(k - 1, -1, -1, dtype=np.int64)
    return ((codes[:, None] >> shifts) & 1).astype(np.int64)


def enumerate_optimum(inst: Instance) -> tuple[int, np.ndarray]:
    """Optimal value and the lexicographically smallest optimal selection.

    Every one of the ``2**n`` selections is checked; refused above 25 items.
    Selections are enumerated in lexicographic order of the bit vector, so the
    first maximum found is the lexicographically smallest.
    """
    n = inst.n
    if n > MAX_ENUM_ITEMS:
        raise OracleRefused(f"enumeration refused for n={n} > {MAX_ENUM_ITEMS}")
    low = min(n, _BLOCK_BITS)
    high = n - low
    lo_pat = _patterns(low)
    # Trailing items form the inner block; leading items vary in the outer loop.
    lo_profit = lo_pat @ inst.profits[high:]
    lo_usage = lo_pat @ inst.weights[:, high:].T
    hi_pat = _patterns(high)
    hi_profit = hi_pat @ inst.profits[:high]
    hi_usage = hi_pat @ inst.weights[:, :high].T

    best_value = -1
    best_bits = None
    for h in range(hi_pat.shape[0]):
        feasible = np.all(lo_usage + hi_usage[h] <= inst.capacities, axis=1)
        if not feasible.any():
            continue
        profit = np.where(feasible, lo_profit + hi_profit[h], -1)
        k = int(np.argmax(profit))
        if profit[k] > best_value:
            best_value = int(profit[k])
            best_bits = np.concatenate([hi_pat[h], lo_pat[k]])
    # The empty selection is always feasible, so best_bits is set.
    return best_value, best_bits.astype(np.uint8)


def lp_bound_check(inst: Instance, lp: LpSolution, optimum: int | None = None) -> bool:
    """Whether the LP relaxation objective upper-bounds the integer optimum (within 1e-6)."""
    if optimum is None:
        optimum, _ = enumerate_optimum(inst)
    return lp.primal_objective >= optimum - 1e-6
