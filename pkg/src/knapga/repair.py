"""Two-phase DROP/ADD heuristic repair.

DROP scans the ordering from the worst position and removes selected items
until the solution is feasible; ADD then scans from the best position and
inserts every item that fits.  The result is feasible and maximal.
"""

from __future__ import annotations

from typing import Iterable

import numba
import numpy as np

from .instance import Instance, Solution


@numba.njit(cache=True, inline="always")
def _feasible(usage, capacities):
    for i in range(usage.shape[0]):
        if usage[i] > capacities[i]:
            return False
    return True


@numba.njit(cache=True, inline="always")
def _fits(usage, wj, capacities):
    for i in range(usage.shape[0]):
        if usage[i] + wj[i] > capacities[i]:
            return False
    return True


@numba.njit(cache=True)
def repair_kernel(bits, usage, profit, perm, profits, weights_t, capacities):
    """Repair ``bits``/``usage`` in place and return the new profit.

    ``weights_t`` is the ``(n, m)`` transposed weight matrix.
    """
    n = perm.shape[0]
    m = usage.shape[0]
    for k in range(n - 1, -1, -1):
        if _feasible(usage, capacities):
            break
        j = perm[k]
        if bits[j]:
            bits[j] = 0
            profit -= profits[j]
            for i in range(m):
                usage[i] -= weights_t[j, i]
    for k in range(n):
        j = perm[k]
        if not bits[j] and _fits(usage, weights_t[j], capacities):
            bits[j] = 1
            profit += profits[j]
            for i in range(m):
                usage[i] += weights_t[j, i]
    return profit


def _perm_of(ordering) -> np.ndarray:
    perm = getattr(ordering, "perm", ordering)
    return np.ascontiguousarray(perm, dtype=np.int64)


def heuristic_repair(sol: Solution, ordering, inst: Instance) -> Solution:
    """Repair ``sol`` in place against ``ordering`` and return it.

    ``ordering`` is an :class:`~knapga.ordering.EfficiencyOrdering` or a bare
    permutation of item indices.
    """
    perm = _perm_of(ordering)
    if perm.shape != (inst.n,) or sol.bits.shape != (inst.n,) or sol.usage.shape != (inst.m,):
        raise ValueError("solution/ordering dimensions do not match the instance")
    sol.profit = int(
        repair_kernel(
            sol.bits, sol.usage, np.int64(sol.profit), perm,
            inst.profits, inst.weights_t, inst.capacities,
        )
    )
    return sol


def repair_population(pop: Iterable[Solution], ordering, inst: Instance) -> list[Solution]:
    return [heuristic_repair(sol, ordering, inst) for sol in pop]
