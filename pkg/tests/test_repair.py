import numpy as np

from knapga import Instance, Solution, enumerate_optimum, fits, heuristic_repair, is_feasible
from knapga.repair import repair_population

from conftest import random_small_instance, reference_repair


def _is_maximal(sol, inst):
    return all(sol.bits[j] or not fits(sol, j, inst) for j in range(inst.n))


def test_worked_example(tiny):
    sol = heuristic_repair(Solution.from_bits(tiny, [1, 1, 1]), [0, 1, 2], tiny)
    assert sol.bits.tolist() == [1, 1, 0]
    assert sol.profit == 11
    value, bits = enumerate_optimum(tiny)
    assert (value, bits.tolist()) == (11, [1, 1, 0])


def test_feasible_input_only_adds():
    inst = Instance([5, 4, 3], [[2, 2, 2]], [4])
    sol = heuristic_repair(Solution.from_bits(inst, [0, 0, 1]), [0, 1, 2], inst)
    # Nothing dropped; item 0 added, item 1 no longer fits.
    assert sol.bits.tolist() == [1, 0, 1]


def test_greedy_does_not_backtrack():
    inst = Instance([10, 1], [[5, 1]], [5])
    sol = heuristic_repair(Solution.from_bits(inst, [0, 1]), [0, 1], inst)
    assert sol.bits.tolist() == [0, 1]
    assert sol.profit == 1


def test_dropped_items_can_reenter():
    # Dropping item 2 (worst position) is not enough; item 1 goes too, then
    # item 2 fits again in the ADD phase.
    inst = Instance([9, 5, 1], [[4, 3, 1]], [5])
    sol = heuristic_repair(Solution.from_bits(inst, [1, 1, 1]), [0, 1, 2], inst)
    assert sol.bits.tolist() == [1, 0, 1]
    assert reference_repair([1, 1, 1], [0, 1, 2], inst) == [1, 0, 1]


def test_matches_reference_and_invariants(rng):
    for _ in range(2_000):
        inst = random_small_instance(rng, max_n=15, max_m=4)
        perm = rng.permutation(inst.n)
        start = rng.integers(0, 2, inst.n)
        sol = heuristic_repair(Solution.from_bits(inst, start), perm, inst)
        assert sol.bits.tolist() == reference_repair(start, perm, inst)
        fresh = Solution.from_bits(inst, sol.bits)
        assert sol.profit == fresh.profit
        assert np.array_equal(sol.usage, fresh.usage)
        assert is_feasible(inst, sol)
        assert _is_maximal(sol, inst)
        again = heuristic_repair(sol.copy(), perm, inst)
        assert np.array_equal(again.bits, sol.bits)


def test_drop_is_a_minimal_suffix_scan(rng):
    for _ in range(1_000):
        inst = random_small_instance(rng, max_n=20, max_m=3)
        perm = rng.permutation(inst.n)
        start = rng.integers(0, 2, inst.n).astype(np.uint8)
        sol = heuristic_repair(Solution.from_bits(inst, start), perm, inst)
        pos = np.empty(inst.n, dtype=int)
        pos[perm] = np.arange(inst.n)
        # ADD never removes, so start-selected items missing at the end were dropped.
        removed = [pos[j] for j in range(inst.n) if start[j] and not sol.bits[j]]
        if not removed:
            continue
        cut = min(removed)
        assert all(sol.bits[perm[k]] for k in range(cut) if start[perm[k]])
        # Dropping only the items after the cut must still leave an infeasible solution.
        partial = start.copy()
        partial[perm[cut + 1:]] = 0
        assert np.any(inst.weights @ partial > inst.capacities)


def test_repair_is_deterministic(rng):
    inst = random_small_instance(rng)
    perm = rng.permutation(inst.n)
    start = rng.integers(0, 2, inst.n)
    a = heuristic_repair(Solution.from_bits(inst, start), perm, inst)
    b = heuristic_repair(Solution.from_bits(inst, start), perm, inst)
    assert np.array_equal(a.bits, b.bits)


def test_never_beats_optimum(rng):
    for _ in range(100):
        inst = random_small_instance(rng, max_n=10, max_m=3)
        opt, _ = enumerate_optimum(inst)
        for _ in range(10):
            sol = heuristic_repair(
                Solution.from_bits(inst, rng.integers(0, 2, inst.n)), rng.permutation(inst.n), inst
            )
            assert sol.profit <= opt


def test_repair_population_cases(rng, tiny):
    assert repair_population([], [0, 1, 2], tiny) == []
    maximal = [Solution.from_bits(tiny, b) for b in ([1, 1, 0], [1, 0, 1], [0, 1, 1])]
    out = repair_population([s.copy() for s in maximal], [0, 1, 2], tiny)
    assert out == maximal


def test_repair_population_all_feasible(rng):
    for _ in range(10_000):
        inst = random_small_instance(rng, max_n=12, max_m=3)
        perm = rng.permutation(inst.n)
        pop = [Solution.from_bits(inst, rng.integers(0, 2, inst.n)) for _ in range(3)]
        assert all(is_feasible(inst, s) for s in repair_population(pop, perm, inst))
