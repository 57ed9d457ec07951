import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knapga import Instance, Solution, fits, is_feasible, objective, set_bit
from knapga.instance import generate_instance


def test_objective_examples():
    inst = Instance([10, 6, 8], [[1, 1, 1]], [3])
    assert objective(inst, [1, 0, 1]) == 18
    assert objective(inst, [0, 0, 0]) == 0
    assert objective(Instance([6, 5, 4], [[1, 1, 1]], [3]), [1, 1, 1]) == 15


def test_objective_dimension_mismatch():
    inst = Instance([10, 6, 8], [[1, 1, 1]], [3])
    with pytest.raises(ValueError):
        objective(inst, [1, 0])


def test_is_feasible_boundary():
    inst = Instance([1, 1, 1], [[2, 3, 4]], [5])
    assert is_feasible(inst, Solution.from_bits(inst, [1, 1, 0]))
    assert not is_feasible(inst, Solution.from_bits(inst, [1, 1, 1]))
    assert is_feasible(inst, Solution.empty(inst))


def test_set_bit_round_trip(tiny):
    sol = Solution.from_bits(tiny, [1, 0, 1])
    before = sol.copy()
    set_bit(sol, 1, 1, tiny)
    set_bit(sol, 1, 0, tiny)
    assert sol == before
    assert sol.profit == before.profit
    assert np.array_equal(sol.usage, before.usage)


def test_set_bit_from_empty():
    inst = Instance([7, 3], [[2, 5], [4, 1]], [10, 10])
    sol = set_bit(Solution.empty(inst), 1, 1, inst)
    assert sol.profit == 3
    assert sol.usage.tolist() == [5, 1]


def test_set_bit_noop_and_range(tiny):
    sol = Solution.from_bits(tiny, [1, 0, 0])
    set_bit(sol, 0, 1, tiny)
    assert sol.profit == 6
    with pytest.raises(IndexError):
        set_bit(sol, 3, 1, tiny)
    with pytest.raises(IndexError):
        set_bit(sol, -1, 1, tiny)


def test_set_bit_fuzz_matches_recompute(rng):
    for _ in range(10_000):
        n, m = int(rng.integers(1, 12)), int(rng.integers(1, 4))
        inst = Instance(rng.integers(1, 50, n), rng.integers(0, 20, (m, n)), rng.integers(0, 60, m))
        sol = Solution.empty(inst)
        for _ in range(int(rng.integers(1, 10))):
            set_bit(sol, int(rng.integers(n)), int(rng.integers(2)), inst)
        fresh = Solution.from_bits(inst, sol.bits)
        assert sol.profit == fresh.profit
        assert np.array_equal(sol.usage, fresh.usage)


def test_set_bit_hundred_calls(rng):
    inst = generate_instance(40, 5, rng)
    sol = Solution.empty(inst)
    for _ in range(100):
        set_bit(sol, int(rng.integers(inst.n)), int(rng.integers(2)), inst)
    fresh = Solution.from_bits(inst, sol.bits)
    assert (sol.profit, sol.usage.tolist()) == (fresh.profit, fresh.usage.tolist())


def test_fits():
    inst = Instance([1, 1], [[3, 2]], [5])
    assert fits(Solution.empty(inst), 0, inst)
    zero_slack = Instance([1, 1, 1], [[2, 3, 1]], [5])
    sol = Solution.from_bits(zero_slack, [1, 1, 0])
    assert not fits(sol, 2, zero_slack)
    two_dim = Instance([1, 1, 1], [[3, 0, 2], [1, 0, 1]], [5, 2])
    sol = Solution.from_bits(two_dim, [1, 0, 0])
    assert sol.usage.tolist() == [3, 1]
    assert fits(sol, 2, two_dim)


def test_fits_rejects_selected_item(tiny):
    sol = Solution.from_bits(tiny, [1, 0, 0])
    with pytest.raises(ValueError):
        fits(sol, 0, tiny)


@pytest.mark.parametrize(
    "profits, weights, capacities",
    [
        ([0, 1], [[1, 1]], [1]),
        ([1, 1], [[1, -1]], [1]),
        ([1, 1], [[1, 1]], [-1]),
        ([1, 1], [[1, 1, 1]], [1]),
        ([1.5, 1], [[1, 1]], [1]),
        ([], [[]], [1]),
    ],
)
def test_instance_validation(profits, weights, capacities):
    with pytest.raises(ValueError):
        Instance(profits, weights, capacities)


def test_instance_arrays_read_only(tiny):
    with pytest.raises(ValueError):
        tiny.profits[0] = 99


def test_solution_identity_is_bits_not_profit():
    inst = Instance([5, 5], [[1, 1]], [1])
    a = Solution.from_bits(inst, [1, 0])
    b = Solution.from_bits(inst, [0, 1])
    assert a.profit == b.profit
    assert a != b


def test_generate_instance_shape(rng):
    inst = generate_instance(20, 5, rng)
    assert (inst.n, inst.m) == (20, 5)
    assert inst.weights.min() >= 1 and inst.weights.max() <= 100
    assert np.array_equal(inst.capacities, inst.weights.sum(axis=1) // 2)


bit_pairs = st.integers(1, 12).flatmap(
    lambda n: st.tuples(
        st.lists(st.integers(1, 1000), min_size=n, max_size=n),
        st.lists(st.integers(0, 1), min_size=n, max_size=n),
        st.lists(st.integers(0, 1), min_size=n, max_size=n),
    )
)


@settings(max_examples=200)
@given(bit_pairs)
def test_objective_linearity(data):
    profits, a, b = data
    inst = Instance(profits, [[1] * len(profits)], [1])
    a, b = np.array(a), np.array(b)
    assert objective(inst, a) + objective(inst, b) == objective(inst, a | b) + objective(inst, a & b)
