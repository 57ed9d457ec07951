"""MKP instances, solutions, and incremental resource accounting.

All instance data is integral and stored as ``int64``; feasibility checks are
exact integer comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_INT64_MAX = np.iinfo(np.int64).max


def _frozen_int_array(values, ndim: int, label: str) -> np.ndarray:
    arr = np.asarray(values)
    if arr.ndim != ndim:
        raise ValueError(f"{label} must be {ndim}-dimensional, got shape {arr.shape}")
    if arr.size and not np.issubdtype(arr.dtype, np.integer):
        as_int = arr.astype(np.int64)
        if not np.array_equal(as_int, arr):
            raise ValueError(f"{label} must be integral")
        arr = as_int
    arr = np.array(arr, dtype=np.int64, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Instance:
    """An MKP instance: maximize ``profits @ x`` s.t. ``weights @ x <= capacities``.

    ``weights`` has shape ``(m, n)``: one row per resource.  Arrays are
    read-only, so an instance can be shared freely between runs.
    """

    profits: np.ndarray
    weights: np.ndarray
    capacities: np.ndarray
    name: str = "unnamed"
    best_known: int | None = None
    weights_t: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        profits = _frozen_int_array(self.profits, 1, "profits")
        weights = _frozen_int_array(self.weights, 2, "weights")
        capacities = _frozen_int_array(self.capacities, 1, "capacities")
        n, m = profits.shape[0], capacities.shape[0]
        if n < 1 or m < 1:
            raise ValueError(f"need n >= 1 and m >= 1, got n={n}, m={m}")
        if weights.shape != (m, n):
            raise ValueError(f"weights must have shape ({m}, {n}), got {weights.shape}")
        if np.any(profits <= 0):
            raise ValueError("profits must be positive")
        if np.any(weights < 0):
            raise ValueError("weights must be non-negative")
        if np.any(capacities < 0):
            raise ValueError("capacities must be non-negative")
        # Sums are computed in Python ints so an overflowing instance is caught
        # rather than wrapped.
        if sum(int(p) for p in profits) > _INT64_MAX:
            raise ValueError("total profit overflows int64")
        if max(sum(int(w) for w in row) for row in weights) > _INT64_MAX:
            raise ValueError("total weight overflows int64")
        wt = np.ascontiguousarray(weights.T)
        wt.setflags(write=False)
        object.__setattr__(self, "profits", profits)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "capacities", capacities)
        object.__setattr__(self, "weights_t", wt)
        if self.best_known is not None:
            object.__setattr__(self, "best_known", int(self.best_known))

    @property
    def n(self) -> int:
        return self.profits.shape[0]

    @property
    def m(self) -> int:
        return self.capacities.shape[0]

    def same_data(self, other: Instance) -> bool:
        """True if both instances carry identical numeric data and metadata."""
        return (
            self.name == other.name
            and self.best_known == other.best_known
            and np.array_equal(self.profits, other.profits)
            and np.array_equal(self.weights, other.weights)
            and np.array_equal(self.capacities, other.capacities)
        )


@dataclass(eq=False)
class Solution:
    """A binary selection with cached profit and per-resource usage."""

    bits: np.ndarray
    profit: int
    usage: np.ndarray

    @classmethod
    def empty(cls, inst: Instance) -> Solution:
        return cls(np.zeros(inst.n, dtype=np.uint8), 0, np.zeros(inst.m, dtype=np.int64))

    @classmethod
    def from_bits(cls, inst: Instance, bits) -> Solution:
        b = np.asarray(bits)
        if b.shape != (inst.n,):
            raise ValueError(f"bits must have length {inst.n}, got shape {b.shape}")
        if np.any((b != 0) & (b != 1)):
            raise ValueError("bits must be 0/1")
        b = b.astype(np.uint8)
        return cls(b, objective(inst, b), inst.weights @ b.astype(np.int64))

    def copy(self) -> Solution:
        return Solution(self.bits.copy(), self.profit, self.usage.copy())

    def key(self) -> bytes:
        """Identity used for population uniqueness: the bit vector itself."""
        return self.bits.tobytes()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Solution):
            return NotImplemented
        return np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash(self.key())


def objective(inst: Instance, bits) -> int:
    """Total profit of the selected items."""
    b = np.asarray(bits)
    if b.shape != (inst.n,):
        raise ValueError(f"bits must have length {inst.n}, got shape {b.shape}")
    return int(inst.profits @ b.astype(np.int64))


def _check_dims(inst: Instance, sol: Solution) -> None:
    if sol.bits.shape != (inst.n,) or sol.usage.shape != (inst.m,):
        raise ValueError(
            f"solution shape (bits {sol.bits.shape}, usage {sol.usage.shape}) "
            f"does not match instance n={inst.n}, m={inst.m}"
        )


def is_feasible(inst: Instance, sol: Solution) -> bool:
    _check_dims(inst, sol)
    return bool(np.all(sol.usage <= inst.capacities))


def set_bit(sol: Solution, j: int, value: int, inst: Instance) -> Solution:
    """Set ``bits[j]`` and update the caches in O(m). Mutates and returns ``sol``."""
    if not 0 <= j < inst.n:
        raise IndexError(f"item index {j} out of range for n={inst.n}")
    value = 1 if value else 0
    if sol.bits[j] == value:
        return sol
    sol.bits[j] = value
    if value:
        sol.profit += int(inst.profits[j])
        sol.usage += inst.weights_t[j]
    else:
        sol.profit -= int(inst.profits[j])
        sol.usage -= inst.weights_t[j]
    return sol


def fits(sol: Solution, j: int, inst: Instance) -> bool:
    """Whether unselected item ``j`` can be added without exceeding any capacity."""
    if not 0 <= j < inst.n:
        raise IndexError(f"item index {j} out of range for n={inst.n}")
    if sol.bits[j]:
        raise ValueError(f"fits() called on item {j}, which is already selected")
    return bool(np.all(sol.usage + inst.weights_t[j] <= inst.capacities))


def generate_instance(
    n: int,
    m: int,
    rng: np.random.Generator,
    *,
    weight_range: tuple[int, int] = (1, 100),
    tightness: float = 0.5,
    profit_noise: int = 50,
    name: str = "generated",
) -> Instance:
    """Random correlated instance in the style of the OR-Library MKP sets.

    Weights are uniform integers in ``weight_range`` (inclusive), each
    capacity is ``floor(tightness * row sum)``, and each profit is the mean
    item weight plus a uniform integer in ``[1, profit_noise]``.
    """
    lo, hi = weight_range
    weights = rng.integers(lo, hi + 1, size=(m, n), dtype=np.int64)
    capacities = np.floor(tightness * weights.sum(axis=1)).astype(np.int64)
    profits = weights.sum(axis=0) // m + rng.integers(1, profit_noise + 1, size=n)
    return Instance(profits, weights, capacities, name=name)
