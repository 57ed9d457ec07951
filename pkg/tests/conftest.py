from __future__ import annotations

import numpy as np
import pytest

from knapga import Instance

ACCEPTANCE_LINES: list[str] = []


def record_acceptance(number: int, passed: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"criterion {number}: {'PASS' if passed else 'FAIL'} - {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def reference_repair(bits, perm, inst: Instance) -> list[int]:
    """Plain-Python transcription of the DROP/ADD loops, recomputing usage each step."""
    x = [int(b) for b in bits]
    w = inst.weights.tolist()
    r = inst.capacities.tolist()

    def usage(i):
        return sum(w[i][j] for j in range(inst.n) if x[j])

    def feasible():
        return all(usage(i) <= r[i] for i in range(inst.m))

    for j in reversed(list(perm)):
        if feasible():
            break
        x[j] = 0
    for j in perm:
        if not x[j] and all(usage(i) + w[i][j] <= r[i] for i in range(inst.m)):
            x[j] = 1
    return x


def random_small_instance(rng: np.random.Generator, max_n: int = 60, max_m: int = 10) -> Instance:
    n = int(rng.integers(2, max_n + 1))
    m = int(rng.integers(1, max_m + 1))
    weights = rng.integers(0, 50, size=(m, n))
    tightness = rng.uniform(0.1, 0.9)
    capacities = np.floor(tightness * weights.sum(axis=1)).astype(np.int64)
    profits = rng.integers(1, 100, size=n)
    return Instance(profits, weights, capacities)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def tiny():
    """n=3, m=1: p=[6,5,4], w=[3,3,3], r=[6]."""
    return Instance([6, 5, 4], [[3, 3, 3]], [6], name="tiny")
