"""LP relaxation of the MKP, dual weights, and item efficiencies.

The relaxation ``max p.x s.t. Wx <= r, 0 <= x <= 1`` is solved with a dense
bounded-variable revised simplex.  The duals of the capacity rows weight the
resources when computing each item's efficiency ``p_j / sum_i lambda_i w_ij``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .instance import Instance

log = logging.getLogger(__name__)

TOL = 1e-9
REFACTOR_EVERY = 50


class LpStatus(str, Enum):
    OPTIMAL = "optimal"
    FAILED = "failed"


class WeightSource(str, Enum):
    DUAL = "dual"
    UNIFORM_FALLBACK = "uniform_fallback"


class DegenerateWeightsError(ValueError):
    """Some item has a zero weighted-resource denominator."""


@dataclass
class LpSolution:
    primal_values: np.ndarray
    primal_objective: float
    duals: np.ndarray
    status: LpStatus
    iterations: int = 0

    def bound_duals(self, inst: Instance) -> np.ndarray:
        """Implied duals of the ``x_j <= 1`` bounds: ``max(0, p_j - lambda.w_j)``."""
        return np.maximum(0.0, inst.profits - self.duals @ inst.weights)

    def duality_gap(self, inst: Instance) -> float:
        dual_obj = float(self.duals @ inst.capacities) + float(self.bound_duals(inst).sum())
        return abs(self.primal_objective - dual_obj)


def solve_lp_relaxation(inst: Instance, *, max_iter: int | None = None) -> LpSolution:
    """Optimal basic solution of the MKP's LP relaxation.

    Variables are the n items (bounded by 1) followed by m slacks (unbounded
    above).  The slack basis is the starting point; it is feasible because
    capacities are non-negative.  Dantzig pricing is used for the first
    ``5 (n + m)`` iterations and Bland's rule afterwards, so degenerate cycling
    cannot persist.  On iteration-limit or numerical trouble the status is
    ``failed`` and the returned vectors are zeros.
    """
    n, m = inst.n, inst.m
    nv = n + m
    a = np.hstack([inst.weights.astype(float), np.eye(m)])
    b = inst.capacities.astype(float)
    c = np.concatenate([inst.profits.astype(float), np.zeros(m)])
    upper = np.concatenate([np.ones(n), np.full(m, np.inf)])

    bland_after = 5 * nv
    if max_iter is None:
        max_iter = 50 * nv

    basis = np.arange(n, nv)
    is_basic = np.zeros(nv, dtype=bool)
    is_basic[basis] = True
    at_upper = np.zeros(nv, dtype=bool)
    x = np.zeros(nv)
    x[basis] = b
    binv = np.eye(m)

    def failed(it: int) -> LpSolution:
        return LpSolution(np.zeros(n), 0.0, np.zeros(m), LpStatus.FAILED, it)

    it = 0
    since_refactor = 0
    while True:
        if since_refactor >= REFACTOR_EVERY:
            try:
                binv = np.linalg.inv(a[:, basis])
            except np.linalg.LinAlgError:
                return failed(it)
            nonbasic_x = np.where(is_basic, 0.0, x)
            x[basis] = binv @ (b - a @ nonbasic_x)
            since_refactor = 0

        y = c[basis] @ binv
        d = c - y @ a
        eligible = ~is_basic & np.where(at_upper, d < -TOL, d > TOL)
        if not eligible.any():
            break
        if it >= max_iter:
            log.warning("simplex hit iteration cap %d on %s", max_iter, inst.name)
            return failed(it)
        bland = it >= bland_after
        candidates = np.flatnonzero(eligible)
        q = candidates[0] if bland else candidates[np.argmax(np.abs(d[candidates]))]
        sign = -1.0 if at_upper[q] else 1.0

        alpha = binv @ a[:, q]
        delta = sign * alpha
        ub = upper[basis]
        xb = x[basis]
        ratios = np.full(m, np.inf)
        dec = delta > TOL
        ratios[dec] = np.maximum(xb[dec], 0.0) / delta[dec]
        inc = (delta < -TOL) & np.isfinite(ub)
        ratios[inc] = np.maximum(ub[inc] - xb[inc], 0.0) / -delta[inc]
        t_basis = ratios.min() if m else np.inf
        t_flip = upper[q]
        step = min(t_basis, t_flip)
        if not np.isfinite(step):
            return failed(it)

        x[basis] = xb - step * delta
        x[q] += sign * step
        if t_flip <= t_basis:
            at_upper[q] = not at_upper[q]
            x[q] = upper[q] if at_upper[q] else 0.0
        else:
            ties = np.flatnonzero(ratios <= t_basis + TOL)
            if bland:
                r = ties[np.argmin(basis[ties])]
            else:
                r = ties[np.argmax(np.abs(alpha[ties]))]
            leaving = basis[r]
            leaves_upper = bool(inc[r])
            x[leaving] = upper[leaving] if leaves_upper else 0.0
            at_upper[leaving] = leaves_upper
            is_basic[leaving] = False
            basis[r] = q
            is_basic[q] = True
            at_upper[q] = False

            pivot = alpha[r]
            if abs(pivot) < 1e-12:
                return failed(it)
            row = binv[r] / pivot
            binv -= np.outer(alpha, row)
            binv[r] = row
            since_refactor += 1
        it += 1

    try:
        binv = np.linalg.inv(a[:, basis])
    except np.linalg.LinAlgError:
        return failed(it)
    duals = np.maximum(c[basis] @ binv, 0.0)
    primal = np.clip(x[:n], 0.0, 1.0)
    # Snap values within tolerance of a bound so fractional counts are clean.
    primal[primal < TOL] = 0.0
    primal[primal > 1.0 - TOL] = 1.0
    sol = LpSolution(primal, float(inst.profits @ primal), duals, LpStatus.OPTIMAL, it)
    gap = sol.duality_gap(inst)
    if gap > 1e-6 * (1.0 + abs(sol.primal_objective)):
        log.warning("simplex duality gap %.3g on %s; treating as failure", gap, inst.name)
        return failed(it)
    return sol


@dataclass
class EfficiencyVector:
    values: np.ndarray
    scaled: np.ndarray


def compute_efficiencies(inst: Instance, weights) -> EfficiencyVector:
    """Efficiency ``p_j / sum_i weights_i * w_ij`` and its min-max scaling to [0, 1].

    Raises :class:`DegenerateWeightsError` if any denominator is not positive.
    A constant efficiency vector scales to 0.5 everywhere.
    """
    lam = np.asarray(weights, dtype=float)
    if lam.shape != (inst.m,):
        raise ValueError(f"need {inst.m} resource weights, got shape {lam.shape}")
    if np.any(lam < 0):
        raise ValueError("resource weights must be non-negative")
    denom = lam @ inst.weights
    bad = np.flatnonzero(denom <= 0)
    if bad.size:
        raise DegenerateWeightsError(
            f"{bad.size} item(s) have zero weighted resource use (first: item {bad[0]})"
        )
    values = inst.profits / denom
    return EfficiencyVector(values, _minmax(values))


def _minmax(values: np.ndarray) -> np.ndarray:
    lo, hi = values.min(), values.max()
    if hi > lo:
        return (values - lo) / (hi - lo)
    return np.full(values.shape, 0.5)


def uniform_efficiencies(inst: Instance) -> EfficiencyVector:
    # Items that consume nothing would divide by zero; half a unit of resource
    # keeps them finite and ahead of every item that consumes anything.
    denom = np.maximum(inst.weights.sum(axis=0).astype(float), 0.5)
    values = inst.profits / denom
    return EfficiencyVector(values, _minmax(values))


def dual_efficiencies(
    inst: Instance, lp: LpSolution | None = None
) -> tuple[EfficiencyVector, WeightSource]:
    """Efficiencies from LP dual weights, falling back to uniform weights.

    The fallback applies when the LP fails or the duals leave some item with
    a zero denominator (e.g. when every item fits and all duals are zero).
    """
    if lp is None:
        lp = solve_lp_relaxation(inst)
    if lp.status is LpStatus.OPTIMAL:
        try:
            return compute_efficiencies(inst, lp.duals), WeightSource.DUAL
        except DegenerateWeightsError as exc:
            log.info("dual weights degenerate on %s (%s); using uniform weights", inst.name, exc)
    else:
        log.info("LP relaxation failed on %s; using uniform weights", inst.name)
    return uniform_efficiencies(inst), WeightSource.UNIFORM_FALLBACK
