"""Brute-force minimax verification on small instances.

Ground truth for the closed forms: enumerate every one- or two-point
truthful count distribution, let the adversary best-respond per report
event, and grid-search monotone piecewise-linear aggregators.  Exhaustive
and slow by design; the production paths are the closed forms and the
solver, which the acceptance tests check against this module.

The adversary maximum needs only pure strategies: the objective is a sum
over independent (state, truthful count) events, so the inner sup is a
per-event argmax over the k+1 possible added counts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import (AdversaryStrategy, Aggregator, CondDist, DomainError,
                   InfoStructure, LossKind, Params, ResourceError, benchmark)
from .worst_case import WorstCase, check_feasible

STRATEGY_CAP = 10 ** 18      # nominal pure-strategy count guard
GRID_CAP = 5_000_000         # aggregator tuples the minimax search will try
DEFAULT_DELTA = 0.02


@dataclass(frozen=True)
class OracleGrid:
    """Enumerated search space for one instance."""

    structures: tuple[InfoStructure, ...]
    strategy_count: int
    f_levels: np.ndarray
    knots: tuple[int, ...]


def enumerate_structures(p: Params) -> tuple[InfoStructure, ...]:
    """All feasible structures with one- or two-point truthful supports,
    in lexicographic support order."""
    m = p.n - p.k

    def side(mean: float) -> list[CondDist]:
        out = []
        r = round(mean)
        if abs(mean - r) < 1e-12 and 0 <= r <= m:
            out.append(CondDist(m, {int(r): 1.0}))
        for x1 in range(m + 1):
            for x2 in range(x1 + 1, m + 1):
                if x1 < mean < x2:
                    q = (mean - x1) / (x2 - x1)
                    if 1e-12 < q < 1 - 1e-12:
                        out.append(CondDist(m, {x1: 1 - q, x2: q}))
        return out

    structures = tuple(InfoStructure(p, u1, u0)
                       for u1 in side(m * p.a) for u0 in side(m * p.b))
    assert all(check_feasible(t.u1, t.u0, p) for t in structures)
    return structures


def build_grid(p: Params, delta: float = DEFAULT_DELTA) -> OracleGrid:
    m = p.n - p.k
    count = (p.k + 1) ** (2 * (m + 1))
    if count > STRATEGY_CAP:
        raise ResourceError(
            f"{count} pure strategies exceed the cap {STRATEGY_CAP}")
    levels = np.round(np.arange(0.0, 1.0 + delta / 2, delta), 12)
    knots = tuple(sorted({0, 1, p.k, p.n - p.k, p.n - 1, p.n}))
    return OracleGrid(enumerate_structures(p), count, levels, knots)


def _event_worst_losses(values: np.ndarray, k: int, m: int,
                        kind: LossKind) -> tuple[np.ndarray, np.ndarray]:
    """Per truthful count, the loss after the adversary's worst shift.

    values may be 1-D (one aggregator) or 2-D (stacked aggregators x counts).
    Returns arrays shaped like values[..., :m+1] for states 1 and 0.
    """
    v = np.atleast_2d(values)
    loss1 = np.empty((v.shape[0], m + 1))
    loss0 = np.empty((v.shape[0], m + 1))
    for xt in range(m + 1):
        window = v[:, xt:xt + k + 1]
        if kind is LossKind.L1:
            loss1[:, xt] = (1 - window).max(axis=1)
            loss0[:, xt] = window.max(axis=1)
        else:
            loss1[:, xt] = ((1 - window) ** 2).max(axis=1)
            loss0[:, xt] = (window ** 2).max(axis=1)
    if values.ndim == 1:
        return loss1[0], loss0[0]
    return loss1, loss0


def _witness_strategy(values: np.ndarray, p: Params,
                      kind: LossKind) -> AdversaryStrategy:
    """The per-event argmax shifts against a fixed aggregator (ties to the
    smallest added count)."""
    m = p.n - p.k
    js = np.zeros((2, m + 1), dtype=int)
    for xt in range(m + 1):
        window = values[xt:xt + p.k + 1]
        if kind is LossKind.L1:
            js[1, xt] = int(np.argmax(1 - window))
            js[0, xt] = int(np.argmax(window))
        else:
            js[1, xt] = int(np.argmax((1 - window) ** 2))
            js[0, xt] = int(np.argmax(window ** 2))
    return AdversaryStrategy.from_pure_table(m, p.k, js)


def brute_force_max_regret(f: Aggregator, p: Params, kind: LossKind
                           ) -> tuple[float, WorstCase]:
    """Exact worst-case regret of f over all enumerated structures and all
    adversary strategies, with an argmax witness."""
    m = p.n - p.k
    structures = enumerate_structures(p)
    loss1, loss0 = _event_worst_losses(f.values, p.k, m, kind)
    best = -np.inf
    best_theta = None
    for theta in structures:
        r = -benchmark(theta, kind).expected_loss
        for x, mass in theta.u1.mass.items():
            r += p.mu * mass * loss1[x]
        for x, mass in theta.u0.mass.items():
            r += (1 - p.mu) * mass * loss0[x]
        if r > best + 1e-15:
            best, best_theta = r, theta
    sigma = _witness_strategy(f.values, p, kind)
    witness = WorstCase(best_theta, sigma,
                        benchmark(best_theta, kind).expected_loss,
                        "oracle argmax structure")
    return float(best), witness


def _monotone_value_matrix(grid: OracleGrid, n: int) -> np.ndarray:
    """All monotone knot tuples expanded to values on 0..n."""
    knots = grid.knots
    tuples = np.array(list(itertools.combinations_with_replacement(
        grid.f_levels, len(knots))))
    if len(tuples) > GRID_CAP:
        raise ResourceError(
            f"{len(tuples)} aggregator tuples exceed the cap {GRID_CAP}")
    values = np.empty((len(tuples), n + 1))
    for x in range(n + 1):
        j = int(np.searchsorted(knots, x, side="right")) - 1
        if knots[j] == x:
            values[:, x] = tuples[:, j]
        else:
            x0, x1 = knots[j], knots[j + 1]
            t = (x - x0) / (x1 - x0)
            values[:, x] = (1 - t) * tuples[:, j] + t * tuples[:, j + 1]
    return values


def _max_regret_vectorized(values: np.ndarray, p: Params, kind: LossKind,
                           interior_only: bool = False) -> np.ndarray:
    """Worst-case regret of every stacked aggregator at once.

    With interior_only the adversary must keep observed counts in
    [k, n-k]; used to check that the restriction loses nothing.
    """
    m = p.n - p.k
    structures = enumerate_structures(p)
    if interior_only:
        loss1 = np.empty((values.shape[0], m + 1))
        loss0 = np.empty((values.shape[0], m + 1))
        for xt in range(m + 1):
            j_lo = max(0, p.k - xt)
            j_hi = min(p.k, p.n - p.k - xt)
            window = values[:, xt + j_lo:xt + j_hi + 1]
            if kind is LossKind.L1:
                loss1[:, xt] = (1 - window).max(axis=1)
                loss0[:, xt] = window.max(axis=1)
            else:
                loss1[:, xt] = ((1 - window) ** 2).max(axis=1)
                loss0[:, xt] = (window ** 2).max(axis=1)
    else:
        loss1, loss0 = _event_worst_losses(values, p.k, m, kind)
    worst = np.full(values.shape[0], -np.inf)
    for theta in structures:
        u1 = theta.u1.to_array(m + 1)
        u0 = theta.u0.to_array(m + 1)
        bench = benchmark(theta, kind).expected_loss
        reg = p.mu * (loss1 @ u1) + (1 - p.mu) * (loss0 @ u0) - bench
        np.maximum(worst, reg, out=worst)
    return worst


def brute_force_minimax(p: Params, kind: LossKind,
                        delta: float = DEFAULT_DELTA
                        ) -> tuple[Aggregator, float]:
    """Grid minimax over monotone piecewise-linear aggregators.

    Accuracy is delta times the regret's Lipschitz constant in the
    aggregator values (at most 2 per count for squared error, 1 for
    absolute error).  Ties go to the lexicographically smallest tuple.
    """
    grid = build_grid(p, delta)
    values = _monotone_value_matrix(grid, p.n)
    worst = _max_regret_vectorized(values, p, kind)
    best = int(np.argmin(worst))
    f = Aggregator(values[best],
                   tuple(zip(grid.knots,
                             (float(values[best][x]) for x in grid.knots))))
    return f, float(worst[best])


def verify_interior_lemma(p: Params, kind: LossKind,
                          delta: float = DEFAULT_DELTA,
                          tol: float | None = None) -> bool:
    """Whether forcing the adversary to keep counts inside [k, n-k]
    changes the grid minimax value (it should not)."""
    if p.k == 0:
        return True
    grid = build_grid(p, delta)
    values = _monotone_value_matrix(grid, p.n)
    full = _max_regret_vectorized(values, p, kind).min()
    interior = _max_regret_vectorized(values, p, kind,
                                      interior_only=True).min()
    return abs(float(full) - float(interior)) <= (tol if tol is not None
                                                  else delta)
