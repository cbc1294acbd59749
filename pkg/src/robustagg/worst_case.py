"""Explicit worst-case instances for the adversarial closed forms.

These are the constructions that certify the regret lower bounds: two-point
truthful report distributions placed so that, after the adversaries shift
one state's counts, the two states become maximally confusable while the
truthful counts alone would have revealed the state exactly (zero benchmark
loss).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .core import (MEAN_TOL, AdversaryStrategy, Aggregator, CondDist,
                   DomainError, InfoStructure, Params, benchmark,
                   LossKind)
from .closed_form import l2_threshold


@dataclass(frozen=True)
class WorstCase:
    theta: InfoStructure
    sigma: AdversaryStrategy
    benchmark_loss: float
    description: str
    degenerate: bool = False

    def to_json(self) -> str:
        p = self.theta.params
        return json.dumps({
            "params": {"n": p.n, "k": p.k, "mu": p.mu, "a": p.a, "b": p.b},
            "u1": {str(x): m for x, m in sorted(self.theta.u1.mass.items())},
            "u0": {str(x): m for x, m in sorted(self.theta.u0.mass.items())},
            "sigma": self.sigma.table.tolist(),
            "benchmark_loss": self.benchmark_loss,
            "description": self.description,
            "degenerate": self.degenerate,
        }, indent=2)


def check_feasible(u1: CondDist, u0: CondDist, p: Params) -> bool:
    """Whether the truthful count distributions have the required means."""
    m = p.n - p.k
    return (abs(u1.mean - m * p.a) <= MEAN_TOL
            and abs(u0.mean - m * p.b) <= MEAN_TOL)


def _two_point(lo: int, hi: int, mean: float, domain_max: int) -> CondDist:
    # probability of hi solved from the mean constraint
    if lo == hi:
        return CondDist(domain_max, {lo: 1.0})
    q = (mean - lo) / (hi - lo)
    if q <= 1e-12:
        return CondDist(domain_max, {lo: 1.0})
    if q >= 1 - 1e-12:
        return CondDist(domain_max, {hi: 1.0})
    return CondDist(domain_max, {lo: 1.0 - q, hi: q})


def worst_structure_l2(p: Params) -> WorstCase:
    """The instance behind the hard-sigmoid optimum under squared error.

    Truthful counts: state 1 on {k, n-k}, state 0 on {0, n-2k}.  The
    adversaries stay silent (report L) when the state is 1 and all report H
    when it is 0, so both observed-count distributions live on {k, n-k}.
    The truthful supports are disjoint (except when n = 3k), making the
    benchmark loss zero while the observer sees two overlapping mixtures.
    """
    n, k, m = p.n, p.k, p.n - p.k
    if not 0 < p.gamma < l2_threshold(p):
        raise DomainError(
            f"gamma={p.gamma} outside (0, {l2_threshold(p)})")
    if m * p.a < k - MEAN_TOL or m * p.b > n - 2 * k + MEAN_TOL:
        raise DomainError("support anchors outside the feasible mean range")
    u1 = _two_point(k, m, m * p.a, m)
    u0 = _two_point(0, n - 2 * k, m * p.b, m)
    sigma = AdversaryStrategy.constant(m, k, j1=0, j0=k)
    theta = InfoStructure(p, u1, u0)
    bench = benchmark(theta, LossKind.L2).expected_loss
    degenerate = n == 3 * k
    return WorstCase(theta, sigma, bench,
                     "two-point confusable pair, squared error", degenerate)


def worst_structure_l1(p: Params, x: tuple[int, int, int, int]) -> WorstCase:
    """Confusable pair for absolute error with chosen observed supports.

    Observed counts under state 1 sit on {x1, x2}; under state 0 the
    truthful counts sit on {x3-k, x4-k} and every adversary reports H,
    moving them onto {x3, x4}.  All four observed anchors must lie in
    [k, n-k] and straddle the respective means; the truthful supports must
    be disjoint so the benchmark is exact.
    """
    x1, x2, x3, x4 = x
    n, k, m = p.n, p.k, p.n - p.k
    if not (x1 <= x2 and x3 <= x4):
        raise DomainError("anchors must be ordered within each state")
    for xi in (x1, x2, x3, x4):
        if not k <= xi <= n - k:
            raise DomainError(f"anchor {xi} outside [k, n-k]")
    if not (x1 <= m * p.a <= x2):
        raise DomainError("state-1 anchors must straddle (n-k)a")
    if not (x3 <= k + m * p.b <= x4):
        raise DomainError("state-0 anchors must straddle k+(n-k)b")
    if len({x1, x2, x3 - k, x4 - k}) < 4:
        raise DomainError("anchors must give four distinct truthful supports")
    u1 = _two_point(x1, x2, m * p.a, m)
    u0 = _two_point(x3 - k, x4 - k, m * p.b, m)
    sigma = AdversaryStrategy.constant(m, k, j1=0, j0=k)
    theta = InfoStructure(p, u1, u0)
    bench = benchmark(theta, LossKind.L1).expected_loss
    return WorstCase(theta, sigma, bench,
                     "two-point confusable pair, absolute error")


def clamp_to_interior(f: Aggregator, p: Params) -> Aggregator:
    """Freeze f outside [k, n-k] at its boundary values.

    Worst-case regret is unchanged: observed counts below k or above n-k
    can only arise from truthful counts the adversary chose not to move
    into the interior, and matching the boundary value never helps them.
    """
    v = f.values.copy()
    v[:p.k] = v[p.k]
    v[p.n - p.k + 1:] = v[p.n - p.k]
    return Aggregator(v)
