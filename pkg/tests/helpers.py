"""Shared generators for randomized test corpora.

Structures are built from one- and two-point conditional distributions with
exact means, mixed together for higher-support cases; strategies are random
tables of per-event distributions.  Everything is driven by an explicit
numpy Generator so corpora are reproducible.
"""

from __future__ import annotations

import math

import numpy as np

from robustagg import (
    AdversaryStrategy,
    Aggregator,
    CondDist,
    InfoStructure,
    Params,
)


def two_point(lo: int, hi: int, mean: float, m: int) -> CondDist:
    q = (mean - lo) / (hi - lo)
    if q <= 0.0:
        return CondDist(m, {lo: 1.0})
    if q >= 1.0:
        return CondDist(m, {hi: 1.0})
    return CondDist(m, {lo: 1 - q, hi: q})


def random_conddist(rng: np.random.Generator, m: int, mean: float,
                    points: int = 2) -> CondDist:
    """Random distribution on {0..m} with the exact mean, built as a mixture
    of `points - 1` feasible two-point distributions."""
    parts = []
    for _ in range(max(points - 1, 1)):
        lo = int(rng.integers(0, math.floor(mean) + 1))
        hi = int(rng.integers(math.ceil(mean), m + 1))
        if lo == hi:  # mean is integral and lo == hi == mean
            parts.append(CondDist(m, {lo: 1.0}))
        else:
            parts.append(two_point(lo, hi, mean, m))
    weights = rng.dirichlet(np.ones(len(parts)))
    arr = np.zeros(m + 1)
    for w, d in zip(weights, parts):
        arr += w * d.to_array(m + 1)
    return CondDist.from_array(arr, m)


def random_structure(rng: np.random.Generator, p: Params,
                     points: int = 2) -> InfoStructure:
    m = p.n - p.k
    return InfoStructure(p,
                         random_conddist(rng, m, m * p.a, points),
                         random_conddist(rng, m, m * p.b, points))


def random_sigma(rng: np.random.Generator, p: Params,
                 pure: bool = False) -> AdversaryStrategy:
    m = p.n - p.k
    if pure:
        js = rng.integers(0, p.k + 1, size=(2, m + 1))
        return AdversaryStrategy.from_pure_table(m, p.k, js)
    table = rng.dirichlet(np.ones(p.k + 1), size=(2, m + 1))
    return AdversaryStrategy(table)


def random_monotone_aggregator(rng: np.random.Generator, n: int) -> Aggregator:
    return Aggregator(np.sort(rng.random(n + 1)))


def random_valid_params(rng: np.random.Generator,
                        n_max: int = 30) -> Params:
    """Random instance satisfying the strict squared-loss threshold
    0 < gamma < min(a/(1+a), (1-b)/(2-b))."""
    while True:
        n = int(rng.integers(3, n_max + 1))
        k = int(rng.integers(1, (n - 1) // 2 + 1)) if n >= 3 else 1
        mu = float(rng.uniform(0.05, 0.95))
        a = float(rng.uniform(0.1, 0.95))
        b = float(rng.uniform(0.02, a - 0.05)) if a > 0.07 else 0.01
        if not 0 < b < a < 1:
            continue
        p = Params(n, k, mu, a, b)
        if 0 < p.gamma < min(a / (1 + a), (1 - b) / (2 - b)):
            return p
