"""Epsilon-optimal aggregator for squared error without adversaries.

The minimax problem collapses twice: worst-case truthful count
distributions need at most two support points, and those points can be
pushed to {0, 1, n-1, n}.  What remains is minimizing, over the four
aggregator values at those counts (interior counts linearly interpolated
between counts 1 and n-1), the maximum of one convex quadratic per member
of a constant-size structure family.

The minimizer runs a coarse vectorized grid to localize, polishes with an
epigraph SLSQP solve, and certifies the gap by maximizing the concave dual
(the best mixture of structures); the reported epsilon is the achieved
primal-dual gap.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .core import Aggregator, CondDist, DomainError, InfoStructure, Params
from .worst_case import check_feasible


@dataclass(frozen=True)
class ExtremeFamily:
    """All candidate worst-case structures for a k=0 squared-error instance:
    one- or two-point count distributions on {0, 1, n-1, n} with the exact
    required means."""

    structures: tuple[InfoStructure, ...]
    params: Params


@dataclass(frozen=True)
class SolverResult:
    aggregator: Aggregator
    regret: float
    epsilon: float
    iterations: int

    def to_json(self) -> str:
        n = self.aggregator.n
        return json.dumps({
            "n": n,
            "values": {str(x): float(self.aggregator.values[x])
                       for x in range(n + 1)},
            "regret": self.regret,
            "epsilon": self.epsilon,
            "iterations": self.iterations,
        }, indent=2)


def _anchor_dists(n: int, mean: float) -> list[CondDist]:
    pts = [0, 1, n - 1, n]
    out: list[CondDist] = []
    seen = set()
    for p in pts:
        if abs(mean - p) < 1e-12:
            out.append(CondDist(n, {p: 1.0}))
            seen.add((p,))
    for i in range(4):
        for j in range(i + 1, 4):
            lo, hi = pts[i], pts[j]
            if lo < mean < hi:
                q = (mean - lo) / (hi - lo)
                if 1e-12 < q < 1 - 1e-12:
                    out.append(CondDist(n, {lo: 1.0 - q, hi: q}))
    return out


def enumerate_extreme(p: Params) -> ExtremeFamily:
    if p.k != 0:
        raise DomainError("extreme-family reduction applies only at k=0")
    if p.n < 3:
        raise DomainError("need n >= 3 so the anchor counts are distinct")
    side1 = _anchor_dists(p.n, p.n * p.a)
    side0 = _anchor_dists(p.n, p.n * p.b)
    if not side1 or not side0:
        raise DomainError("no feasible anchor support for one state")
    structures = tuple(InfoStructure(p, u1, u0)
                       for u1 in side1 for u0 in side0)
    assert all(check_feasible(t.u1, t.u0, p) for t in structures)
    return ExtremeFamily(structures, p)


def _family_arrays(fam: ExtremeFamily):
    """Per-structure weight rows on the anchor counts plus benchmark loss."""
    p = fam.params
    pts = [0, 1, p.n - 1, p.n]
    w1 = np.array([[t.u1.mass.get(x, 0.0) for x in pts]
                   for t in fam.structures])
    w0 = np.array([[t.u0.mass.get(x, 0.0) for x in pts]
                   for t in fam.structures])
    bench = np.empty(len(fam.structures))
    for i, t in enumerate(fam.structures):
        c = 0.0
        for x in set(t.u1.mass) | set(t.u0.mass):
            m1 = p.mu * t.u1.mass.get(x, 0.0)
            m0 = (1 - p.mu) * t.u0.mass.get(x, 0.0)
            c += m1 * m0 / (m1 + m0)
        bench[i] = c
    return w1, w0, bench


def _values_from_anchors(n: int, z: np.ndarray) -> np.ndarray:
    values = np.interp(np.arange(n + 1), [1, n - 1], [z[1], z[2]])
    values[0] = z[0]
    values[n] = z[3]
    return values


def solve_l2_nonadversarial(p: Params, epsilon: float) -> SolverResult:
    """Minimize the worst-case squared-error regret at k=0.

    Returns the anchored aggregator, its exact worst-case regret over the
    extreme family, the certified primal-dual gap (always driven below the
    requested epsilon), and the iteration count spent.
    """
    if epsilon <= 0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    if p.k != 0:
        raise DomainError("solver handles the k=0 setting only")
    fam = enumerate_extreme(p)
    w1, w0, bench = _family_arrays(fam)
    mu = p.mu

    def regrets(z: np.ndarray) -> np.ndarray:
        return (mu * (w1 @ (1 - z) ** 2)
                + (1 - mu) * (w0 @ z ** 2) - bench)

    def primal(z: np.ndarray) -> float:
        return float(regrets(z).max())

    iterations = 0

    # stage 1: coarse grid localization (vectorized over all grid points)
    axis = np.linspace(0.0, 1.0, 11)
    grid = np.stack(np.meshgrid(axis, axis, axis, axis,
                                indexing="ij"), axis=-1).reshape(-1, 4)
    vals = (mu * ((1 - grid) ** 2 @ w1.T)
            + (1 - mu) * (grid ** 2 @ w0.T) - bench).max(axis=1)
    z = grid[int(np.argmin(vals))]
    iterations += len(grid)

    # stage 2: epigraph polish (max of convex quadratics; SLSQP suffices)
    def polish(z0: np.ndarray) -> np.ndarray:
        x0 = np.concatenate([z0, [primal(z0)]])
        res = minimize(
            lambda v: v[4], x0, method="SLSQP",
            jac=lambda v: np.array([0, 0, 0, 0, 1.0]),
            constraints=[{"type": "ineq",
                          "fun": lambda v: v[4] - regrets(v[:4])}],
            bounds=[(0, 1)] * 4 + [(0, None)],
            options={"maxiter": 500, "ftol": 1e-16})
        return res.x[:4], res.nit

    z, nit = polish(z)
    iterations += nit

    # stage 3: dual certificate — best mixture of structures
    def dual(lam: np.ndarray) -> float:
        pw = mu * (lam @ w1)
        qw = (1 - mu) * (lam @ w0)
        s = pw + qw
        good = s > 1e-300
        return float((pw[good] * qw[good] / s[good]).sum() - lam @ bench)

    def certify(z: np.ndarray) -> tuple[float, int]:
        g = regrets(z)
        lam0 = (g > g.max() - 1e-9).astype(float)
        lam0 /= lam0.sum()
        res = minimize(
            lambda l: -dual(l), lam0, method="SLSQP",
            constraints=[{"type": "eq", "fun": lambda l: l.sum() - 1.0}],
            bounds=[(0, 1)] * len(g),
            options={"maxiter": 300, "ftol": 1e-16})
        return max(-res.fun, dual(lam0)), res.nit

    best_dual, nit = certify(z)
    iterations += nit
    gap = primal(z) - best_dual

    # refine from perturbed restarts if the certificate is not tight enough
    rng = np.random.default_rng(0)
    tries = 0
    while gap > epsilon and tries < 20:
        z0 = np.clip(z + rng.normal(scale=0.05, size=4), 0, 1)
        z_new, nit1 = polish(z0)
        if primal(z_new) < primal(z):
            z = z_new
        d_new, nit2 = certify(z)
        best_dual = max(best_dual, d_new)
        gap = primal(z) - best_dual
        iterations += nit1 + nit2
        tries += 1
    if gap > epsilon:
        raise DomainError(
            f"could not certify epsilon={epsilon}; achieved gap {gap}")

    values = _values_from_anchors(p.n, z)
    return SolverResult(Aggregator(values), primal(z), max(gap, 0.0),
                        iterations)


def regret_sequence(mu: float, a: float, b: float,
                    n_range: range, epsilon: float
                    ) -> list[tuple[int, float]]:
    """Solver regret for each n in the range; the gaps R(n+1)-R(n) shrink
    like 1/(n(n+1)) up to a constant, which tests fit empirically."""
    out = []
    for n in n_range:
        p = Params(n, 0, mu, a, b)
        out.append((n, solve_l2_nonadversarial(p, epsilon).regret))
    return out
