"""Solver for the no-adversary squared-error optimum.

Covers the candidate-structure enumeration, the certified minimizer, the
known figure values at n=10, and the limits of the anchor-support
reduction at small n (where the constant-size family is a strict lower
bound; see the regression pin below).
"""

import math

import numpy as np
import pytest

from robustagg import (
    AdversaryStrategy,
    Aggregator,
    DomainError,
    LossKind,
    Params,
    brute_force_max_regret,
    brute_force_minimax,
    enumerate_extreme,
    regret,
    regret_sequence,
    solve_l2_nonadversarial,
)
from robustagg.solver import _values_from_anchors

P10 = Params(10, 0, 0.5, 0.8, 0.1)

# figure anchor values at n=10, mu=0.5, a=0.8, b=0.1
PINNED_ANCHORS = [0.11814544, 0.23529412, 0.80154768, 0.96776412]


def family_max(z, p, fam):
    f = Aggregator(_values_from_anchors(p.n, z))
    none = AdversaryStrategy.none(p.n)
    return max(regret(f, t, none, LossKind.L2) for t in fam.structures)


# ----------------------------------------------------------- enumeration

def test_enumerate_family_composition():
    fam = enumerate_extreme(P10)
    assert len(fam.structures) == 12
    u1_supports = {t.u1.support for t in fam.structures}
    u0_supports = {t.u0.support for t in fam.structures}
    assert u1_supports == {(0, 9), (0, 10), (1, 9), (1, 10)}
    # mean nb = 1 sits exactly on an anchor: the point mass replaces
    # every pair through 1, leaving only supports spanning across it
    assert u0_supports == {(1,), (0, 9), (0, 10)}


def test_enumerate_probabilities():
    fam = enumerate_extreme(P10)
    for t in fam.structures:
        if t.u1.support == (1, 9):
            assert abs(t.u1.mass[9] - 0.875) < 1e-12
        assert all(0 < q <= 1 for q in t.u1.mass.values())
        assert all(0 < q <= 1 for q in t.u0.mass.values())


def test_enumerate_rejects_bad_inputs():
    with pytest.raises(DomainError):
        enumerate_extreme(Params(10, 2, 0.5, 0.8, 0.1))
    with pytest.raises(DomainError):
        enumerate_extreme(Params(2, 0, 0.5, 0.8, 0.1))


# ----------------------------------------------------------------- solve

def test_solve_pinned_instance():
    res = solve_l2_nonadversarial(P10, 1e-3)
    got = [res.aggregator.values[x] for x in (0, 1, 9, 10)]
    assert max(abs(g - w) for g, w in zip(got, PINNED_ANCHORS)) < 5e-3
    assert abs(res.regret - 0.1066594074004602) < 1e-6
    assert res.epsilon <= 1e-3
    assert res.aggregator.is_monotone()
    # interior counts interpolate the two inner anchors
    v = res.aggregator.values
    assert abs(v[5] - (v[1] + v[9]) / 2) < 1e-12


def test_solve_symmetric_signals():
    res = solve_l2_nonadversarial(Params(10, 0, 0.5, 0.9, 0.1), 1e-6)
    v = res.aggregator.values
    assert np.max(np.abs(v + v[::-1] - 1.0)) < 5e-3


def test_solve_rejects_bad_inputs():
    with pytest.raises(DomainError):
        solve_l2_nonadversarial(P10, 0.0)
    with pytest.raises(DomainError):
        solve_l2_nonadversarial(P10, -1e-3)
    with pytest.raises(DomainError):
        solve_l2_nonadversarial(Params(10, 1, 0.5, 0.8, 0.1), 1e-3)


def test_family_objective_is_convex():
    p = Params(6, 0, 0.5, 0.8, 0.1)
    fam = enumerate_extreme(p)
    rng = np.random.default_rng(2)
    for _ in range(20):
        z1, z2 = rng.uniform(size=4), rng.uniform(size=4)
        t = rng.uniform()
        lhs = family_max(t * z1 + (1 - t) * z2, p, fam)
        rhs = t * family_max(z1, p, fam) + (1 - t) * family_max(z2, p, fam)
        assert lhs <= rhs + 1e-12


# ----------------------------------------------- reduction soundness

def test_family_lower_bounds_full_enumeration():
    for n in range(4, 9):
        p = Params(n, 0, 0.5, 0.8, 0.1)
        res = solve_l2_nonadversarial(p, 1e-6)
        full, _ = brute_force_max_regret(res.aggregator, p, LossKind.L2)
        assert full >= res.regret - 1e-12


def test_reduction_exact_at_pinned_n():
    # equality at the optimum plus the lower-bound property prove the
    # n=10 answer optimal over every two-point structure, not just the
    # anchored family
    res = solve_l2_nonadversarial(P10, 1e-6)
    full, wc = brute_force_max_regret(res.aggregator, p := P10, LossKind.L2)
    assert abs(full - res.regret) < 1e-6
    assert set(wc.theta.u1.support) <= {0, 1, p.n - 1, p.n}
    assert set(wc.theta.u0.support) <= {0, 1, p.n - 1, p.n}


def test_reduction_strict_gap_at_small_n():
    # at n=4 a structure with truthful supports {2,4}/{0,1} (disjoint, zero
    # benchmark, interior point) beats every anchored structure against the
    # family-optimal rule; the constant-size family is only a lower bound
    # here, becoming exact by n=9
    p = Params(4, 0, 0.5, 0.8, 0.1)
    res = solve_l2_nonadversarial(p, 1e-6)
    full, wc = brute_force_max_regret(res.aggregator, p, LossKind.L2)
    assert full - res.regret > 1e-3
    assert not set(wc.theta.u1.support) <= {0, 1, 3, 4}


def test_solver_agrees_with_grid_minimax_small_n():
    p = Params(4, 0, 0.5, 0.8, 0.1)
    res = solve_l2_nonadversarial(p, 1e-9)
    _, val = brute_force_minimax(p, LossKind.L2, delta=0.02)
    # the family value can only undershoot the grid's exact worst case
    assert res.regret <= val + 1e-9
    assert val - res.regret < 0.01


# --------------------------------------------------------------- sequence

def test_regret_sequence_prefix():
    seq = regret_sequence(0.5, 0.8, 0.1, range(4, 9), 1e-6)
    ns = [n for n, _ in seq]
    vals = [r for _, r in seq]
    assert ns == [4, 5, 6, 7, 8]
    pinned = [0.072322982832, 0.075629542049, 0.078134727952,
              0.082359585695, 0.087248467020]
    assert max(abs(v - w) for v, w in zip(vals, pinned)) < 1e-4
    # increments stay nonnegative up to the certificate tolerance
    assert all(v2 >= v1 - 2e-6 for v1, v2 in zip(vals, vals[1:]))
