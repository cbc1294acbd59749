"""Worst-case instance constructions and their certified properties.

The two-point confusable pairs must be feasible, have the stated supports,
zero benchmark loss (off the degenerate case), and realize the closed-form
regret values exactly.
"""

import json
import math

import numpy as np
import pytest

from robustagg import (
    CondDist,
    DomainError,
    LossKind,
    Params,
    check_feasible,
    clamp_to_interior,
    k_ignorance_dictator,
    l1_adversarial_regret,
    l2_adversarial_aggregator,
    regret,
    worst_structure_l1,
    worst_structure_l2,
)
from robustagg.core import Aggregator, induced_conditionals

from helpers import random_monotone_aggregator

P_DEFAULT = Params(10, 2, 0.5, 0.8, 0.1)


# ------------------------------------------------------------ feasibility

def test_check_feasible_two_point():
    u1 = CondDist(8, {2: 4 / 15, 8: 11 / 15})     # mean 6.4 = 8 * 0.8
    u0 = CondDist(8, {0: 13 / 15, 6: 2 / 15})     # mean 0.8 = 8 * 0.1
    assert check_feasible(u1, u0, P_DEFAULT)


def test_check_feasible_rejects_wrong_mean():
    u1 = CondDist(8, {2: 4 / 15, 8: 11 / 15})
    u0 = CondDist(8, {0: 0.8, 6: 0.2})            # mean 1.2, not 0.8
    assert not check_feasible(u1, u0, P_DEFAULT)


def test_check_feasible_singletons():
    p = Params(6, 1, 0.5, 0.8, 0.2)               # 5a = 4, 5b = 1: integers
    assert check_feasible(CondDist(5, {4: 1.0}), CondDist(5, {1: 1.0}), p)


# -------------------------------------------------------- squared error

def test_worst_l2_supports_and_benchmark():
    wc = worst_structure_l2(P_DEFAULT)
    assert wc.theta.u1.support == (2, 8)
    assert wc.theta.u0.support == (0, 6)
    assert wc.benchmark_loss == 0.0
    assert not wc.degenerate
    assert check_feasible(wc.theta.u1, wc.theta.u0, P_DEFAULT)
    v1, v0 = induced_conditionals(wc.theta, wc.sigma)
    assert v1.support == (2, 8) and v0.support == (2, 8)


def test_worst_l2_observed_posterior():
    wc = worst_structure_l2(P_DEFAULT)
    v1, v0 = induced_conditionals(wc.theta, wc.sigma)
    post2 = 0.5 * v1.mass[2] / (0.5 * v1.mass[2] + 0.5 * v0.mass[2])
    assert abs(post2 - 0.235294117647059) < 1e-12


def test_worst_l2_degenerate_case():
    # n = 3k: truthful supports meet at one count, benchmark is positive,
    # but the observed posteriors still equal the sigmoid plateaus
    p = Params(3, 1, 0.5, 0.8, 0.1)
    wc = worst_structure_l2(p)
    assert wc.degenerate
    assert wc.benchmark_loss > 0
    f = l2_adversarial_aggregator(p)
    v1, v0 = induced_conditionals(wc.theta, wc.sigma)
    for x in (1, 2):
        w1, w0 = 0.5 * v1.mass[x], 0.5 * v0.mass[x]
        assert abs(f.values[x] - w1 / (w1 + w0)) < 1e-12


def test_worst_l2_rejects_no_adversaries():
    with pytest.raises(DomainError):
        worst_structure_l2(Params(10, 0, 0.5, 0.8, 0.1))


def test_worst_case_json():
    wc = worst_structure_l2(P_DEFAULT)
    blob = json.loads(wc.to_json())
    assert blob["params"]["n"] == 10
    assert blob["benchmark_loss"] == 0.0
    assert set(blob["u1"]) == {"2", "8"}


# -------------------------------------------------------- absolute error

def test_worst_l1_extreme_pair():
    wc = worst_structure_l1(P_DEFAULT, (2, 8, 2, 8))
    assert wc.benchmark_loss == 0.0
    assert wc.theta.u1.support == (2, 8)
    assert wc.theta.u0.support == (0, 6)
    f = k_ignorance_dictator(10, 2)
    r = regret(f, wc.theta, wc.sigma, LossKind.L1)
    assert math.isclose(r, l1_adversarial_regret(P_DEFAULT), abs_tol=1e-9)


def test_worst_l1_anchor_validation():
    with pytest.raises(DomainError):   # truthful supports collide: {2,8,2,6}
        worst_structure_l1(P_DEFAULT, (2, 8, 4, 8))
    with pytest.raises(DomainError):   # 7 > 6.4: state-1 mean not straddled
        worst_structure_l1(P_DEFAULT, (7, 8, 2, 8))
    with pytest.raises(DomainError):   # anchor below k
        worst_structure_l1(P_DEFAULT, (1, 8, 2, 8))
    with pytest.raises(DomainError):   # unordered
        worst_structure_l1(P_DEFAULT, (8, 2, 2, 8))


def test_worst_l1_any_anchored_monotone_rule():
    # on the extreme pair the observed counts are only k and n-k, so every
    # monotone rule with f(k)=0 and f(n-k)=1 suffers the same regret
    rng = np.random.default_rng(5)
    for p in [P_DEFAULT, Params(12, 3, 0.35, 0.85, 0.2),
              Params(9, 2, 0.6, 0.7, 0.25)]:
        wc = worst_structure_l1(p, (p.k, p.n - p.k, p.k, p.n - p.k))
        want = l1_adversarial_regret(p)
        for _ in range(5):
            v = np.sort(rng.uniform(size=p.n + 1))
            v[: p.k + 1] = 0.0
            v[p.n - p.k:] = 1.0
            r = regret(Aggregator(v), wc.theta, wc.sigma, LossKind.L1)
            assert math.isclose(r, want, abs_tol=1e-9)


def test_worst_l1_linear_ramp_any_anchors():
    # the ramp's loss is linear in the observed count, so only the means
    # matter and every feasible anchor placement realizes the same regret
    p = P_DEFAULT
    f = k_ignorance_dictator(p.n, p.k)
    want = l1_adversarial_regret(p)
    for x in [(2, 8, 2, 8), (3, 7, 2, 8), (2, 7, 2, 8), (6, 7, 2, 3)]:
        wc = worst_structure_l1(p, x)
        assert wc.benchmark_loss == 0.0
        r = regret(f, wc.theta, wc.sigma, LossKind.L1)
        assert math.isclose(r, want, abs_tol=1e-9)


# ------------------------------------------------------------ clamping

def test_clamp_values():
    f = k_ignorance_dictator(10, 0)
    g = clamp_to_interior(f, P_DEFAULT)
    assert np.allclose(g.values[:3], 0.2)
    assert np.allclose(g.values[8:], 0.8)
    assert np.allclose(g.values[3:8], f.values[3:8])
    assert g.is_monotone()


def test_clamp_fixes_constant():
    f = Aggregator.constant(10, 0.4)
    g = clamp_to_interior(f, P_DEFAULT)
    assert np.allclose(g.values, 0.4)


def test_clamp_preserves_worst_case_regret():
    # observed counts on the worst instance stay inside [k, n-k]
    rng = np.random.default_rng(9)
    wc = worst_structure_l2(P_DEFAULT)
    for _ in range(10):
        f = random_monotone_aggregator(rng, 10)
        g = clamp_to_interior(f, P_DEFAULT)
        r_f = regret(f, wc.theta, wc.sigma, LossKind.L2)
        r_g = regret(g, wc.theta, wc.sigma, LossKind.L2)
        assert math.isclose(r_f, r_g, abs_tol=1e-12)
