"""Closed-form optimal aggregators and their guaranteed regrets.

Two regimes have exact solutions when some experts are adversarial: under
absolute-error loss the optimum is a truncated mean (ignore the k most
extreme reports on each side, average the rest), and under squared-error
loss it is a hard sigmoid whose plateau values are posterior probabilities
of an explicit worst-case instance.  Both come with validity thresholds on
the adversarial ratio gamma = k/n and with exact worst-case regret values.

Also included: the optimal rules when nothing (or only the prior) is known
about the signal distribution, which are constant forecasts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Aggregator, DomainError, LossKind, Params


@dataclass(frozen=True)
class ClosedFormResult:
    """An aggregator with its guaranteed worst-case regret.

    ``valid`` records whether gamma met the threshold; when it did not, the
    aggregator is still populated for experimentation but ``regret`` is None
    because no optimality claim holds.
    """

    aggregator: Aggregator
    regret: float | None
    valid: bool
    threshold: float


def k_ignorance_dictator(n: int, k: int) -> Aggregator:
    """Truncated-mean rule: 0 up to k, 1 from n-k, linear in between."""
    if 2 * k >= n or k < 0:
        raise DomainError(f"need 0 <= 2k < n, got n={n}, k={k}")
    return Aggregator.from_knots(n, [(0, 0.0), (k, 0.0), (n - k, 1.0), (n, 1.0)])


def l1_threshold(p: Params) -> float:
    """Largest adversarial ratio for which the truncated mean is optimal
    under absolute-error loss."""
    mu, a, b = p.mu, p.a, p.b
    t1 = (a * mu - (1 - mu) * b) / (mu + a * mu - (1 - mu) * b)
    t2 = a / (1 + a)
    t3 = (1 - b) / (2 - b)
    return min(t1, t2, t3)


def l1_adversarial_regret(p: Params) -> float:
    """Worst-case regret of the truncated mean under absolute-error loss.

    Equals (1-gamma) * (mu(1-a) + (1-mu)b) / (1-2gamma): the mass each state
    leaves on the wrong side of the linear ramp once the adversaries push the
    report count as far as they can.  Increasing in gamma for every prior.
    """
    g = p.gamma
    return (1 - g) * (p.mu * (1 - p.a) + (1 - p.mu) * p.b) / (1 - 2 * g)


def l1_optimal(p: Params) -> ClosedFormResult:
    """Optimal absolute-error aggregator with its regret, when gamma is
    within threshold; flagged invalid (regret withheld) otherwise."""
    thresh = l1_threshold(p)
    f = k_ignorance_dictator(p.n, p.k)
    if p.gamma <= thresh:
        return ClosedFormResult(f, l1_adversarial_regret(p), True, thresh)
    return ClosedFormResult(f, None, False, thresh)


def l2_threshold(p: Params) -> float:
    """Largest adversarial ratio for the squared-error closed form
    (exclusive bound)."""
    return min(p.a / (1 + p.a), (1 - p.b) / (2 - p.b))


def _l2_plateaus(p: Params) -> tuple[float, float]:
    g, mu, a, b = p.gamma, p.mu, p.a, p.b
    lo_num = mu * (1 - g) * (1 - a)
    f_lo = lo_num / (lo_num + (1 - mu) * (1 - 2 * g - (1 - g) * b))
    hi_num = mu * ((1 - g) * a - g)
    f_hi = hi_num / (hi_num + (1 - mu) * (1 - g) * b)
    return f_lo, f_hi


def l2_adversarial_aggregator(p: Params) -> Aggregator:
    """Hard sigmoid, optimal under squared-error loss with adversaries.

    Constant f_lo for counts at most k, constant f_hi for counts at least
    n-k, linear between; f_lo and f_hi are the Bayes posteriors of the
    worst-case instance at those two counts.  Requires 0 < gamma strictly
    inside the threshold (the non-adversarial optimum is a different shape
    and is handled by the solver, not by taking gamma to 0 here).
    """
    if not 0 < p.gamma < l2_threshold(p):
        raise DomainError(
            f"gamma={p.gamma} outside (0, {l2_threshold(p)})")
    f_lo, f_hi = _l2_plateaus(p)
    return Aggregator.from_knots(
        p.n, [(0, f_lo), (p.k, f_lo), (p.n - p.k, f_hi), (p.n, f_hi)])


def l2_adversarial_regret(p: Params) -> float:
    """Worst-case regret of the hard sigmoid under squared-error loss.

    Closed rational expression in (mu, a, b, gamma); cross-checked in tests
    against the directly computed regret of the aggregator on the explicit
    worst-case instance.
    """
    if not 0 <= p.gamma < l2_threshold(p):
        raise DomainError(
            f"gamma={p.gamma} outside [0, {l2_threshold(p)})")
    g, mu, a, b = p.gamma, p.mu, p.a, p.b
    num = (mu - 1) * mu * (g - 1) * (
        g * (-a * a * mu + (b - 2) * b * (mu - 1) + mu)
        + (mu * (a - b) * (a + b - 1) + (b - 1) * b))
    den = ((-(a + 1) * g * mu + a * mu + b * (mu - 1) * (g - 1))
           * (g * (-(a + 1) * mu + b * (mu - 1) + 2)
              + (a * mu - b * mu + b - 1)))
    if abs(den) < 1e-15:
        raise DomainError(
            f"degenerate denominator at mu={mu}, a={a}, b={b}, gamma={g}")
    return num / den


def uninformed_optimal(knowledge: str, mu: float | None = None,
                       n: int = 1, kind: LossKind = LossKind.L2
                       ) -> tuple[Aggregator, float]:
    """Best constant forecast when the signal distribution is unknown.

    Knowing nothing, guess 1/2 (regret 1/4); knowing only the prior, guess
    the prior (regret mu(1-mu)).  Squared-error loss only.
    """
    if kind is not LossKind.L2:
        raise DomainError("uninformed optima are stated for squared error only")
    if knowledge == "nothing":
        return Aggregator.constant(n, 0.5), 0.25
    if knowledge == "prior_only":
        if mu is None or not 0 <= mu <= 1:
            raise DomainError("prior_only requires mu in [0,1]")
        return Aggregator.constant(n, mu), mu * (1 - mu)
    raise DomainError(f"unknown knowledge level {knowledge!r}")
