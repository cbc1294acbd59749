"""Shared vocabulary for robust vote aggregation.

Problem instances consist of a prior over a binary world state, signal
accuracies for truthful experts, and a count of adversarial experts.  This
module holds the instance types (parameters, conditional report-count
distributions, adversary strategies, aggregators), the two loss functions,
the omniscient benchmark, and the regret functional that every other module
builds on.

Conventions: the world state is 0 or 1; each expert reports L or H; an
aggregator maps the total H-count to a forecast in [0, 1].  Distributions
over counts are finite maps from integer support points to probabilities.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple

import numpy as np

PROB_TOL = 1e-12  # probability sums
MEAN_TOL = 1e-9   # feasibility mean constraints (more arithmetic accumulates)


class DomainError(ValueError):
    """An input lies outside the documented domain of an operation."""


class ResourceError(RuntimeError):
    """An exhaustive computation would exceed its configured budget."""


class LossKind(enum.Enum):
    L1 = "l1"
    L2 = "l2"


def loss(kind: LossKind, y, omega):
    """Loss of forecast y in [0,1] against realized state omega.

    L1 is absolute error |y - omega|, L2 is squared error (y - omega)^2.
    Accepts scalars or numpy arrays for y.
    """
    y = np.asarray(y, dtype=float)
    if np.any(y < -PROB_TOL) or np.any(y > 1.0 + PROB_TOL):
        raise DomainError(f"forecast outside [0,1]: {y}")
    err = np.abs(y - omega)
    out = err if kind is LossKind.L1 else err * err
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class Params:
    """Instance parameters: n experts, k of them adversarial, prior mu,
    and signal accuracies a = Pr[H | state 1], b = Pr[H | state 0]."""

    n: int
    k: int
    mu: float
    a: float
    b: float

    def __post_init__(self) -> None:
        if self.n <= 0 or self.k < 0 or 2 * self.k >= self.n:
            raise DomainError(
                f"need 0 <= k and 2k < n, got n={self.n}, k={self.k}")
        if not 0.0 < self.mu < 1.0:
            raise DomainError(f"mu must lie in (0,1), got {self.mu}")
        if not (0.0 < self.b < self.a < 1.0):
            raise DomainError(
                f"need 0 < b < a < 1, got a={self.a}, b={self.b}")

    @property
    def gamma(self) -> float:
        return self.k / self.n

    @property
    def p1(self) -> float:
        """Posterior Pr[state 1 | single H signal]."""
        return self.mu * self.a / (self.mu * self.a + (1 - self.mu) * self.b)

    @property
    def p0(self) -> float:
        """Posterior Pr[state 1 | single L signal]."""
        num = self.mu * (1 - self.a)
        return num / (num + (1 - self.mu) * (1 - self.b))

    def posteriors_separated(self) -> bool:
        """Whether a single signal moves the posterior across 1/2.

        Callers that rely on this assumption assert it explicitly; it is not
        enforced at construction because the unknown-parameter results range
        over all (a, b).
        """
        return self.p0 < 0.5 < self.p1


@dataclass(frozen=True)
class CondDist:
    """Distribution of a report count over {0..domain_max}.

    ``mass`` maps support points to probabilities; only positive-mass points
    are stored.
    """

    domain_max: int
    mass: Mapping[int, float]

    def __post_init__(self) -> None:
        total = 0.0
        for x, p in self.mass.items():
            if not 0 <= x <= self.domain_max:
                raise DomainError(
                    f"support point {x} outside 0..{self.domain_max}")
            if not 0.0 < p <= 1.0 + PROB_TOL:
                raise DomainError(f"mass at {x} must be in (0,1], got {p}")
            total += p
        if abs(total - 1.0) > PROB_TOL:
            raise DomainError(f"mass sums to {total!r}, expected 1")

    @classmethod
    def from_array(cls, arr: Iterable[float], domain_max: int | None = None,
                   clip_tol: float = 0.0) -> "CondDist":
        arr = np.asarray(list(arr), dtype=float)
        if domain_max is None:
            domain_max = len(arr) - 1
        mass = {}
        for x, p in enumerate(arr):
            if p > clip_tol:
                mass[int(x)] = float(p)
        return cls(domain_max, mass)

    def to_array(self, length: int | None = None) -> np.ndarray:
        out = np.zeros((length or self.domain_max + 1), dtype=float)
        for x, p in self.mass.items():
            out[x] = p
        return out

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self.mass))

    @property
    def mean(self) -> float:
        return float(sum(x * p for x, p in self.mass.items()))


@dataclass(frozen=True)
class InfoStructure:
    """A feasible instance: truthful H-count distributions for both states.

    Feasibility (the only constraint the adversary-free counts must obey) is
    that the means equal (n-k)a and (n-k)b respectively.
    """

    params: Params
    u1: CondDist
    u0: CondDist

    def __post_init__(self) -> None:
        m = self.params.n - self.params.k
        for u in (self.u1, self.u0):
            if u.domain_max != m:
                raise DomainError(
                    f"u domain_max {u.domain_max} != n-k = {m}")
        if abs(self.u1.mean - m * self.params.a) > MEAN_TOL:
            raise DomainError(
                f"mean(u1)={self.u1.mean} != (n-k)a={m * self.params.a}")
        if abs(self.u0.mean - m * self.params.b) > MEAN_TOL:
            raise DomainError(
                f"mean(u0)={self.u0.mean} != (n-k)b={m * self.params.b}")


@dataclass(frozen=True)
class AdversaryStrategy:
    """Randomized adversary play: for each (state, truthful H-count) a
    distribution over how many of the k adversaries report H.

    ``table`` has shape (2, n-k+1, k+1); table[w, x] is the distribution of
    the added H-count when the state is w and the truthful count is x.
    """

    table: np.ndarray

    def __post_init__(self) -> None:
        t = np.asarray(self.table, dtype=float)
        if t.ndim != 3 or t.shape[0] != 2:
            raise DomainError(f"strategy table has shape {t.shape}")
        if np.any(t < -PROB_TOL):
            raise DomainError("negative strategy probability")
        if np.any(np.abs(t.sum(axis=2) - 1.0) > PROB_TOL):
            raise DomainError("strategy rows must sum to 1")
        object.__setattr__(self, "table", t)

    @property
    def k(self) -> int:
        return self.table.shape[2] - 1

    @property
    def pure(self) -> bool:
        return bool(np.all(np.max(self.table, axis=2) > 1.0 - PROB_TOL))

    @classmethod
    def none(cls, m: int) -> "AdversaryStrategy":
        """No adversaries (k=0): always add zero H-reports."""
        return cls(np.ones((2, m + 1, 1)))

    @classmethod
    def constant(cls, m: int, k: int, j1: int, j0: int) -> "AdversaryStrategy":
        """Pure strategy adding j1 H's under state 1 and j0 under state 0."""
        t = np.zeros((2, m + 1, k + 1))
        t[1, :, j1] = 1.0
        t[0, :, j0] = 1.0
        return cls(t)

    @classmethod
    def from_pure_table(cls, m: int, k: int, js: np.ndarray) -> "AdversaryStrategy":
        """Pure strategy; js has shape (2, m+1) giving the added count."""
        t = np.zeros((2, m + 1, k + 1))
        for w in (0, 1):
            for x in range(m + 1):
                t[w, x, int(js[w, x])] = 1.0
        return cls(t)


@dataclass(frozen=True)
class Aggregator:
    """Forecast rule on the total H-count: values[x] = f(x) for x in 0..n.

    ``knots`` optionally records a piecewise-linear description; when given,
    the tabulated values must match linear interpolation of the knots.
    """

    values: np.ndarray
    knots: tuple[tuple[int, float], ...] | None = None

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float)
        if np.any(v < -PROB_TOL) or np.any(v > 1.0 + PROB_TOL):
            raise DomainError("aggregator values must lie in [0,1]")
        object.__setattr__(self, "values", v)
        if self.knots is not None:
            kx = [x for x, _ in self.knots]
            ky = [y for _, y in self.knots]
            interp = np.interp(np.arange(len(v)), kx, ky)
            if np.max(np.abs(interp - v)) > 1e-12:
                raise DomainError("values disagree with knot interpolation")

    @property
    def n(self) -> int:
        return len(self.values) - 1

    def __call__(self, x):
        return self.values[np.asarray(x, dtype=int)]

    @classmethod
    def from_knots(cls, n: int, knots: Iterable[tuple[int, float]]) -> "Aggregator":
        knots = tuple(sorted((int(x), float(y)) for x, y in knots))
        kx = [x for x, _ in knots]
        ky = [y for _, y in knots]
        values = np.interp(np.arange(n + 1), kx, ky)
        return cls(values, knots)

    @classmethod
    def constant(cls, n: int, c: float) -> "Aggregator":
        return cls(np.full(n + 1, float(c)), ((0, float(c)), (n, float(c))))

    def is_monotone(self, tol: float = PROB_TOL) -> bool:
        return bool(np.all(np.diff(self.values) >= -tol))


def induced_conditionals(theta: InfoStructure,
                         sigma: AdversaryStrategy) -> tuple[CondDist, CondDist]:
    """Distributions of the *total* H-count under each state.

    The truthful count x gets shifted by however many adversaries report H:
    v_w(x + j) accumulates u_w(x) * sigma[w, x, j].
    """
    p = theta.params
    m, n = p.n - p.k, p.n
    if sigma.k != p.k:
        raise DomainError(f"strategy is for k={sigma.k}, params have k={p.k}")
    out = []
    for w, u in ((1, theta.u1), (0, theta.u0)):
        v = np.zeros(n + 1)
        for x, mass in u.mass.items():
            v[x:x + p.k + 1] += mass * sigma.table[w, x]
        out.append(CondDist.from_array(v, n))
    v1, v0 = out
    return v1, v0


def expected_loss(f: Aggregator, v1: CondDist, v0: CondDist, mu: float,
                  kind: LossKind) -> float:
    """mu * E_{x~v1}[loss(f(x),1)] + (1-mu) * E_{x~v0}[loss(f(x),0)]."""
    acc = 0.0
    for x, p in v1.mass.items():
        acc += mu * p * loss(kind, f.values[x], 1)
    for x, p in v0.mass.items():
        acc += (1 - mu) * p * loss(kind, f.values[x], 0)
    return acc


class BenchmarkResult(NamedTuple):
    opt: dict[int, float]
    expected_loss: float


def benchmark(theta: InfoStructure, kind: LossKind) -> BenchmarkResult:
    """Omniscient forecast from the truthful counts alone, and its loss.

    Under L1 the best forecast is the more likely state (maximum likelihood,
    ties reported as 1); under L2 it is the posterior probability of state 1.
    The map is only defined at counts with positive mass under some state.
    """
    p = theta.params
    opt: dict[int, float] = {}
    total = 0.0
    support = sorted(set(theta.u1.mass) | set(theta.u0.mass))
    for x in support:
        w1 = p.mu * theta.u1.mass.get(x, 0.0)
        w0 = (1 - p.mu) * theta.u0.mass.get(x, 0.0)
        if kind is LossKind.L1:
            opt[x] = 1.0 if w1 >= w0 else 0.0
            total += min(w1, w0)
        else:
            opt[x] = w1 / (w1 + w0)
            total += w1 * w0 / (w1 + w0)
    return BenchmarkResult(opt, total)


def regret(f: Aggregator, theta: InfoStructure, sigma: AdversaryStrategy,
           kind: LossKind) -> float:
    """Expected loss of f under (theta, sigma) minus the benchmark loss."""
    v1, v0 = induced_conditionals(theta, sigma)
    return (expected_loss(f, v1, v0, theta.params.mu, kind)
            - benchmark(theta, kind).expected_loss)
