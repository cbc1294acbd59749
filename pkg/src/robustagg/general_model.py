"""Sensitivity analysis for aggregation over arbitrary report spaces.

Beyond counted binary votes, experts may emit arbitrary report values and
the benchmark an arbitrary forecast table.  What governs robustness is the
sensitive parameter S: the largest benchmark-forecast change k adversarial
reports can induce across the family.  The squared-error minimax regret is
sandwiched between (alpha/4) S^2 and S^2, where alpha is the smallest
positive report probability.

Structures are finite tables here: each row gives a structure id, a
truthful report multiset, the benchmark forecast at that multiset, and its
probability.  Report multisets are sorted tuples; adversaries append k
extra reports (pads).
"""

from __future__ import annotations

import itertools
import json
import math
from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np
from scipy.optimize import minimize

from .core import DomainError

Multiset = tuple[Hashable, ...]


def _as_multiset(x: Iterable[Hashable]) -> Multiset:
    return tuple(sorted(x, key=repr))


@dataclass(frozen=True)
class ReportHistogram:
    counts: Mapping[Hashable, int]
    total: int

    def __post_init__(self) -> None:
        if any(c < 0 for c in self.counts.values()):
            raise DomainError("negative histogram count")
        if sum(self.counts.values()) != self.total:
            raise DomainError("histogram counts do not sum to total")

    @classmethod
    def of(cls, x: Iterable[Hashable]) -> "ReportHistogram":
        c = Counter(x)
        return cls(dict(c), sum(c.values()))


def report_distance(x1: Iterable[Hashable], x2: Iterable[Hashable]) -> int:
    """Half the L1 distance between report histograms: the number of
    reports that must change to turn one multiset into the other."""
    h1, h2 = Counter(x1), Counter(x2)
    if sum(h1.values()) != sum(h2.values()):
        raise DomainError("report multisets must have equal totals")
    return sum((h1 - h2).values())


def confusion_padding(x1: Iterable[Hashable], x2: Iterable[Hashable],
                      k: int) -> tuple[Multiset, Multiset] | None:
    """Pads of size k that make the two padded multisets identical, when
    k reports suffice (that is, when the distance is at most k)."""
    h1, h2 = Counter(x1), Counter(x2)
    d = report_distance(x1, x2)
    if d > k:
        return None
    target = h1 | h2  # pointwise max
    pad1 = list((target - h1).elements())
    pad2 = list((target - h2).elements())
    filler_pool = sorted(target, key=repr) or ["pad"]
    filler = filler_pool[0]
    pad1 += [filler] * (k - len(pad1))
    pad2 += [filler] * (k - len(pad2))
    return _as_multiset(pad1), _as_multiset(pad2)


@dataclass(frozen=True)
class TableEntry:
    structure: str
    x: Multiset
    opt: float
    p: float


@dataclass(frozen=True)
class OptTable:
    """Finite family of structures given by their benchmark tables."""

    entries: tuple[TableEntry, ...]

    def __post_init__(self) -> None:
        if not self.entries:
            raise DomainError("empty table")
        sizes = {len(e.x) for e in self.entries}
        if len(sizes) != 1:
            raise DomainError("all truthful multisets must have equal size")
        totals: dict[str, float] = {}
        seen = set()
        for e in self.entries:
            if not 0.0 <= e.opt <= 1.0:
                raise DomainError(f"opt value {e.opt} outside [0,1]")
            if e.p < 0:
                raise DomainError("negative probability")
            if (e.structure, e.x) in seen:
                raise DomainError(
                    f"duplicate event {e.x} in structure {e.structure}")
            seen.add((e.structure, e.x))
            totals[e.structure] = totals.get(e.structure, 0.0) + e.p
        for s, tot in totals.items():
            if abs(tot - 1.0) > 1e-9:
                raise DomainError(f"probabilities of {s} sum to {tot}")

    @property
    def report_size(self) -> int:
        return len(self.entries[0].x)

    @property
    def alphabet(self) -> tuple[Hashable, ...]:
        vals = {v for e in self.entries for v in e.x}
        return tuple(sorted(vals, key=repr))

    @property
    def structures(self) -> tuple[str, ...]:
        seen = dict.fromkeys(e.structure for e in self.entries)
        return tuple(seen)

    def alpha(self) -> float:
        return min(e.p for e in self.entries if e.p > 0)

    @classmethod
    def from_json(cls, text: str) -> "OptTable":
        data = json.loads(text)
        entries = tuple(TableEntry(str(e["structure"]),
                                   _as_multiset(e["x"]),
                                   float(e["opt"]), float(e["p"]))
                        for e in data["entries"])
        return cls(entries)

    def to_json(self) -> str:
        return json.dumps({"entries": [
            {"structure": e.structure, "x": list(e.x),
             "opt": e.opt, "p": e.p} for e in self.entries]}, indent=2)


@dataclass(frozen=True)
class SensitivityReport:
    S: float
    witness: tuple[str, Multiset, str, Multiset] | None
    alpha: float
    lower_bound: float
    upper_bound: float

    def to_json(self) -> str:
        return json.dumps({
            "S": self.S,
            "witness": None if self.witness is None else {
                "structure_1": self.witness[0], "x_1": list(self.witness[1]),
                "structure_2": self.witness[2], "x_2": list(self.witness[3])},
            "alpha": self.alpha,
            "regret_lower_bound": self.lower_bound,
            "regret_upper_bound": self.upper_bound,
        }, indent=2)


def sensitive_parameter(table: OptTable, k: int) -> SensitivityReport:
    """Largest benchmark change achievable by altering at most k reports,
    with the squared-error regret sandwich it implies."""
    best = 0.0
    witness = None
    entries = table.entries
    for i, e1 in enumerate(entries):
        for e2 in entries[i:]:
            if report_distance(e1.x, e2.x) <= k:
                gap = abs(e1.opt - e2.opt)
                if gap > best:
                    best = gap
                    witness = (e1.structure, e1.x, e2.structure, e2.x)
    alpha = table.alpha()
    return SensitivityReport(best, witness, alpha,
                             alpha / 4 * best ** 2, best ** 2)


def _pads(alphabet: Sequence[Hashable], k: int) -> list[Multiset]:
    return [_as_multiset(c)
            for c in itertools.combinations_with_replacement(alphabet, k)]


def _contains(big: Counter, small: Counter) -> bool:
    return all(big[v] >= c for v, c in small.items())


def naive_aggregator(table: OptTable, k: int) -> dict[Multiset, float]:
    """Midpoint-of-hull forecast for every reachable padded multiset.

    For observed reports x, the candidate truthful multisets are those
    contained in x; the forecast averages the largest optimistic and the
    smallest pessimistic benchmark value over the candidates.  Guaranteed
    within S(opt, k) of the true benchmark on consistent observations.
    """
    u: dict[Multiset, float] = {}
    l: dict[Multiset, float] = {}
    for e in table.entries:
        u[e.x] = max(u.get(e.x, 0.0), e.opt)
        l[e.x] = min(l.get(e.x, 1.0), e.opt)
    out: dict[Multiset, float] = {}
    for x_t in u:
        for pad in _pads(table.alphabet, k):
            obs = _as_multiset(x_t + pad)
            if obs not in out:
                out[obs] = naive_forecast(table, k, obs, (u, l))
    return out


def naive_forecast(table: OptTable, k: int, observed: Iterable[Hashable],
                   hulls: tuple[dict, dict] | None = None) -> float:
    obs = Counter(observed)
    if sum(obs.values()) != table.report_size + k:
        raise DomainError("observed multiset has the wrong size")
    if hulls is None:
        u, l = {}, {}
        for e in table.entries:
            u[e.x] = max(u.get(e.x, 0.0), e.opt)
            l[e.x] = min(l.get(e.x, 1.0), e.opt)
    else:
        u, l = hulls
    cands = [x for x in u if _contains(obs, Counter(x))]
    if not cands:
        raise DomainError("observed reports inconsistent with the family")
    return 0.5 * max(u[x] for x in cands) + 0.5 * min(l[x] for x in cands)


def regret_lower_bound_instance(table: OptTable, k: int
                                ) -> tuple[dict, float]:
    """Equal-weight mixture of the sensitivity witness pair, padded into
    indistinguishability, with the regret floor it certifies."""
    rep = sensitive_parameter(table, k)
    if rep.S == 0.0 or rep.witness is None:
        return ({"note": "degenerate: S=0"}, 0.0)
    s1, x1, s2, x2 = rep.witness
    pads = confusion_padding(x1, x2, k)
    assert pads is not None
    p1 = next(e.p for e in table.entries
              if e.structure == s1 and e.x == x1)
    p2 = next(e.p for e in table.entries
              if e.structure == s2 and e.x == x2)
    o1 = next(e.opt for e in table.entries
              if e.structure == s1 and e.x == x1)
    o2 = next(e.opt for e in table.entries
              if e.structure == s2 and e.x == x2)
    # best single forecast against the padded pair, in closed form
    exact_pair_min = 0.5 * p1 * p2 / (p1 + p2) * (o1 - o2) ** 2
    description = {
        "mixture": [s1, s2], "weights": [0.5, 0.5],
        "witness_events": [list(x1), list(x2)],
        "pads": [list(pads[0]), list(pads[1])],
        "merged_observation": sorted(x1 + pads[0], key=repr),
        "exact_pair_min": exact_pair_min,
    }
    return description, rep.alpha / 4 * rep.S ** 2


def sensitivity_ratio_check(table: OptTable, k: int) -> tuple[float, float]:
    """How much of the full-rewrite sensitivity k changes already reach,
    against the chaining floor 1/(ceil(n/k)+1)."""
    if k < 1:
        raise DomainError("need k >= 1")
    n = table.report_size
    s_k = sensitive_parameter(table, k).S
    s_n = sensitive_parameter(table, n).S
    if s_n == 0.0:
        raise DomainError("family is insensitive even to full rewrites")
    return s_k / s_n, 1.0 / (math.ceil(n / k) + 1)


@dataclass(frozen=True)
class FoolingScenario:
    """One fully informative expert drowned out by adversaries.

    Truthful reports are posterior vectors: the informative expert sends
    the realized state's unit vector, the others send the uniform vector.
    The m-1 adversaries send the remaining unit vectors, so the observed
    multiset is identical in every state and no aggregator can beat the
    uniform forecast, which loses ell(1/m) against the omniscient
    benchmark.
    """

    m: int
    k: int
    n_truthful: int
    per_state_observed: tuple[Multiset, ...]
    floor: float

    def regret_of_forecast(self, q: Sequence[float]) -> float:
        if len(q) != self.m or abs(sum(q) - 1.0) > 1e-9 or min(q) < -1e-12:
            raise DomainError("forecast must be a distribution over states")
        return sum((1.0 / self.m) * (1 - qi) ** 2 for qi in q)


def fooling_scenario(m: int, k: int, n_truthful: int = 2) -> FoolingScenario:
    if k < m - 1:
        raise DomainError(f"need k >= m-1 adversaries, got k={k}, m={m}")
    if m < 2 or n_truthful < 1:
        raise DomainError("need at least two states and one truthful expert")
    unit = [f"e{i}" for i in range(m)]
    observed = []
    for state in range(m):
        truthful = [unit[state]] + ["u"] * (n_truthful - 1)
        adversarial = [unit[i] for i in range(m) if i != state]
        adversarial += ["u"] * (k - (m - 1))
        observed.append(_as_multiset(truthful + adversarial))
    floor = (1 - 1.0 / m) ** 2
    return FoolingScenario(m, k, n_truthful, tuple(observed), floor)


@dataclass(frozen=True)
class TableMinimax:
    value: float
    forecasts: dict[Multiset, float]
    lower_bound: float
    gap: float


def _structure_events(table: OptTable):
    by_struct: dict[str, list[TableEntry]] = {}
    for e in table.entries:
        by_struct.setdefault(e.structure, []).append(e)
    return by_struct


def brute_force_table_minimax(table: OptTable, k: int,
                              tol: float = 1e-6) -> TableMinimax:
    """Exact minimax squared-error regret over a finite table.

    The adversary appends k reports chosen per structure and truthful
    multiset; the forecaster commits to a value for every reachable padded
    multiset.  Because the benchmark is the posterior, the regret reduces
    to the probability-weighted squared gap between forecast and benchmark,
    a max of convex functions minimized by an epigraph program; a mixture
    dual certifies the value to within ``tol``.
    """
    pads = _pads(table.alphabet, k)
    by_struct = _structure_events(table)
    obs_index: dict[Multiset, int] = {}
    events = []  # (struct_idx, prob, opt, [obs ids])
    for si, (s, rows) in enumerate(by_struct.items()):
        for e in rows:
            ids = []
            for pad in pads:
                obs = _as_multiset(e.x + pad)
                if obs not in obs_index:
                    obs_index[obs] = len(obs_index)
                ids.append(obs_index[obs])
            events.append((si, e.p, e.opt, sorted(set(ids))))
    n_struct = len(by_struct)
    n_obs = len(obs_index)

    def structure_regrets(f: np.ndarray) -> np.ndarray:
        r = np.zeros(n_struct)
        for si, p, opt, ids in events:
            r[si] += p * max((f[i] - opt) ** 2 for i in ids)
        return r

    # primal: epigraph over structures and events (all-smooth formulation)
    n_events = len(events)
    nv = n_obs + n_events + 1  # f values, per-event slacks, top level
    pair_event = []            # slack index per quadratic constraint
    pair_obs = []
    pair_opt = []
    for ei, (si, p, opt, ids) in enumerate(events):
        for i in ids:
            pair_event.append(n_obs + ei)
            pair_obs.append(i)
            pair_opt.append(opt)
    pair_event = np.array(pair_event)
    pair_obs = np.array(pair_obs)
    pair_opt = np.array(pair_opt)
    prob_rows = np.zeros((n_struct, n_events))
    for ei, (si, p, opt, ids) in enumerate(events):
        prob_rows[si, ei] = p

    def quad_fun(v):
        return v[pair_event] - (v[pair_obs] - pair_opt) ** 2

    def quad_jac(v):
        j = np.zeros((len(pair_obs), nv))
        j[np.arange(len(pair_obs)), pair_event] = 1.0
        j[np.arange(len(pair_obs)), pair_obs] += \
            -2.0 * (v[pair_obs] - pair_opt)
        return j

    def top_fun(v):
        return v[-1] - prob_rows @ v[n_obs:n_obs + n_events]

    top_j = np.zeros((n_struct, nv))
    top_j[:, n_obs:n_obs + n_events] = -prob_rows
    top_j[:, -1] = 1.0

    f0 = np.full(n_obs, 0.5)
    s0 = np.array([max((f0[i] - opt) ** 2 for i in ids)
                   for si, p, opt, ids in events])
    v0 = np.concatenate([f0, s0, [float((prob_rows @ s0).max())]])
    obj_j = np.zeros(nv)
    obj_j[-1] = 1.0
    res = minimize(lambda v: v[-1], v0, method="SLSQP",
                   jac=lambda v: obj_j,
                   constraints=[
                       {"type": "ineq", "fun": quad_fun, "jac": quad_jac},
                       {"type": "ineq", "fun": top_fun,
                        "jac": lambda v: top_j}],
                   bounds=[(0, 1)] * (nv - 1) + [(0, None)],
                   options={"maxiter": 800, "ftol": 1e-14})
    f = np.clip(res.x[:n_obs], 0, 1)
    primal = float(structure_regrets(f).max())

    # dual: fix the adversary's argmax pads at the primal point, then the
    # best structure mixture yields a separable weighted-least-squares
    # lower bound
    def dual_value(lam: np.ndarray, f_ref: np.ndarray) -> float:
        w = np.zeros(n_obs)
        wo = np.zeros(n_obs)
        woo = 0.0
        for si, p, opt, ids in events:
            sel = max(ids, key=lambda i: (f_ref[i] - opt) ** 2)
            weight = lam[si] * p
            w[sel] += weight
            wo[sel] += weight * opt
            woo += weight * opt * opt
        good = w > 1e-300
        return float(woo - (wo[good] ** 2 / w[good]).sum())

    g = structure_regrets(f)
    lam0 = (g > g.max() - 1e-9).astype(float)
    lam0 /= lam0.sum()
    dres = minimize(lambda l: -dual_value(l, f), lam0, method="SLSQP",
                    constraints=[{"type": "eq",
                                  "fun": lambda l: l.sum() - 1.0}],
                    bounds=[(0, 1)] * n_struct,
                    options={"maxiter": 300, "ftol": 1e-14})
    lower = max(dual_value(lam0, f), -dres.fun if dres.success else -np.inf)
    gap = primal - lower
    forecasts = {obs: float(f[i]) for obs, i in obs_index.items()}
    return TableMinimax(primal, forecasts, float(lower), float(gap))


def linear_family_table(n: int, beta: float, mu: float) -> OptTable:
    """Single-structure family whose benchmark is linear in the vote count:
    opt = beta*mu + (1-beta)*count/n, uniform event probabilities."""
    entries = []
    for c in range(n + 1):
        x = _as_multiset([1] * c + [0] * (n - c))
        entries.append(TableEntry("linear", x,
                                  beta * mu + (1 - beta) * c / n,
                                  1.0 / (n + 1)))
    return OptTable(tuple(entries))


def ci_informative_table(n_truthful: int, mu: float) -> OptTable:
    """One fully informative expert among uniform peers, binary state."""
    x1 = _as_multiset(["e1"] + ["u"] * (n_truthful - 1))
    x0 = _as_multiset(["e0"] + ["u"] * (n_truthful - 1))
    return OptTable((TableEntry("ci", x1, 1.0, mu),
                     TableEntry("ci", x0, 0.0, 1.0 - mu)))
