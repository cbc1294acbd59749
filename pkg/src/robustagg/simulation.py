"""Synthetic voting experiments with planted adversaries.

Rows are independent trials: a hidden state is drawn from the prior, each
truthful voter reports H with the state's signal probability, and the
adversarial voters fill in their reports according to a strategy that can
see everything.  Aggregators are scored by mean loss against the realized
state; regret subtracts the loss of the omniscient benchmark computed from
the truthful votes alone with parameters estimated from the data, mirroring
how the experiment would run on real classifier outputs.

Randomness is drawn from per-row counter-based streams keyed on (seed, row,
purpose), so datasets are reproducible regardless of evaluation order or
parallelism.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace

import numpy as np
from scipy.stats import binom

from .core import Aggregator, DomainError, LossKind, Params

_SYNTH_STREAM = 0
_ADV_STREAM = 1


def _row_rng(seed: int, row: int, stream: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.Philox(key=[np.uint64(seed), np.uint64(row * 2 + stream)]))


@dataclass(frozen=True)
class VoteDataset:
    truth: np.ndarray          # (rows,) 0/1 hidden state
    truthful: np.ndarray       # (rows, n-k) 0/1 votes
    adversarial: np.ndarray    # (rows, k) 0/1 votes

    def __post_init__(self) -> None:
        if (self.truth.ndim != 1 or self.truthful.ndim != 2
                or self.adversarial.ndim != 2
                or len(self.truth) != len(self.truthful)
                or len(self.truth) != len(self.adversarial)):
            raise DomainError("inconsistent dataset shapes")

    @property
    def rows(self) -> int:
        return len(self.truth)

    @property
    def n_truthful(self) -> int:
        return self.truthful.shape[1]

    @property
    def k(self) -> int:
        return self.adversarial.shape[1]

    @property
    def n(self) -> int:
        return self.n_truthful + self.k


def synthesize(p: Params, trials: int, seed: int) -> VoteDataset:
    """Conditionally independent voters; adversarial columns start empty
    (all zeros) until a strategy pass fills them."""
    if trials < 1:
        raise DomainError("need at least one trial")
    m = p.n - p.k
    truth = np.empty(trials, dtype=np.int8)
    votes = np.empty((trials, m), dtype=np.int8)
    for row in range(trials):
        rng = _row_rng(seed, row, _SYNTH_STREAM)
        w = rng.random() < p.mu
        truth[row] = w
        votes[row] = rng.random(m) < (p.a if w else p.b)
    return VoteDataset(truth, votes, np.zeros((trials, p.k), dtype=np.int8))


def apply_adversaries(ds: VoteDataset, strategy: str, seed: int,
                      f: Aggregator | None = None,
                      kind: LossKind = LossKind.L2) -> VoteDataset:
    """Fill the adversarial votes.

    extreme: everyone votes against the truthful majority (ties: against
    the state).  random: independent fair coins.  best_response: per row,
    the added H-count maximizing the loss of the given aggregator.
    """
    k = ds.k
    if k == 0:
        return ds
    m = ds.n_truthful
    adv = np.zeros((ds.rows, k), dtype=np.int8)
    if strategy == "extreme":
        counts = ds.truthful.sum(axis=1)
        for row in range(ds.rows):
            if counts[row] * 2 > m:
                vote = 0
            elif counts[row] * 2 < m:
                vote = 1
            else:
                vote = 0 if ds.truth[row] else 1
            adv[row] = vote
    elif strategy == "random":
        for row in range(ds.rows):
            rng = _row_rng(seed, row, _ADV_STREAM)
            adv[row] = rng.random(k) < 0.5
    elif strategy == "best_response":
        if f is None:
            raise DomainError("best_response needs the target aggregator")
        counts = ds.truthful.sum(axis=1)
        from .core import loss
        for row in range(ds.rows):
            x_t = int(counts[row])
            window = f.values[x_t:x_t + k + 1]
            losses = loss(kind, window, int(ds.truth[row]))
            adv[row, :int(np.argmax(losses))] = 1
    else:
        raise DomainError(f"unknown strategy {strategy!r}")
    return replace(ds, adversarial=adv)


@dataclass(frozen=True)
class EstimatedParams:
    mu_hat: float
    a_hat: float | None
    b_hat: float | None
    rows: int
    rows_state1: int


def estimate_params(ds: VoteDataset) -> EstimatedParams:
    """Empirical prior and per-state truthful H-rates."""
    ones = ds.truth == 1
    n1 = int(ones.sum())
    a_hat = float(ds.truthful[ones].mean()) if n1 > 0 else None
    b_hat = float(ds.truthful[~ones].mean()) if n1 < ds.rows else None
    return EstimatedParams(n1 / ds.rows, a_hat, b_hat, ds.rows, n1)


def _benchmark_forecasts(est: EstimatedParams, m: int,
                         kind: LossKind) -> np.ndarray:
    """Omniscient forecast per truthful count under the estimated
    conditionally independent model."""
    if est.a_hat is None or est.b_hat is None:
        raise DomainError("estimates missing a state; cannot benchmark")
    xs = np.arange(m + 1)
    w1 = est.mu_hat * binom.pmf(xs, m, est.a_hat)
    w0 = (1 - est.mu_hat) * binom.pmf(xs, m, est.b_hat)
    if kind is LossKind.L1:
        return (w1 >= w0).astype(float)
    with np.errstate(invalid="ignore"):
        post = np.where(w1 + w0 > 0, w1 / np.where(w1 + w0 > 0, w1 + w0, 1),
                        est.mu_hat)
    return post


def majority_aggregator(n: int) -> Aggregator:
    values = np.where(2 * np.arange(n + 1) > n, 1.0,
                      np.where(2 * np.arange(n + 1) < n, 0.0, 0.5))
    return Aggregator(values)


def averaging_aggregator(n: int) -> Aggregator:
    return Aggregator(np.arange(n + 1) / n)


@dataclass(frozen=True)
class EvaluationRow:
    name: str
    mean_loss: float
    mean_regret: float


def evaluate(ds: VoteDataset, aggregators: list[tuple[str, Aggregator]],
             kind: LossKind, est: EstimatedParams) -> list[EvaluationRow]:
    """Mean loss and mean regret per aggregator over the dataset.

    Aggregators see the total H-count; the benchmark sees the truthful
    votes only and forecasts from the estimated model.
    """
    totals = ds.truthful.sum(axis=1) + ds.adversarial.sum(axis=1)
    truthful_counts = ds.truthful.sum(axis=1)
    w = ds.truth.astype(float)
    bench_f = _benchmark_forecasts(est, ds.n_truthful, kind)[truthful_counts]
    if kind is LossKind.L1:
        bench_loss = np.abs(bench_f - w).mean()
    else:
        bench_loss = ((bench_f - w) ** 2).mean()
    out = []
    for name, f in aggregators:
        if f.n != ds.n:
            raise DomainError(
                f"aggregator {name} covers 0..{f.n}, dataset needs 0..{ds.n}")
        y = f.values[totals]
        loss = (np.abs(y - w) if kind is LossKind.L1
                else (y - w) ** 2).mean()
        out.append(EvaluationRow(name, float(loss),
                                 float(loss - bench_loss)))
    return out


def write_csv(ds: VoteDataset, path: str) -> None:
    n = ds.n
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["item", "truth"]
                        + [f"v{i + 1}" for i in range(n)] + ["adv_mask"])
        mask = "0" * ds.n_truthful + "1" * ds.k
        for row in range(ds.rows):
            writer.writerow([row, int(ds.truth[row])]
                            + [int(v) for v in ds.truthful[row]]
                            + [int(v) for v in ds.adversarial[row]]
                            + [mask])


def ingest_csv(path: str) -> VoteDataset:
    """Read the vote CSV (header item,truth,v1..vn[,adv_mask])."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DomainError("empty vote file") from None
        if header[:2] != ["item", "truth"]:
            raise DomainError("header must start with item,truth")
        has_mask = header[-1] == "adv_mask"
        vote_cols = len(header) - 2 - int(has_mask)
        if vote_cols < 1:
            raise DomainError("no vote columns")
        truth, truthful, adversarial = [], [], []
        mask = None
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise DomainError(
                    f"line {lineno}: expected {len(header)} fields,"
                    f" got {len(row)}")
            try:
                t = int(row[1])
                votes = [int(v) for v in row[2:2 + vote_cols]]
            except ValueError as exc:
                raise DomainError(f"line {lineno}: {exc}") from None
            if t not in (0, 1) or any(v not in (0, 1) for v in votes):
                raise DomainError(f"line {lineno}: votes must be 0 or 1")
            row_mask = row[-1] if has_mask else "0" * vote_cols
            if len(row_mask) != vote_cols or set(row_mask) - {"0", "1"}:
                raise DomainError(f"line {lineno}: bad adversary mask")
            if mask is None:
                mask = row_mask
            elif row_mask != mask:
                raise DomainError(
                    f"line {lineno}: adversary mask differs across rows")
            truth.append(t)
            truthful.append([v for v, m in zip(votes, mask) if m == "0"])
            adversarial.append([v for v, m in zip(votes, mask) if m == "1"])
        if not truth:
            raise DomainError("no data rows")
    return VoteDataset(np.array(truth, dtype=np.int8),
                       np.array(truthful, dtype=np.int8),
                       np.array(adversarial, dtype=np.int8))
