"""Command-line surface: compute aggregators, regret curves, worst-case
instances, sensitivity reports, and seeded simulations, emitting CSV or JSON.

Exit codes: 0 success, 1 verification gate breached, 2 bad flags,
3 model-domain error, 4 resource limit, 5 file error.  All numeric CSV
output uses 15 significant digits and is byte-identical across runs for
identical flags.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import closed_form, oracle, simulation, solver
from . import general_model, worst_case
from .core import DomainError, LossKind, Params, ResourceError


def _g(x: float) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "nan"
    return f"{x:.15g}"


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _csv(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(c if isinstance(c, str) else _g(c) for c in row))
    return "\n".join(lines) + "\n"


def _add_model_flags(sub, k_default: int | None = 0, n_default: int | None = None,
                     mu: float = 0.5, a: float = 0.8, b: float = 0.1) -> None:
    sub.add_argument("--n", type=int, default=n_default,
                     help="total number of experts")
    if k_default is not None:
        sub.add_argument("--k", type=int, default=k_default,
                         help="number of adversarial experts")
    sub.add_argument("--mu", type=float, default=mu, help="prior Pr[state=1]")
    sub.add_argument("--a", type=float, default=a,
                     help="Pr[report H | state=1] per truthful expert")
    sub.add_argument("--b", type=float, default=b,
                     help="Pr[report H | state=0] per truthful expert")


def _check_model_flags(parser: argparse.ArgumentParser, n: int, k: int,
                       mu: float, a: float, b: float) -> Params:
    if n is None or n < 1:
        parser.error("--n must be a positive integer")
    if k < 0 or 2 * k >= n:
        parser.error(f"need 0 <= 2k < n, got n={n}, k={k}")
    if not 0 < mu < 1:
        parser.error("--mu must lie strictly between 0 and 1")
    if not 0 < b < a < 1:
        parser.error("need 0 < b < a < 1")
    return Params(n, k, mu, a, b)


def _loss_kind(name: str) -> LossKind:
    return LossKind.L1 if name == "l1" else LossKind.L2


def cmd_optimal(parser, args) -> int:
    p = _check_model_flags(parser, args.n, args.k, args.mu, args.a, args.b)
    if args.eps <= 0:
        parser.error("--eps must be positive")
    if args.compare:
        p0 = Params(p.n, 0, p.mu, p.a, p.b)
        l1_non = simulation.averaging_aggregator(p.n)
        l1_adv = closed_form.k_ignorance_dictator(p.n, p.k)
        l2_non = solver.solve_l2_nonadversarial(p0, args.eps).aggregator
        l2_adv = closed_form.l2_adversarial_aggregator(p)
        header = ["x", "l1_non_adversarial", "l1_adversarial",
                  "l2_non_adversarial", "l2_adversarial"]
        rows = [[x, l1_non(x), l1_adv(x), l2_non(x), l2_adv(x)]
                for x in range(p.n + 1)]
        _emit(_csv(header, rows), args.out)
        return 0
    if args.loss == "l1":
        f = closed_form.k_ignorance_dictator(p.n, p.k)
    elif p.k == 0:
        f = solver.solve_l2_nonadversarial(p, args.eps).aggregator
    else:
        f = closed_form.l2_adversarial_aggregator(p)
    _emit(_csv(["x", "f"], [[x, f(x)] for x in range(p.n + 1)]), args.out)
    return 0


def cmd_regret_curve(parser, args) -> int:
    p = _check_model_flags(parser, args.n, 0, args.mu, args.a, args.b)
    k_max = (p.n - 1) // 2 if args.k_max is None else args.k_max
    if not 0 <= k_max < p.n / 2:
        parser.error("--k-max must satisfy 0 <= k_max < n/2")
    rows = []
    for k in range(k_max + 1):
        pk = Params(p.n, k, p.mu, p.a, p.b)
        if args.loss == "l1":
            valid = pk.gamma <= closed_form.l1_threshold(pk)
            regret = closed_form.l1_adversarial_regret(pk)
        else:
            valid = pk.gamma < closed_form.l2_threshold(pk)
            try:
                regret = closed_form.l2_adversarial_regret(pk)
            except DomainError:
                regret = float("nan")
        rows.append([k, regret, str(int(valid))])
    _emit(_csv(["k", "regret", "valid"], rows), args.out)
    return 0


def cmd_solve(parser, args) -> int:
    p = _check_model_flags(parser, args.n, 0, args.mu, args.a, args.b)
    if args.eps <= 0:
        parser.error("--eps must be positive")
    res = solver.solve_l2_nonadversarial(p, args.eps)
    payload = json.loads(res.to_json())
    payload["n"] = p.n
    payload["mu"], payload["a"], payload["b"] = p.mu, p.a, p.b
    payload["anchors"] = [res.aggregator(x) for x in (0, 1, p.n - 1, p.n)]
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


def cmd_verify(parser, args) -> int:
    p = _check_model_flags(parser, args.n, args.k, args.mu, args.a, args.b)
    if args.delta <= 0:
        parser.error("--delta must be positive")
    kind = _loss_kind(args.loss)
    tol = 2 * args.delta if args.tol is None else args.tol
    if kind is LossKind.L1:
        if p.gamma > closed_form.l1_threshold(p):
            raise DomainError("gamma above the absolute-loss threshold; "
                              "no prediction to verify")
        predicted = closed_form.l1_adversarial_regret(p)
    elif p.k > 0:
        predicted = closed_form.l2_adversarial_regret(p)
    else:
        predicted = solver.solve_l2_nonadversarial(p, min(tol / 10, 1e-4)).regret
    f_star, oracle_regret = oracle.brute_force_minimax(p, kind, args.delta)
    gap = abs(predicted - oracle_regret)
    interior_ok = oracle.verify_interior_lemma(p, kind, args.delta, tol)
    ok = gap <= tol and interior_ok
    payload = {
        "n": p.n, "k": p.k, "mu": p.mu, "a": p.a, "b": p.b,
        "loss": args.loss, "delta": args.delta, "tolerance": tol,
        "predicted_regret": predicted, "oracle_regret": oracle_regret,
        "gap": gap, "interior_lemma_ok": interior_ok,
        "oracle_aggregator": list(f_star.values), "ok": ok,
    }
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return 0 if ok else 1


def cmd_worst(parser, args) -> int:
    p = _check_model_flags(parser, args.n, args.k, args.mu, args.a, args.b)
    if args.loss == "l2":
        wc = worst_case.worst_structure_l2(p)
    else:
        if args.anchors is None:
            parser.error("--anchors x1,x2,x3,x4 is required for --loss l1")
        try:
            x = tuple(int(t) for t in args.anchors.split(","))
        except ValueError:
            parser.error("--anchors must be four comma-separated integers")
        if len(x) != 4:
            parser.error("--anchors must have exactly four entries")
        wc = worst_case.worst_structure_l1(p, x)
    _emit(wc.to_json() + "\n", args.out)
    return 0


def cmd_sense(parser, args) -> int:
    try:
        with open(args.table, encoding="utf-8") as fh:
            table = general_model.OptTable.from_json(fh.read())
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise DomainError(f"bad table file: {exc}") from None
    if args.k < 1:
        parser.error("--k must be at least 1")
    report = general_model.sensitive_parameter(table, args.k)
    payload = json.loads(report.to_json())
    if args.exact:
        mm = general_model.brute_force_table_minimax(table, args.k)
        payload["minimax_regret"] = mm.value
        payload["minimax_lower_bound"] = mm.lower_bound
        payload["certified_gap"] = mm.gap
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


def cmd_simulate(parser, args) -> int:
    n = (100 + args.k) if args.n is None else args.n
    p = _check_model_flags(parser, n, args.k, args.mu, args.a, args.b)
    if args.trials < 1:
        parser.error("--trials must be positive")
    kind = _loss_kind(args.loss)
    if kind is LossKind.L1:
        opt = closed_form.k_ignorance_dictator(p.n, p.k)
    elif p.k == 0:
        opt = solver.solve_l2_nonadversarial(p, 1e-3).aggregator
    else:
        opt = closed_form.l2_adversarial_aggregator(p)
    if args.votes is not None:
        ds = simulation.ingest_csv(args.votes)
        if ds.n != p.n or ds.k != p.k:
            raise DomainError(
                f"vote file has n={ds.n}, k={ds.k}; flags say n={p.n}, k={p.k}")
    else:
        ds = simulation.synthesize(p, args.trials, args.seed)
        if args.strategy != "none":
            ds = simulation.apply_adversaries(ds, args.strategy, args.seed,
                                              f=opt, kind=kind)
    if args.dump_votes is not None:
        simulation.write_csv(ds, args.dump_votes)
    est = simulation.estimate_params(ds)
    aggregators = [("optimal", opt),
                   ("majority", simulation.majority_aggregator(p.n)),
                   ("averaging", simulation.averaging_aggregator(p.n))]
    table = simulation.evaluate(ds, aggregators, kind, est)
    rows = [[r.name, r.mean_loss, r.mean_regret] for r in table]
    _emit(_csv(["aggregator", "mean_loss", "mean_regret"], rows), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="robustagg",
        description="Robust aggregation of binary votes with adversaries")
    subs = parser.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("optimal", help="tabulate an optimal aggregator",
                         description="CSV `x,f`; with --compare, CSV "
                         "`x,<four series>` for both losses with and "
                         "without adversaries.")
    _add_model_flags(sp, n_default=10)
    sp.add_argument("--loss", choices=("l1", "l2"), default="l2")
    sp.add_argument("--compare", action="store_true",
                    help="emit all four aggregators side by side")
    sp.add_argument("--eps", type=float, default=1e-3,
                    help="accuracy for the no-adversary squared-loss solve")
    sp.add_argument("--out", "-o", default=None)
    sp.set_defaults(fn=cmd_optimal)

    sp = subs.add_parser("regret_curve",
                         help="closed-form regret as adversaries increase",
                         description="CSV `k,regret,valid`; valid=0 rows "
                         "fall outside the closed form's threshold.")
    _add_model_flags(sp, k_default=None, n_default=100)
    sp.add_argument("--loss", choices=("l1", "l2"), default="l1")
    sp.add_argument("--k-max", type=int, default=None,
                    help="largest adversary count to tabulate")
    sp.add_argument("--out", "-o", default=None)
    sp.set_defaults(fn=cmd_regret_curve)

    sp = subs.add_parser("solve",
                         help="no-adversary squared-loss optimal aggregator",
                         description="JSON with values, knots, regret, and "
                         "the certified accuracy.")
    _add_model_flags(sp, k_default=None, n_default=10)
    sp.add_argument("--eps", type=float, default=1e-3)
    sp.add_argument("--out", "-o", default=None)
    sp.set_defaults(fn=cmd_solve)

    sp = subs.add_parser("verify",
                         help="brute-force check of the closed forms",
                         description="JSON report; exits 1 when the "
                         "closed-form prediction differs from the "
                         "brute-force optimum by more than the tolerance.")
    _add_model_flags(sp, n_default=4, k_default=1)
    sp.add_argument("--loss", choices=("l1", "l2"), default="l1")
    sp.add_argument("--delta", type=float, default=0.02,
                    help="aggregator value grid step")
    sp.add_argument("--tol", type=float, default=None,
                    help="acceptance gap (default 2*delta)")
    sp.add_argument("--out", "-o", default=None)
    sp.set_defaults(fn=cmd_verify)

    sp = subs.add_parser("worst", help="explicit worst-case instance",
                         description="JSON: conditional report-count "
                         "distributions, adversary strategy, benchmark loss.")
    _add_model_flags(sp, n_default=10, k_default=2)
    sp.add_argument("--loss", choices=("l1", "l2"), default="l2")
    sp.add_argument("--anchors", default=None,
                    help="x1,x2,x3,x4 support anchors (absolute loss only)")
    sp.add_argument("--out", "-o", default=None)
    sp.set_defaults(fn=cmd_worst)

    sp = subs.add_parser("sense",
                         help="sensitivity bounds for a benchmark table",
                         description="Reads an OptTable JSON file; emits the "
                         "sensitive parameter, regularity, and regret bounds.")
    sp.add_argument("--table", required=True, help="OptTable JSON path")
    sp.add_argument("--k", type=int, required=True,
                    help="number of adversarial reports")
    sp.add_argument("--exact", action="store_true",
                    help="also solve the exact minimax on the table")
    sp.add_argument("--out", "-o", default=None)
    sp.set_defaults(fn=cmd_sense)

    sp = subs.add_parser("simulate",
                         help="seeded synthetic voting experiment",
                         description="CSV `aggregator,mean_loss,mean_regret` "
                         "per built-in aggregator.")
    _add_model_flags(sp, n_default=None, mu=0.95, a=0.85, b=0.74)
    sp.add_argument("--loss", choices=("l1", "l2"), default="l2")
    sp.add_argument("--strategy", default="extreme",
                    choices=("none", "extreme", "random", "best_response"))
    sp.add_argument("--trials", type=int, default=10000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--votes", default=None,
                    help="ingest this vote CSV instead of synthesizing")
    sp.add_argument("--dump-votes", default=None,
                    help="also write the raw vote CSV here")
    sp.add_argument("--out", "-o", default=None)
    sp.set_defaults(fn=cmd_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(parser, args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ResourceError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"file error: {exc}", file=sys.stderr)
        return 5


if __name__ == "__main__":
    sys.exit(main())
