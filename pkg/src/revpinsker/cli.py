"""Command-line front end.

    revpinsker compute  --input pair.json [--alpha 0.5,2,inf]
    revpinsker bounds   --input pair.json [--base bits]
    revpinsker verify   --suite all --trials 100000 --seed 42
    revpinsker sweep    --construction thm2 --eta 0.25:3.0:0.25
    revpinsker exponent --q q.json --delta 0.1 [--mc-n 100,200 --trials 10000]
    revpinsker dstar    --q q.json --eps 0.2 --grid 2000
    revpinsker chain    --input bernoulli.json --alpha 0.5,1,2,3,inf

Values are computed in nats; ``--base bits`` rescales log-valued outputs when
writing.  Validation problems exit with status 2, verification failures with 1.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from decimal import Decimal
from pathlib import Path

import numpy as np

from . import bounds as B
from ._numerics import NATS_TO_BITS
from .divergence import bhattacharyya, chi2_array, kl_array, l2_array, renyi_array, tv_array
from .errors import RevPinskerError
from .exponent import exponent_bracket, montecarlo_nontypical
from .measure import load_distribution, load_pair
from .oracle import d_star
from .partial_sums import renyi_chain_check, summability_caps
from .verify import SUITES, run_verification, total_violations

DEFAULT_ALPHAS = (0.0, 0.5, 1.0, 2.0, math.inf)


class UsageError(RevPinskerError):
    pass


def parse_alpha_list(text: str) -> list[float]:
    out = []
    for tok in text.split(","):
        tok = tok.strip().lower()
        if not tok:
            continue
        a = math.inf if tok in ("inf", "infinity", "+inf") else float(tok)
        if math.isnan(a) or a < 0:
            raise UsageError(f"orders must lie in [0, inf], got {tok!r}")
        out.append(a)
    if not out:
        raise UsageError("empty --alpha list")
    return out


def parse_int_list(text: str) -> list[int]:
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc
    if not vals or any(v < 1 for v in vals):
        raise UsageError(f"expected positive integers, got {text!r}")
    return vals


def parse_range(text: str) -> list[float]:
    """START:STOP:STEP, inclusive of STOP when it lies on the grid."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"expected START:STOP:STEP, got {text!r}")
    try:
        start, stop, step = (Decimal(p.strip()) for p in parts)
    except ArithmeticError as exc:
        raise UsageError(f"bad number in range {text!r}") from exc
    if step <= 0 or stop < start:
        raise UsageError(f"range {text!r} must have STEP > 0 and STOP >= START")
    count = int((stop - start) / step) + 1
    return [float(start + k * step) for k in range(count)]


def _scale(base: str) -> float:
    return NATS_TO_BITS if base == "bits" else 1.0


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _csv(rows: list[list], header: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_cell(x) for x in r])
    return buf.getvalue()


def _cell(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return repr(float(x)) if math.isfinite(x) else ("inf" if x > 0 else ("-inf" if x < 0 else "nan"))
    return x


# --------------------------------------------------------------------------
# commands


def cmd_compute(args) -> int:
    pair = load_pair(args.input)
    s = _scale(args.base)
    p, q = pair.p, pair.q
    alphas = parse_alpha_list(args.alpha) if args.alpha else list(DEFAULT_ALPHAS)
    bh = bhattacharyya(pair)
    values = {
        "kl_pq": float(kl_array(p, q)) * s,
        "kl_qp": float(kl_array(q, p)) * s,
        "tv": float(tv_array(p, q)),
        "chi2": math.inf if np.any(q == 0) else float(chi2_array(p, q)),
        "l2": float(l2_array(p, q)),
        "bhattacharyya": bh.coefficient,
        "d_half": bh.d_half * s,
        "renyi": {B.alpha_key(a): float(renyi_array(p, q, a)) * s for a in alphas},
    }
    if args.format == "csv":
        rows = [[k, v] for k, v in values.items() if k != "renyi"]
        rows += [[f"renyi[{k}]", v] for k, v in values["renyi"].items()]
        _emit(_csv(rows, ["quantity", "value"]), args.output)
    else:
        _emit(B.dumps({"pair": pair.to_dict(), "base": args.base, "values": values}) + "\n", args.output)
    return 0


def cmd_bounds(args) -> int:
    report = B.bound_report(load_pair(args.input))
    if args.format == "csv":
        d = report.to_dict(args.base)
        rows = [[b["name"], b["order"] if b["order"] is not None else "", b["direction"], b["target"],
                 b["value"] if b["value"] is not None else "", b["applicable"],
                 "" if b["holds"] is None else b["holds"]] for b in d["bounds"]]
        _emit(_csv(rows, ["name", "order", "direction", "target", "value", "applicable", "holds"]),
              args.output)
    else:
        _emit(report.to_json(args.base) + "\n", args.output)
    return 0


def cmd_verify(args) -> int:
    suites = [s.strip() for s in args.suite.split(",") if s.strip()]
    for s in suites:
        if s != "all" and s not in SUITES:
            raise UsageError(f"unknown suite {s!r}; choose from all, {', '.join(SUITES)}")
    results = run_verification(suites, trials=args.trials, seed=args.seed, workers=args.workers)
    bad = total_violations(results)
    for r in results:
        status = "ok" if r.violations == 0 else f"{r.violations} violations"
        print(f"[{r.name}] {status} ({r.seconds:.2f}s)")
        for c in r.checks.values():
            if c.violations:
                kind = "finding" if c.informational else "VIOLATION"
                print(f"    {kind}: {c.name}: {c.violations}/{c.evaluated} (worst excess {c.worst_excess:.3g})")
    summary = {"seed": args.seed, "trials": args.trials, "violations": bad,
               "suites": [r.to_dict() for r in results]}
    if args.output:
        Path(args.output).write_text(B.dumps(summary) + "\n", encoding="utf-8")
    if bad:
        witnesses = [c.witness.to_dict() for r in results for c in r.checks.values()
                     if c.violations and not c.informational and c.witness is not None]
        Path(args.witness).write_text(B.dumps(witnesses) + "\n", encoding="utf-8")
        print(f"{bad} violations; witnesses written to {args.witness}", file=sys.stderr)
        return 1
    print("all checks passed")
    return 0


def sweep_rows(construction: str, etas: list[float]) -> list[list]:
    if construction == "thm2":
        grid = [(e, e) for e in etas]
    else:
        grid = [(e1, e2) for e1 in etas for e2 in etas]
    rows = []
    for e1, e2 in grid:
        pair = B.attainment_construction(e1, e2)
        tv = float(tv_array(pair.p, pair.q))
        if construction == "thm2":
            lb, _ = B.tv_lower_relinfo(pair)
        else:
            lb, _, _ = B.tv_lower_two_param(pair)
        attained = abs(tv - lb) <= 1e-12 * max(1.0, tv)
        rows.append([e1, e2, tv, lb, attained])
    return rows


def cmd_sweep(args) -> int:
    etas = parse_range(args.eta)
    rows = sweep_rows(args.construction, etas)
    if args.format == "json":
        keys = ["eta1", "eta2", "tv", "lower_bound", "attained"]
        _emit(B.dumps([dict(zip(keys, r)) for r in rows]) + "\n", args.output)
    else:
        _emit(_csv(rows, ["eta1", "eta2", "tv", "lower_bound", "attained"]), args.output)
    return 0


def cmd_exponent(args) -> int:
    Q = load_distribution(args.q)
    s = _scale(args.base)
    br = exponent_bracket(Q, args.delta)
    mc_rows = []
    if args.mc_n:
        for N in parse_int_list(args.mc_n):
            est = montecarlo_nontypical(Q, args.delta, N, args.trials, args.seed, workers=args.workers)
            mc_rows.append([N, est.p_hat, est.neg_log_rate * s if est.defined else math.nan])
    if args.format == "csv":
        if not mc_rows:
            raise UsageError("--format csv needs --mc-n")
        _emit(_csv(mc_rows, ["N", "p_hat", "neg_log_rate"]), args.output)
        return 0
    d = br.to_dict()
    for k in ("e_lower", "e_lower_loose", "e_upper_paper", "e_upper_corrected", "exact"):
        d[k] *= s
    d["base"] = args.base
    if d["discrepancy"]:
        d["note"] = "exact exponent exceeds e_upper_paper; e_upper_corrected brackets it"
    if mc_rows:
        d["montecarlo"] = [{"N": n, "p_hat": p, "neg_log_rate": r} for n, p, r in mc_rows]
        d["montecarlo_trials"] = args.trials
        d["seed"] = args.seed
    _emit(B.dumps(d) + "\n", args.output)
    return 0


def cmd_dstar(args) -> int:
    Q = load_distribution(args.q)
    r = d_star(Q, args.eps, args.grid)
    s = _scale(args.base)
    out = {
        "Q": Q.to_dict(),
        "eps": args.eps,
        "value": r.value * s,
        "argmin": r.argmin.to_dict(),
        "grid_value": r.grid_value * s,
        "grid_argmin": r.grid_argmin.to_dict(),
        "base": args.base,
        "metadata": r.metadata,
    }
    _emit(B.dumps(out) + "\n", args.output)
    return 0


def cmd_chain(args) -> int:
    with open(args.input, encoding="utf-8") as fh:
        obj = json.load(fh)
    if not isinstance(obj, dict) or "p" not in obj or "q" not in obj:
        raise UsageError("chain input must be a JSON object with arrays 'p' and 'q'")
    alphas = parse_alpha_list(args.alpha) if args.alpha else [0.5, 1.0, 1.5, 2.0, 3.0, math.inf]
    s = _scale(args.base)
    caps = summability_caps(obj["p"], obj["q"])
    rows = []
    for a in alphas:
        c = renyi_chain_check(obj["p"], obj["q"], a)
        rows.append([B.alpha_key(a), c.lhs * s, c.additivity_sum * s, c.bound_sum * s, c.holds])
    if args.format == "csv":
        _emit(_csv(rows, ["alpha", "lhs", "additivity_sum", "bound_sum", "holds"]), args.output)
    else:
        out = {
            "base": args.base,
            "k1": caps.k1 * s,
            "k2": caps.k2 * s,
            "eps": caps.eps.tolist(),
            "chain": [dict(zip(["alpha", "lhs", "additivity_sum", "bound_sum", "holds"], r)) for r in rows],
        }
        _emit(B.dumps(out) + "\n", args.output)
    return 0


# --------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="revpinsker", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt_default="json"):
        p.add_argument("--base", choices=["nats", "bits"], default="nats")
        p.add_argument("--output", help="write here instead of stdout")
        p.add_argument("--format", choices=["json", "csv"], default=fmt_default)

    p = sub.add_parser("compute", help="exact divergences for a pair")
    p.add_argument("--input", required=True)
    p.add_argument("--alpha", help="comma-separated Renyi orders, 'inf' allowed")
    common(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("bounds", help="bound report for a pair")
    p.add_argument("--input", required=True)
    common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", help="run the verification suites")
    p.add_argument("--suite", default="all", help=f"all or comma list of: {', '.join(SUITES)}")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--witness", default="witnesses.json", help="where violating cases are written")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="attainment sweep over the two-atom construction")
    p.add_argument("--construction", choices=["thm2", "thm2_two_param"], default="thm2")
    p.add_argument("--eta", required=True, help="START:STOP:STEP")
    common(p, "csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("exponent", help="exponent bracket for (Q, delta)")
    p.add_argument("--q", required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--mc-n", help="comma-separated sequence lengths for Monte-Carlo")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_exponent)

    p = sub.add_parser("dstar", help="grid estimate of min KL at distance >= eps")
    p.add_argument("--q", required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--grid", type=int, default=1000)
    common(p)
    p.set_defaults(func=cmd_dstar)

    p = sub.add_parser("chain", help="partial-sum Renyi chain for Bernoulli vectors")
    p.add_argument("--input", required=True)
    p.add_argument("--alpha", help="comma-separated Renyi orders, 'inf' allowed")
    common(p)
    p.set_defaults(func=cmd_chain)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "trials", 1) is not None and getattr(args, "trials", 1) < 1:
        print("error: --trials must be positive", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (RevPinskerError, OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
