"""Command-line interface.

Human-readable summaries go to stdout. A machine-readable report is written
only when both ``--out`` and ``--format`` are given. Exit codes: 0 success,
2 usage, 3 parse, 4 validation, 5 solver failure, 6 I/O.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import time
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__
from .calibration import (
    SWEEP_COLUMNS,
    SWEEP_PARAMS,
    THRESHOLD_BRACKETS,
    CornerNeverBreaks,
    DollarConfig,
    baseline_report,
    baseline_scenario,
    corner_threshold,
    dollar_welfare,
    sensitivity_sweep,
)
from .equilibrium import (
    PLANNER_MODES,
    ConvergenceError,
    OracleCycleError,
    generality_gap,
    grid_oracle,
    nash_equilibrium,
    trap_check,
)
from .governance import DEFAULT_BIG_GAMMA, DEFAULT_HYBRID_CORRECTION, regime_comparison
from .model import DomainError, Profile
from .sampling import random_scenario
from .scenario_io import ScenarioFile, ScenarioParseError, ScenarioValidationError, dumps, load_scenario_file
from .welfare import debt_scaling_curve, total_debt

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_VALIDATION = 4
EXIT_SOLVER = 5
EXIT_IO = 6


class SolverFailure(Exception):
    pass


# -- inputs ---------------------------------------------------------------------


def _load_input(args) -> tuple[ScenarioFile, str]:
    """Scenario file plus a sha256 digest of its source bytes."""
    if getattr(args, "baseline", False):
        sf = ScenarioFile(baseline_scenario())
        return sf, hashlib.sha256(dumps(sf).encode()).hexdigest()
    if getattr(args, "random", None) is not None:
        sf = ScenarioFile(random_scenario(args.seed, n_domains=args.random))
        return sf, hashlib.sha256(dumps(sf, shorthand=False).encode()).hexdigest()
    raw = Path(args.scenario).read_bytes()
    return load_scenario_file(args.scenario), hashlib.sha256(raw).hexdigest()


def _metadata(digest: str, command: str) -> dict:
    # SOURCE_DATE_EPOCH pins the timestamp for reproducible reports
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    stamp = time.gmtime(int(epoch)) if epoch else time.gmtime()
    return {
        "tool": "meshtrap",
        "tool_version": __version__,
        "command": command,
        "input_digest": digest,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", stamp),
    }


# -- outputs ----------------------------------------------------------------------


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    raise TypeError(f"not serializable: {type(x).__name__}")


def _finite(x):
    """Replace non-finite floats, which JSON cannot carry, with None."""
    if isinstance(x, dict):
        return {k: _finite(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_finite(v) for v in x]
    if isinstance(x, np.ndarray):
        return _finite(x.tolist())
    if isinstance(x, float) and not np.isfinite(x):
        return None
    return x


def _write_report(args, bundle: dict, rows: list[dict]) -> None:
    if args.out is None:
        return
    path = Path(args.out)
    if args.format == "json":
        text = json.dumps(_finite(bundle), indent=2, default=_jsonable, allow_nan=False) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]) if rows else [], lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        text = buf.getvalue()
    path.write_text(text, encoding="utf-8")


def _profile_dict(p: Profile) -> dict:
    return {"q": p.q, "g": p.g}


def _result_dict(r) -> dict:
    return {
        "mode": r.mode,
        "profile": _profile_dict(r.profile),
        "iterations": r.iterations,
        "residual": r.residual,
        "converged": r.converged,
        "corner_domains": r.corner_domains,
        "degenerate_domains": r.degenerate_domains,
    }


# -- commands ---------------------------------------------------------------------


def cmd_solve(args) -> int:
    sf, digest = _load_input(args)
    s, cfg = sf.scenario, sf.solver
    gap = generality_gap(s, args.mode, cfg)
    nash, opt = gap.nash, gap.optimum
    trap = trap_check(s, nash)
    bundle = {
        "metadata": _metadata(digest, "solve"),
        "equilibrium": _result_dict(nash),
        "optimum": _result_dict(opt),
        "gap": {"closed_form": gap.closed_form, "realized": gap.realized},
        "trap": {
            "per_domain": [asdict(t) for t in trap.per_domain],
            "organization_trapped": trap.organization_trapped,
        },
    }
    if args.baseline:
        bundle["calibration"] = baseline_report(s, cfg)

    oracle = None
    if args.oracle is not None:
        oracle = grid_oracle(s, args.oracle)
        dev = max(np.max(np.abs(oracle.q - nash.profile.q)), np.max(np.abs(oracle.g - nash.profile.g)))
        bundle["oracle"] = {"resolution": args.oracle, "profile": _profile_dict(oracle), "max_deviation": float(dev)}

    rows = []
    for i in range(s.n_domains):
        row = {
            "domain": i,
            "q_nash": nash.profile.q[i],
            "g_nash": nash.profile.g[i],
            "q_social": opt.profile.q[i],
            "g_social": opt.profile.g[i],
            "gap_closed_form": gap.closed_form[i],
            "gap_realized": gap.realized[i],
            "trapped": trap.per_domain[i].trapped,
        }
        if oracle is not None:
            row.update(q_oracle=oracle.q[i], g_oracle=oracle.g[i])
        rows.append(row)
    _write_report(args, bundle, rows)

    print(f"domains: {s.n_domains}  consumers: {s.m_consumers}  planner mode: {args.mode}")
    print(f"nash:    converged={nash.converged} iterations={nash.iterations} residual={nash.residual:.2e}")
    print(f"optimum: converged={opt.converged} iterations={opt.iterations} residual={opt.residual:.2e}")
    print(f"{'i':>3} {'q_NE':>8} {'g_NE':>8} {'q_SO':>8} {'g_SO':>8} {'gap(cf)':>9} {'gap':>8} trapped")
    for r in rows:
        print(f"{r['domain']:>3} {r['q_nash']:8.4f} {r['g_nash']:8.4f} {r['q_social']:8.4f} "
              f"{r['g_social']:8.4f} {r['gap_closed_form']:9.4f} {r['gap_realized']:8.4f} {r['trapped']}")
    print(f"organization trapped: {trap.organization_trapped}")
    if "calibration" in bundle:
        print(bundle["calibration"]["g_social_note"])
    if oracle is not None:
        print(f"oracle (resolution {args.oracle}): max deviation {bundle['oracle']['max_deviation']:.4g}")

    if not (nash.converged and opt.converged):
        failed = [r.mode for r in (nash, opt) if not r.converged]
        print(f"error: {', '.join(failed)} solve did not converge", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


def cmd_sweep(args) -> int:
    sf, digest = _load_input(args)
    rows = sensitivity_sweep(sf.scenario, args.param, args.low, args.high, args.steps, sf.solver)
    records = [r.as_record() for r in rows]
    bundle = {"metadata": _metadata(digest, "sweep"), "sweep": {"param": args.param, "columns": SWEEP_COLUMNS, "rows": records}}
    _write_report(args, bundle, records)
    print(f"sweep over {args.param}: {len(rows)} points")
    print(" ".join(f"{c:>13}" for c in SWEEP_COLUMNS))
    for r in records:
        print(" ".join(f"{r[c]!s:>13}" if isinstance(r[c], bool) else f"{r[c]:13.6g}" for c in SWEEP_COLUMNS))
    return EXIT_OK


def cmd_regimes(args) -> int:
    sf, digest = _load_input(args)
    reports = regime_comparison(sf.scenario, args.gamma, args.correction, sf.solver)
    records = []
    for r in reports:
        records.append({
            "regime": r.regime,
            "g_mean": float(np.mean(r.profile.g)),
            "g_min": float(np.min(r.profile.g)),
            "g_max": float(np.max(r.profile.g)),
            "welfare": r.welfare,
            "rank": r.rank,
            "welfare_tied": r.welfare_tied,
            "coordination_cost": r.coordination_cost,
            "friction": r.friction,
        })
    bundle = {
        "metadata": _metadata(digest, "regimes"),
        "regimes": [
            {**rec, "profile": _profile_dict(r.profile), "g_standard": r.g_standard,
             "platform_cost": r.platform_cost, "subsidy_schedule": r.subsidy_schedule}
            for rec, r in zip(records, reports)
        ],
        "big_gamma": args.gamma,
        "correction": args.correction,
    }
    _write_report(args, bundle, records)
    print(f"{'regime':<12} {'g_mean':>7} {'welfare':>12} rank  coordination cost / friction")
    for rec in sorted(records, key=lambda r: r["rank"]):
        tie = " (welfare-tied)" if rec["welfare_tied"] else ""
        print(f"{rec['regime']:<12} {rec['g_mean']:7.4f} {rec['welfare']:12.6f} {rec['rank']:>4}{tie}  "
              f"{rec['coordination_cost']} / {rec['friction']}")
    return EXIT_OK


def _parse_n_list(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if len(values) < 2 or min(values) < 2:
        raise argparse.ArgumentTypeError("need at least two N values, each >= 2")
    return values


def cmd_debt(args) -> int:
    sf, digest = _load_input(args)
    s = sf.scenario
    bundle = {"metadata": _metadata(digest, "debt")}
    if args.n is not None:
        curve = debt_scaling_curve(s, args.n, sf.solver)
        records = [{"n_domains": n, "td_total": t} for n, t in zip(curve.n_values, curve.totals)]
        bundle["scaling"] = {**asdict(curve), "rows": records}
        _write_report(args, bundle, records)
        for r in records:
            print(f"N={r['n_domains']:>4}  TD_total={r['td_total']:.6g}")
        print(f"log-log exponent: {curve.exponent:.4f}")
        print(f"SSE  a+bN^2: {curve.sse_quadratic:.6g}   a+bN: {curve.sse_linear:.6g}")
        return EXIT_OK

    nash = nash_equilibrium(s, sf.solver)
    if not nash.converged:
        raise SolverFailure(str(ConvergenceError(nash, "nash")))
    profile = nash.profile
    if args.all_general:
        profile = Profile(profile.q, np.ones(s.n_domains))
    report = total_debt(s, profile)
    bundle["debt"] = {"profile": _profile_dict(profile), **asdict(report)}
    records = [
        {"i": i, "j": j, "pairwise": report.pairwise[i, j], "p_ij": s.p_matrix[i, j]}
        for i in range(s.n_domains) for j in range(s.n_domains) if i != j
    ]
    _write_report(args, bundle, records)
    print(f"TD_total: {report.total:.6g}")
    if report.symmetric_closed_form is not None:
        print(f"symmetric closed form tau*q*N(N-1)*P: {report.symmetric_closed_form:.6g}")
    return EXIT_OK


def cmd_threshold(args) -> int:
    sf, digest = _load_input(args)
    bracket = None
    if args.low is not None or args.high is not None:
        lo, hi = THRESHOLD_BRACKETS[args.param]
        bracket = (args.low if args.low is not None else lo, args.high if args.high is not None else hi)
    try:
        th = corner_threshold(sf.scenario, args.param, bracket, cfg=sf.solver)
    except CornerNeverBreaks as exc:
        bundle = {"metadata": _metadata(digest, "threshold"),
                  "threshold": {"param": args.param, "value": None, "message": str(exc)}}
        _write_report(args, bundle, [{"param": args.param, "value": "", "reference": "", "deviation": ""}])
        print(str(exc))
        return EXIT_OK
    record = {"param": th.param, "value": th.value, "reference": th.reference, "deviation": th.deviation}
    _write_report(args, {"metadata": _metadata(digest, "threshold"), "threshold": record}, [record])
    print(f"corner breaks at {th.param} = {th.value:.6f}")
    if th.reference is not None:
        print(f"reference threshold ~{th.reference}; deviation {th.deviation:+.6f}")
    return EXIT_OK


def cmd_calibrate(args) -> int:
    sf, digest = _load_input(args)
    cfg = sf.dollar_config or DollarConfig()
    report = baseline_report(sf.scenario, sf.solver)
    dollars = [dollar_welfare(n, cfg) for n in args.dollar_n]
    bundle = {
        "metadata": _metadata(digest, "calibrate"),
        "calibration": report,
        "dollar_welfare": [asdict(d) for d in dollars],
    }
    records = [{"quantity": k, "value": v} for k, v in report.items() if k != "g_social_note"]
    _write_report(args, bundle, records)
    print(f"q_NE = {report['q_nash']:.6f} (reference ~{report['q_nash_reference']})  g_NE = {report['g_nash']}")
    print(f"alpha*beta = {report['private_synergy']:.4f} vs kappa/q* = {report['effective_fixed_cost']:.4f}; "
          f"trapped = {report['organization_trapped']}")
    print(f"g_SO = {report['g_social_clamped']} (clamped); unclamped FOC {report['g_social_unclamped_foc']:.4f}; "
          f"reference ~{report['g_social_reference']}")
    print(report["g_social_note"])
    for d in dollars:
        print(f"N={d.n_domains}: ${d.total:,.0f}/year ({d.label})")
        if d.note:
            print(f"  note: {d.note}")
    return EXIT_OK


# -- parser -------------------------------------------------------------------------


def _add_input(p: argparse.ArgumentParser, allow_random: bool = False) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("scenario", nargs="?", help="scenario JSON file")
    src.add_argument("--baseline", action="store_true", help="use the built-in 12-domain baseline")
    if allow_random:
        src.add_argument("--random", type=int, metavar="N", help="random scenario with N domains (needs --seed)")
        p.add_argument("--seed", type=int, help="seed for --random")


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="path for the machine-readable report")
    p.add_argument("--format", choices=("csv", "json"), help="report format (required with --out)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="meshtrap", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="Nash equilibrium, planner optimum, gap and trap diagnosis")
    _add_input(p, allow_random=True)
    p.add_argument("--mode", choices=PLANNER_MODES, default="paper-foc", help="planner mode")
    p.add_argument("--oracle", type=float, metavar="RES", help="also run the grid oracle at this resolution")
    _add_output(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="one-parameter sensitivity sweep")
    _add_input(p)
    p.add_argument("--param", choices=SWEEP_PARAMS, required=True)
    p.add_argument("--low", type=float, required=True)
    p.add_argument("--high", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    _add_output(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("regimes", help="compare governance regimes")
    _add_input(p)
    p.add_argument("--gamma", type=float, default=DEFAULT_BIG_GAMMA, help="central platform cost coefficient")
    p.add_argument("--correction", type=float, default=DEFAULT_HYBRID_CORRECTION, help="hybrid fraction of planner g")
    _add_output(p)
    p.set_defaults(func=cmd_regimes)

    p = sub.add_parser("debt", help="technical debt at Nash, or its scaling in N")
    _add_input(p)
    p.add_argument("--n", type=_parse_n_list, metavar="N1,N2,...", help="scaling curve over these N")
    p.add_argument("--all-general", action="store_true", help="override the profile with g = 1 everywhere")
    _add_output(p)
    p.set_defaults(func=cmd_debt)

    p = sub.add_parser("threshold", help="parameter value where the corner solution breaks")
    _add_input(p)
    p.add_argument("--param", choices=tuple(THRESHOLD_BRACKETS), required=True)
    p.add_argument("--low", type=float, help="lower end of the search bracket")
    p.add_argument("--high", type=float, help="upper end of the search bracket")
    _add_output(p)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("calibrate", help="baseline figures next to the reference ones, plus dollar mapping")
    _add_input(p)
    p.add_argument("--dollar-n", type=_parse_dollar_n, default=[12, 20], metavar="N1,N2,...")
    _add_output(p)
    p.set_defaults(func=cmd_calibrate)
    return parser


def _parse_dollar_n(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _validate_args(parser: argparse.ArgumentParser, args) -> None:
    if (args.out is None) != (args.format is None):
        parser.error("--out and --format must be given together")
    if getattr(args, "random", None) is not None and args.seed is None:
        parser.error("--random requires --seed")
    if getattr(args, "seed", None) is not None and getattr(args, "random", None) is None:
        parser.error("--seed only applies with --random")
    if args.command == "sweep" and args.steps < 2:
        parser.error("--steps must be >= 2")
    if args.command == "solve" and args.oracle is not None and not 0 < args.oracle <= 0.1:
        parser.error("--oracle resolution must lie in (0, 0.1]")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _validate_args(parser, args)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ScenarioParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ScenarioValidationError, DomainError, ValueError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ConvergenceError, OracleCycleError, SolverFailure) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
