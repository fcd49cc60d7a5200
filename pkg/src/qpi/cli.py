"""Command-line front end: list, verify, sweep, and limit studies.

Exit codes encode the worst verification status seen: 0 for PASS, 1 for
FAIL, 2 for MISMATCH, 3 for SKIPPED or an operational error.  Reports
print as aligned human rows, canonical JSON (byte-stable across runs),
or CSV with a fixed column order.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import registry
from .errors import QpiError

EXIT_BY_STATUS = {"PASS": 0, "FAIL": 1, "MISMATCH": 2, "SKIPPED": 3}
EXIT_ERROR = 3


def _fraction(text: str) -> Fraction:
    """Parse a decimal or p/r rational literal."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a decimal or rational literal: {text!r}")


def _q_list(text: str) -> "list[Fraction]":
    try:
        return [Fraction(part) for part in text.split(",") if part.strip()]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a comma list of q values: {text!r}")


def _parse_filter(text: str) -> "tuple[str, str]":
    key, sep, value = text.partition("=")
    if not sep or key not in ("family", "id"):
        raise argparse.ArgumentTypeError(
            f"filter must be family=... or id=..., got {text!r}"
        )
    return key, value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qpi",
        description="Verify double series for pi and their q-analogues.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision-bits", type=int, default=registry.DEFAULT_PRECISION)
    common.add_argument("--tol", type=_fraction, default=registry.DEFAULT_TOL)
    common.add_argument("--max-terms", type=int, default=registry.DEFAULT_MAX_TERMS)
    common.add_argument(
        "--format", choices=("human", "json", "csv"), default="human", dest="format_"
    )

    sub = parser.add_subparsers(dest="command", required=True)

    p_list = sub.add_parser("list", help="print the identity catalog")
    p_list.add_argument("--filter", type=_parse_filter, default=None)

    p_verify = sub.add_parser("verify", parents=[common], help="verify one identity")
    p_verify.add_argument("id")
    p_verify.add_argument("--q", type=_fraction, default=None)
    p_verify.add_argument("--rational", action="store_true")
    p_verify.add_argument(
        "--param", action="append", default=[], metavar="NAME=VALUE",
        help="terminating-identity parameter, repeatable",
    )

    p_all = sub.add_parser("verify-all", parents=[common], help="verify the catalog")
    p_all.add_argument("--family", choices=registry.FAMILIES, default=None)
    p_all.add_argument("--filter", type=_parse_filter, default=None)
    p_all.add_argument("--q", type=_fraction, default=None)
    p_all.add_argument("--rational", action="store_true")
    p_all.add_argument(
        "--seed", type=int, default=None,
        help="regenerate parameter draws from this seed instead of the committed table",
    )

    p_sweep = sub.add_parser("sweep", parents=[common], help="verify one q-identity over a q list")
    p_sweep.add_argument("id")
    p_sweep.add_argument("--q", type=_q_list, required=True, metavar="Q1,Q2,...")

    p_limit = sub.add_parser("limit", parents=[common], help="q->1 limit study for a pair")
    p_limit.add_argument("pair", choices=registry.LIMIT_PAIR_IDS)

    return parser


# output helpers


def _short(number: str, width: int = 14) -> str:
    """Clip a decimal string for table rows; full values live in json/csv."""
    if "e" in number:
        mantissa, _, exponent = number.partition("e")
        keep = max(3, width - len(exponent) - 1)
        return f"{mantissa[:keep]}e{exponent}"
    return number if len(number) <= width else number[:width]


def _params_cell(params: dict) -> str:
    return " ".join(f"{k}={v}" for k, v in sorted(params.items()))


def _print_reports_human(reports: Sequence[registry.VerificationReport]) -> None:
    for r in reports:
        cell = _params_cell(r.params)
        row = (
            f"{r.id:<10} {r.status:<8} residual {_short(r.abs_residual):<15}"
            f" terms {r.lhs_terms}/{r.rhs_terms}"
        )
        if cell:
            row += f"  [{cell}]"
        if r.reason:
            row += f"  ({r.reason})"
        print(row)
    counts: "dict[str, int]" = {}
    for r in reports:
        counts[r.status] = counts.get(r.status, 0) + 1
    summary = " ".join(f"{status}={counts[status]}" for status in sorted(counts))
    print(f"summary: {summary}")


def _print_report_detail(r: registry.VerificationReport) -> None:
    print(f"{r.id}  {r.status}  ({r.precision_bits} bits, {r.wall_time:.3f}s)")
    print(f"  params:       {_params_cell(r.params) or '(none)'}")
    print(f"  lhs:          {r.lhs}")
    print(f"  rhs:          {r.rhs}")
    print(f"  abs residual: {r.abs_residual}")
    print(f"  rel residual: {r.rel_residual}")
    print(f"  lhs tail:     {r.lhs_tail}")
    print(f"  rhs tail:     {r.rhs_tail}")
    print(f"  terms:        lhs {r.lhs_terms}, rhs {r.rhs_terms}")
    if r.reason:
        print(f"  reason:       {r.reason}")


def _print_reports_csv(reports: Sequence[registry.VerificationReport]) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(registry.REPORT_FIELDS)
    for r in reports:
        row = []
        for name in registry.REPORT_FIELDS:
            value = getattr(r, name)
            row.append(_params_cell(value) if name == "params" else value)
        writer.writerow(row)
    sys.stdout.write(buffer.getvalue())


def _emit_reports(reports: Sequence[registry.VerificationReport], format_: str,
                  detail: bool = False) -> int:
    if format_ == "json":
        print(registry.reports_to_json(reports))
    elif format_ == "csv":
        _print_reports_csv(reports)
    elif detail and len(reports) == 1:
        _print_report_detail(reports[0])
    else:
        _print_reports_human(reports)
    if not reports:
        return 0
    return max(EXIT_BY_STATUS[r.status] for r in reports)


# commands


def cmd_list(args: argparse.Namespace) -> int:
    specs = sorted(registry.catalog().values(), key=lambda s: s.id)
    if args.filter is not None:
        key, value = args.filter
        if key == "family":
            specs = [s for s in specs if s.family == value]
        else:
            specs = [s for s in specs if s.id == value]
    for spec in specs:
        print(f"{spec.id:<10} {spec.family:<18} {spec.expected_status:<9} {spec.citation}")
    print(f"{len(specs)} identities")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    params: "dict[str, Any]" = {}
    for item in args.param:
        name, sep, value = item.partition("=")
        if not sep:
            raise QpiError(f"--param needs NAME=VALUE, got {item!r}")
        params[name] = int(value) if name == "n" else Fraction(value)
    if args.q is not None:
        params["q"] = args.q
    report = registry.verify(
        args.id, params, args.tol, args.max_terms,
        precision_bits=args.precision_bits, rational=args.rational,
    )
    return _emit_reports([report], args.format_, detail=True)


def cmd_verify_all(args: argparse.Namespace) -> int:
    family = args.family
    if args.filter is not None:
        key, value = args.filter
        if key == "family":
            family = value
        else:
            report = registry.verify(
                value, {"q": args.q} if args.q is not None else {},
                args.tol, args.max_terms,
                precision_bits=args.precision_bits, rational=args.rational,
            )
            return _emit_reports([report], args.format_)
    draws = None
    if args.seed is not None:
        draws = registry.generate_param_draws(args.seed)["draws"]
    reports = registry.verify_all(
        family, args.tol, args.max_terms,
        q=args.q, precision_bits=args.precision_bits,
        rational=args.rational, draws=draws,
    )
    return _emit_reports(reports, args.format_)


def cmd_sweep(args: argparse.Namespace) -> int:
    reports = registry.sweep_q(
        args.id, args.q, args.tol, args.max_terms,
        precision_bits=args.precision_bits,
    )
    return _emit_reports(reports, args.format_)


def _study_to_dict(study: registry.LimitStudy) -> dict:
    return {
        "pair_id": study.pair_id,
        "q_id": study.q_id,
        "classical_id": study.classical_id,
        "orientation": study.orientation,
        "classical_lhs": study.classical_lhs,
        "rungs": [
            {"j": r.j, "q": r.q, "q_lhs": r.q_lhs, "error": r.error, "note": r.note}
            for r in study.rungs
        ],
        "verdict": study.verdict,
    }


def cmd_limit(args: argparse.Namespace) -> int:
    study = registry.limit_study(
        args.pair, max_terms=args.max_terms, precision_bits=args.precision_bits
    )
    if args.format_ == "json":
        print(json.dumps(_study_to_dict(study), sort_keys=True, indent=2))
    elif args.format_ == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(("j", "q", "q_lhs", "error", "note"))
        for rung in study.rungs:
            writer.writerow((rung.j, rung.q, rung.q_lhs, rung.error, rung.note))
        sys.stdout.write(buffer.getvalue())
    else:
        print(
            f"{study.pair_id}: {study.q_id} against {study.classical_id}"
            f" (orientation {study.orientation})"
        )
        print(f"classical lhs = {study.classical_lhs}")
        print(f"{'j':>3} {'q':>10} {'q lhs':>22} {'error':>15}  note")
        for rung in study.rungs:
            print(
                f"{rung.j:>3} {rung.q:>10} {_short(rung.q_lhs, 22):>22}"
                f" {_short(rung.error):>15}  {rung.note}"
            )
        print(f"verdict: {study.verdict}")
    return 0 if study.verdict in ("decreasing", "divergent") else EXIT_ERROR


_COMMANDS = {
    "list": cmd_list,
    "verify": cmd_verify,
    "verify-all": cmd_verify_all,
    "sweep": cmd_sweep,
    "limit": cmd_limit,
}


def main(argv: "Sequence[str] | None" = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except QpiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
