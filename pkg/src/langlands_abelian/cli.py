"""``langlands-abelian verify <suite>``: run a verification suite and print a JSON report."""
from __future__ import annotations

import argparse
import csv
import json
import sys

from .errors import BadFlag, LanglandsError, UnknownSuite
from .suites import SUITES, Params, run_suite
from .torus_geometry import load_period_matrix
from .torus_groups import load_torus_data


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise BadFlag(message)


def parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise BadFlag(f"cannot read {text!r} as a complex number like 0.3+1.2i") from None


def parse_gamma(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise BadFlag(f"--gamma expects comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="langlands-abelian", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    verify = sub.add_parser("verify", help="run a verification suite")
    verify.add_argument("suite", help=", ".join(SUITES))
    verify.add_argument("--tau", type=str)
    verify.add_argument("--omega", type=str, help="JSON file with a period matrix")
    verify.add_argument("--torus", type=str, help="JSON file with rank and pairing of a torus")
    verify.add_argument("--gamma", type=str, help="flat class a1,...,ag,b1,...,bg")
    verify.add_argument("--q", type=int)
    verify.add_argument("--grid", type=int, default=64)
    verify.add_argument("--max-mode", type=int, default=3)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--samples", type=int, default=20)
    verify.add_argument("--csv", type=str, help="write the suite table (or the checks) as CSV")
    verify.add_argument("--json", type=str, help="also write the report to this file")
    return parser


def params_from_args(args) -> Params:
    if args.tau is not None and args.omega is not None:
        raise BadFlag("give at most one of --tau and --omega")
    for flag in ("grid", "samples"):
        if getattr(args, flag) < 1:
            raise BadFlag(f"--{flag} must be positive")
    if args.max_mode < 0:
        raise BadFlag("--max-mode must be non-negative")
    try:
        omega = load_period_matrix(args.omega) if args.omega else None
        torus = load_torus_data(args.torus) if args.torus else None
    except (OSError, ValueError, KeyError) as exc:
        raise BadFlag(str(exc)) from None
    return Params(
        tau=parse_complex(args.tau) if args.tau is not None else None,
        omega=omega,
        gamma=parse_gamma(args.gamma) if args.gamma else None,
        q=args.q,
        grid=args.grid,
        max_mode=args.max_mode,
        seed=args.seed,
        samples=args.samples,
        torus=torus,
    )


def write_csv(path: str, report) -> None:
    if report.table:
        columns, rows = list(report.table_columns), report.table
    else:
        columns = ["name", "expected", "observed", "residual", "pass"]
        rows = [c.to_json() for c in sorted(report.checks, key=lambda c: c.name)]
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns)
        writer.writeheader()
        writer.writerows(rows)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.suite not in SUITES:
            raise UnknownSuite(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
        params = params_from_args(args)
        report = run_suite(args.suite, params)
    except (BadFlag, UnknownSuite) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except LanglandsError as exc:
        print(f"usage error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(report.to_json(), sort_keys=True, indent=2)
    print(text)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(text + "\n")
    if args.csv:
        write_csv(args.csv, report)
    return 0 if report.overall_pass else 1


if __name__ == "__main__":
    sys.exit(main())
