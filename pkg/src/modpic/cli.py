"""Command line entry point: ``modpic verify``, ``modpic class`` and ``modpic counts``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from math import comb

from .counting import a_count, even_genus_pair_check, odd_genus_pair_check
from .errors import ModpicError
from .expr import evaluate
from .serialize import serialize
from .theta import ThetaClass
from .verify import SUITES, run_suite

EXPAND_LIMIT = 200_000


class UsageError(Exception):
    pass


def parse_range(text: str) -> range:
    """``"4..30"`` -> range(4, 31); a single integer is a one-point range."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}; expected a..b") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return range(lo, hi + 1)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(2)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="modpic", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES)
    v.add_argument("--g", type=parse_range, default=None, help="genus range a..b")
    v.add_argument("--n", type=parse_range, default=None, help="mark-count range a..b")
    v.add_argument("--format", choices=("json", "text"), default="text")
    v.add_argument("--g2-sign", choices=("minus", "plus"), default="minus")
    v.add_argument("--jobs", type=int, default=int(os.environ.get("MODPIC_JOBS", "1")))
    v.add_argument("--timing", action="store_true", help="include elapsed times (not byte-stable)")

    c = sub.add_parser("class", help="evaluate a class expression and print its class file")
    c.add_argument("expr")
    c.add_argument("--g2-sign", choices=("minus", "plus"), default="minus")

    k = sub.add_parser("counts", help="emit counting tables")
    k.add_argument("--g-range", type=parse_range, required=True)
    k.add_argument("--check", choices=("odd", "even", "a-table"), required=True)
    k.add_argument("--format", choices=("csv", "json"), default="csv")
    return p


def _sign(name: str) -> int:
    return -1 if name == "minus" else 1


def cmd_verify(args: argparse.Namespace, out=None) -> int:
    out = out or sys.stdout
    reports = run_suite(args.suite, args.g, args.n, _sign(args.g2_sign), max(1, args.jobs))
    for rep in reports:
        line = rep.to_json(args.timing) if args.format == "json" else rep.to_text(args.timing)
        print(line, file=out)
    failed = sum(not r.passed for r in reports)
    if args.format == "text":
        print(f"# {len(reports) - failed}/{len(reports)} checks passed", file=out)
    return 1 if failed else 0


def cmd_class(args: argparse.Namespace, out=None) -> int:
    out = out or sys.stdout
    value = evaluate(args.expr, _sign(args.g2_sign))
    if isinstance(value, ThetaClass):
        size = sum(comb(value.g, i) for (i, _), _ in value.items())
        if size > EXPAND_LIMIT:
            raise UsageError(f"theta class would expand to {size} boundary terms")
        value = value.expand()
    print(serialize(value), file=out)
    return 0


def _count_rows(g_range: range, check: str) -> list[dict]:
    rows = []
    for g in g_range:
        if check == "odd" and g % 2 and g >= 3:
            lhs, rhs, nz = odd_genus_pair_check(g)
            rows.append({"g": g, "lhs": lhs, "rhs": rhs, "nonzero": nz})
        elif check == "even" and g % 2 == 0 and g >= 4:
            lhs, rhs, diff, nz = even_genus_pair_check(g)
            rows.append({"g": g, "lhs": lhs, "rhs": rhs, "difference": diff, "nonzero": nz})
        elif check == "a-table":
            for m in range(1, 5):
                for n in range(1, 5):
                    if (g + m + n - 1) % 2 == 0 and g + m + n - 1 >= 2:
                        rows.append({"g": g, "m": m, "n": n, "d": (g + m + n - 1) // 2,
                                     "A": a_count(g, m, n)})
    return rows


def cmd_counts(args: argparse.Namespace, out=None) -> int:
    out = out or sys.stdout
    rows = _count_rows(args.g_range, args.check)
    if args.format == "json":
        for r in rows:
            print(json.dumps(r, separators=(",", ":")), file=out)
        return 0
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    out.write(buf.getvalue())
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "class":
            return cmd_class(args)
        return cmd_counts(args)
    except (ModpicError, UsageError) as exc:
        print(f"modpic: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
