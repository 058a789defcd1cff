"""Command-line front end: ``zkfiber example|family|custom``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .complex import ComplexError
from .report import EXAMPLES, LongRunError, Report, cmd_custom, cmd_example, cmd_family, load_custom


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--emit", choices=("text", "json", "m2", "singular"), default="text")
    common.add_argument("--allow-long", action="store_true", help="permit long family rows")
    common.add_argument("--threads", type=int, default=1, metavar="K", help="worker processes for sweeps")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="zkfiber", description="Moment-angle complex and Milnor fiber reports.")
    sub = p.add_subparsers(dest="command", required=True)
    ex = sub.add_parser("example", parents=[common], help="run a named experiment")
    ex.add_argument("name", choices=EXAMPLES)
    fam = sub.add_parser("family", parents=[common], help="rows of the weighted-homogeneous family")
    fam.add_argument("--q-min", type=int, default=2)
    fam.add_argument("--q-max", type=int, default=None)
    fam.add_argument("--n", type=int, default=3)
    cu = sub.add_parser("custom", parents=[common], help="pipeline on a complex from a JSON file")
    cu.add_argument("--input", required=True, type=Path)
    cu.add_argument("--class", dest="classes", action="append", default=[],
                    metavar="LABELS:DEG[:IDX]", help="Massey input class; give three")
    return p


def _emit(reports: list[Report], mode: str) -> str:
    if mode == "json":
        docs = [r.to_document() for r in reports]
        return json.dumps(docs[0] if len(docs) == 1 else docs, indent=2)
    if mode in ("m2", "singular"):
        return "\n".join(r.scripts.get(mode, "") for r in reports)
    return "\n\n".join(r.to_text() for r in reports)


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "example":
            reports = [cmd_example(args.name, args.threads)]
        elif args.command == "family":
            q_max = args.q_min if args.q_max is None else args.q_max
            qs = list(range(args.q_min, q_max + 1))
            rows = cmd_family(qs, args.n, args.threads, args.allow_long)
            reports = [row.report for row in rows]
        else:
            k = load_custom(args.input.read_text())
            reports = [cmd_custom(k, args.classes, args.threads)]
    except LongRunError as exc:
        print(f"zkfiber: {exc}", file=sys.stderr)
        return 2
    except (ComplexError, ValueError, OSError) as exc:
        print(f"zkfiber: error: {exc}", file=sys.stderr)
        return 2
    print(_emit(reports, args.emit))
    return 0 if all(r.passed for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
