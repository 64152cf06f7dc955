"""Command-line entry point: ``derived-rees SCRIPT [--json] [--bound N] [--range A B]``."""
from __future__ import annotations

import argparse
import json
import random
import sys

from .evaluate import ERROR, EvaluationError, Evaluator, Flags, exit_code, to_json_dict
from .script import ScriptError, parse


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="derived-rees", description="Evaluate a Rees/blow-up report script.")
    p.add_argument("script", help="script file, or - for stdin")
    p.add_argument("--json", action="store_true", help="emit JSON instead of aligned text")
    p.add_argument("--bound", type=int, default=8, help="global enumeration bound (default 8)")
    p.add_argument("--range", type=int, nargs=2, default=(-3, 3), metavar=("A", "B"),
                   help="homological window (default -3 3)")
    p.add_argument("--seed", type=int, default=None, help="seed for randomized scripts")
    return p


def format_text(reports) -> str:
    lines = []
    for r in reports:
        lines.append(f"{r.command}    [{r.timing_ms:.1f} ms]")
        width = max((len(v["name"]) for v in r.verdicts), default=0)
        for v in r.verdicts:
            bounds = ", ".join(f"{k}={v['bounds'][k]}" for k in sorted(v["bounds"]))
            line = f"  {v['name']:<{width}}  {v['status']:<12}  ({bounds})"
            if "witness" in v:
                line += f"  witness: {v['witness']}"
            lines.append(line)
    return "\n".join(lines)


def run(text: str, flags: Flags, as_json: bool, out=None, err=None, source="<script>") -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        script = parse(text)
    except ScriptError as exc:
        print(f"{source}:{exc.line}:{exc.col}: syntax error: {exc.message}", file=err)
        return ERROR
    try:
        reports = Evaluator(flags).run(script)
    except EvaluationError as exc:
        line = text.count("\n", 0, exc.statement.span[0]) + 1
        print(f"{source}:{line}: error: {exc}", file=err)
        return ERROR
    if as_json:
        print(json.dumps(to_json_dict(script, reports, flags), indent=2, sort_keys=True), file=out)
    elif reports:
        print(format_text(reports), file=out)
    return exit_code(reports)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.seed is not None:
        random.seed(args.seed)
    if args.script == "-":
        text, source = sys.stdin.read(), "<stdin>"
    else:
        try:
            with open(args.script, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return ERROR
        source = args.script
    flags = Flags(bound=args.bound, range=tuple(args.range), seed=args.seed)
    return run(text, flags, args.json, source=source)


if __name__ == "__main__":
    sys.exit(main())
