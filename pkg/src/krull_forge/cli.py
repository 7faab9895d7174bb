"""Command-line front end: ``krull-forge realize | verify | demo``.

Exit codes: 0 success, 1 a suite failed (or a control did not match),
2 malformed flags or group spec.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from krull_forge.abelian import GroupSpecError, parse_group
from krull_forge.pipeline import SUITES, full_pipeline, run_verify


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _adversarial(text: str) -> str:
    if text in ("none", "identity"):
        return text
    if text.startswith("cycle:"):
        try:
            k = int(text.split(":", 1)[1])
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad cycle length in {text!r}") from None
        if not 1 <= k <= 12:
            raise argparse.ArgumentTypeError("cycle length must lie in [1, 12]")
        return text
    raise argparse.ArgumentTypeError(f"expected none, identity or cycle:k, got {text!r}")


def dump_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _write_json(path: str, report: dict) -> None:
    text = dump_json(report)
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _print_suites(report: dict) -> None:
    for s in report["suites"]:
        line = f"  {s['name']:<18} {s['verdict']:<5} (samples={s['samples']})"
        if "expected" in s["details"]:
            mark = "ok" if s["details"]["control_matched"] else "MISMATCH"
            line += f"  expected {s['details']['expected']}: {mark}"
        print(line)
        for w in s["witnesses"][:2]:
            print(f"      witness: {w}")


def cmd_realize(args: argparse.Namespace) -> int:
    try:
        parse_group(args.group)
    except GroupSpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = full_pipeline(args.group, args.orbits, args.bound, args.samples, args.seed).to_dict()
    gt = report["class_group_of_T"]
    print(f"group {args.group!r} -> {gt['requested']['text']}, orbits={args.orbits}, seed={args.seed}")
    _print_suites(report)
    for t in report["prime_tallies"]:
        print(f"  class {t['class']}: {t['distinct_primes']} distinct primes")
    print(f"G(T) = {gt['text']} ({'matches' if gt['matches_requested'] else 'DOES NOT MATCH'} the requested group)")
    print(f"verdict: {report['verdict']}")
    if args.json:
        _write_json(args.json, report)
    return 0 if report["verdict"] == "pass" else 1


def cmd_verify(args: argparse.Namespace) -> int:
    if args.suite != "all" and args.suite not in SUITES:
        print(f"error: unknown suite {args.suite!r}; choose from all, {', '.join(sorted(SUITES))}", file=sys.stderr)
        return 2
    try:
        parse_group(args.group)
    except GroupSpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = run_verify(
        args.suite, args.group, args.orbits, args.bound, args.samples, args.seed, args.adversarial
    ).to_dict()
    print(f"verify {args.suite} on {args.group!r} (adversarial={args.adversarial}, seed={args.seed})")
    _print_suites(report)
    print(f"verdict: {report['verdict']}")
    if args.json:
        _write_json(args.json, report)
    return 0 if report["verdict"] == "pass" else 1


def cmd_demo(args: argparse.Namespace) -> int:
    from krull_forge.demo import transcript

    try:
        G = parse_group(args.group)
    except GroupSpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for line in transcript(G):
        print(line)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="krull-forge",
        description="Realize a finitely generated abelian group as the class group of a simple Dedekind domain.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, group_required: bool) -> None:
        if group_required:
            p.add_argument("--group", required=True, help='group spec, e.g. "Z^2 x Z/4" or "0"')
        else:
            p.add_argument("--group", default="Z/2", help='group spec (default "Z/2")')
        p.add_argument("--orbits", type=_positive, default=1, help="number of shift orbits per class (default 1)")
        p.add_argument("--bound", type=_positive, default=1000, help="orbit/period search bound (default 1000)")
        p.add_argument("--samples", type=_positive, default=200, help="samples per suite (default 200)")
        p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
        p.add_argument("--json", metavar="PATH", help="write the JSON report to PATH ('-' for stdout)")

    realize = sub.add_parser("realize", help="run the full realization pipeline")
    common(realize, group_required=True)
    realize.set_defaults(func=cmd_realize)

    verify = sub.add_parser("verify", help="run individual verification suites")
    common(verify, group_required=False)
    verify.add_argument("--suite", default="all", help=f"all or one of: {', '.join(sorted(SUITES))}")
    verify.add_argument("--adversarial", type=_adversarial, default="none", help="none, identity or cycle:k")
    verify.set_defaults(func=cmd_verify)

    demo = sub.add_parser("demo", help="print an annotated walkthrough")
    demo.add_argument("--group", default="Z/2", help='group spec (default "Z/2")')
    demo.set_defaults(func=cmd_demo)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
