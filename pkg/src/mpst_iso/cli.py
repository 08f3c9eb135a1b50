"""Command-line front end: ``mpst check|project|traces|iso|verify``.

Exit codes: 0 success or isomorphic, 1 trace mismatch, 2 I/O or parse
error, 3 semantic error, 4 inconclusive.  Structured output goes to stdout,
diagnostics to stderr.  ``MPST_COLOR=0`` disables ANSI colour.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import corpus_path
from .combinators import applicable_sites, witness_to_json
from .equiv import DEFAULT_BOUND, DEFAULT_UNROLL, ISOMORPHIC, MISMATCH, check_iso, check_lemma1, check_theorem1
from .errors import MPSTError, ParseError, Unmergeable, WellFormednessError
from .global_semantics import trace_set_to_json, traces
from .local_semantics import config_trace_set_to_json, config_traces, delta, identify
from .parser import parse_global, print_local
from .projection import local_to_json, project
from .syntax import Type
from .wellformed import check_formation, check_projectable

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_SEMANTIC = 3
EXIT_UNKNOWN = 4


class _Exit(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


def _color(text: str, code: str) -> str:
    if os.environ.get("MPST_COLOR", "1") == "0" or not sys.stdout.isatty():
        return text
    return f"\033[{code}m{text}\033[0m"


def _emit(data) -> None:
    print(json.dumps(data, indent=2, ensure_ascii=False))


def load_protocol(source: str) -> Type:
    """Read and parse a protocol file; ``corpus:NAME`` names a bundled one."""
    path = corpus_path(source[len("corpus:"):]) if source.startswith("corpus:") else Path(source)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise _Exit(EXIT_INPUT, f"{source}: cannot read file: {exc.strerror or exc}") from None
    try:
        return parse_global(text)
    except ParseError as exc:
        raise _Exit(EXIT_INPUT, f"{source}:{exc}") from None
    except WellFormednessError as exc:
        raise _Exit(EXIT_SEMANTIC, f"{source}:{exc}") from None


def cmd_check(args) -> int:
    g = load_protocol(args.file)
    violations = check_formation(g)
    failures = [] if violations else check_projectable(g)
    if args.json:
        _emit({
            "violations": [v.to_json() for v in violations],
            "projection": [{"participant": r, "path": list(f.path), "message": str(f)} for r, f in failures],
        })
    else:
        for v in violations:
            print(f"{_color('error', '31')} [{v.rule}] at {list(v.path)}: {v.message}")
        for r, f in failures:
            print(f"{_color('error', '31')} [Projection] {f}")
        if not violations and not failures:
            print(f"{_color('ok', '32')} {args.file}: well-formed and projectable")
    return EXIT_SEMANTIC if violations or failures else EXIT_OK


def cmd_project(args) -> int:
    g = load_protocol(args.file)
    try:
        t = project(g, args.role)
    except Unmergeable as exc:
        raise _Exit(EXIT_SEMANTIC, f"{args.file}: {exc.failure}") from None
    if args.json:
        _emit(local_to_json(t))
    else:
        print(print_local(t))
    return EXIT_OK


def cmd_traces(args) -> int:
    g = load_protocol(args.file)
    if args.kind == "global":
        ts = traces(g, args.unroll)
        runs = set(ts.complete) | (set(ts.truncated) if args.include_truncated else set())
        if ts.truncated and not args.include_truncated:
            print(f"note: {len(ts.truncated)} run(s) truncated by the unroll budget", file=sys.stderr)
        if args.identify:
            _emit(config_trace_set_to_json({identify(r) for r in runs}))
        else:
            _emit(trace_set_to_json(runs))
        return EXIT_OK
    try:
        d = delta(g)
    except Unmergeable as exc:
        raise _Exit(EXIT_SEMANTIC, f"{args.file}: {exc.failure}") from None
    cs = config_traces(d, args.unroll)
    if cs.deadlocked:
        print(f"error: {len(cs.deadlocked)} deadlocked execution(s)", file=sys.stderr)
        return EXIT_SEMANTIC
    sigmas = set(cs.complete)
    if args.kind == "config" or args.include_truncated:
        sigmas |= cs.truncated
    _emit(config_trace_set_to_json(sigmas))
    return EXIT_OK


def cmd_iso(args) -> int:
    g1 = load_protocol(args.file1)
    g2 = load_protocol(args.file2)
    try:
        verdict = check_iso(g1, g2, args.bound, args.unroll)
    except Unmergeable as exc:
        raise _Exit(EXIT_SEMANTIC, str(exc.failure)) from None
    _emit(verdict.to_json())
    if verdict.status == ISOMORPHIC:
        return EXIT_OK
    if verdict.status == MISMATCH:
        return EXIT_MISMATCH
    return EXIT_UNKNOWN


def cmd_verify(args) -> int:
    g = load_protocol(args.file)
    try:
        delta(g)
    except Unmergeable as exc:
        raise _Exit(EXIT_SEMANTIC, f"{args.file}: {exc.failure}") from None
    results = {"theorem1": check_theorem1(g, args.unroll), "lemma1": []}
    for site in applicable_sites(g):
        results["lemma1"].append({"site": witness_to_json([site])[0], "holds": check_lemma1(g, site, args.unroll)})
    _emit(results)
    ok = results["theorem1"] and all(r["holds"] for r in results["lemma1"])
    return EXIT_OK if ok else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mpst", description="Multiparty session type toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="formation rules and projectability")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("project", help="project onto one participant")
    p.add_argument("file")
    p.add_argument("--role", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("traces", help="enumerate trace sets as JSON")
    p.add_argument("file")
    p.add_argument("--unroll", type=int, default=DEFAULT_UNROLL)
    p.add_argument("--kind", choices=("global", "config", "denotation"), default="global")
    p.add_argument("--identify", action="store_true", help="print global traces as configuration traces")
    p.add_argument("--include-truncated", action="store_true")
    p.set_defaults(func=cmd_traces)

    p = sub.add_parser("iso", help="search for an isomorphism witness")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    p.add_argument("--unroll", type=int, default=DEFAULT_UNROLL)
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("verify", help="check trace correspondence and trace preservation on one file")
    p.add_argument("file")
    p.add_argument("--unroll", type=int, default=DEFAULT_UNROLL)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "unroll", 0) < 0:
        print("error: --unroll must be non-negative", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except _Exit as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return exc.code
    except MPSTError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC


if __name__ == "__main__":
    sys.exit(main())
