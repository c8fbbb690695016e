"""Command-line front end.

Exit status: 0 success / accepted / equivalent, 1 negative answer,
2 usage or parse error, 3 resource budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .automata import (
    DFA, bfa_to_dot, dfa_equiv, dfa_from_json, dfa_match, dfa_to_dot, dfa_to_json,
)
from .conversion import lpeg_to_bfa, run_pipeline
from .errors import (
    GrammarError, IllFormedError, LpegError, NotLpegError, RecursionDepthExceeded,
    ResourceLimitExceeded,
)
from .grammar import Grammar, check_wellformed, desugar, format_grammar, is_lpeg, parse_grammar
from .interp import Fail, consume, lang_member, strings_upto
from .regex import RegexSyntaxError, dfa_to_lpeg, parse_regex, regex_to_lpeg

OK, NEGATIVE, USAGE, RESOURCE = 0, 1, 2, 3


class _Usage(Exception):
    pass


def _read(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _Usage(f"cannot read {path}: {exc.strerror}") from None


def _grammar(path: str) -> Grammar:
    try:
        return parse_grammar(_read(path))
    except GrammarError as exc:
        raise _Usage(f"{path}: {exc}") from None


def _dfa(path: str) -> DFA:
    try:
        return dfa_from_json(_read(path))
    except (ValueError, KeyError, TypeError) as exc:
        raise _Usage(f"{path}: not a DFA file ({exc})") from None


def _load_any(path: str):
    """A DFA if the file holds JSON, otherwise a grammar."""
    text = _read(path)
    if text.lstrip().startswith("{"):
        return _dfa(path)
    return _grammar(path)


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


# ---------------------------------------------------------------------------
# subcommands

def cmd_check(args) -> int:
    g = _grammar(args.file)
    judgement = is_lpeg(g)
    print("LPEG: yes" if judgement else "LPEG: no")
    for v in judgement.violations:
        print(f"  {v.rule}: {v.text}  ({v.reason})")
    diags = check_wellformed(desugar(g))
    print("well-formed: yes" if not diags else "well-formed: no")
    for d in diags:
        print(f"  {d}")
    return OK if judgement and not diags else NEGATIVE


def cmd_compile(args) -> int:
    g = _grammar(args.file)
    p = run_pipeline(g, args.mode, minimize=not args.no_minimize, max_states=args.max_states)
    if args.emit_bfa:
        _write(args.emit_bfa, bfa_to_dot(p.bfa))
    d = p.dfa if args.no_minimize else p.minimal
    _write(args.output, dfa_to_json(d) + "\n")
    print(f"{len(d.states)} states", file=sys.stderr)
    return OK


def cmd_match(args) -> int:
    if args.dfa:
        d = _dfa(args.dfa)
    else:
        d = run_pipeline(_grammar(args.grammar), args.mode, max_states=args.max_states).minimal
    accepted = dfa_match(d, args.string)
    print("accepted" if accepted else "rejected")
    return OK if accepted else NEGATIVE


def cmd_run(args) -> int:
    g = _grammar(args.file)
    result = consume(g, g.start, args.string, memo=args.packrat)
    print(result)
    return NEGATIVE if isinstance(result, Fail) else OK


def cmd_regex2lpeg(args) -> int:
    try:
        r = parse_regex(args.regex)
    except RegexSyntaxError as exc:
        raise _Usage(f"bad regex: {exc}") from None
    g = regex_to_lpeg(r, alphabet=args.alphabet, anchored=not args.unanchored)
    sys.stdout.write(format_grammar(g))
    return OK


def cmd_dfa2lpeg(args) -> int:
    sys.stdout.write(format_grammar(dfa_to_lpeg(_dfa(args.file))))
    return OK


def _as_dfa(x, mode, max_states) -> DFA:
    return x if isinstance(x, DFA) else run_pipeline(x, mode, max_states=max_states).minimal


def _member(x, w, mode) -> bool:
    return dfa_match(x, w) if isinstance(x, DFA) else lang_member(x, w, mode)


def cmd_equiv(args) -> int:
    a, b = _load_any(args.a), _load_any(args.b)
    if args.via == "dfa":
        witness = dfa_equiv(_as_dfa(a, args.mode, args.max_states),
                            _as_dfa(b, args.mode, args.max_states))
    else:
        alphabet = set(a.alphabet) | set(b.alphabet)
        witness = next((w for w in strings_upto(alphabet, args.max_len)
                        if _member(a, w, args.mode) != _member(b, w, args.mode)), None)
    if witness is None:
        print("equivalent" if args.via == "dfa" else f"equivalent up to length {args.max_len}")
        return OK
    print(f"not equivalent; counterexample: {json.dumps(witness)}")
    return NEGATIVE


def cmd_export_dot(args) -> int:
    if args.kind == "dfa":
        sys.stdout.write(dfa_to_dot(_dfa(args.file)))
        return OK
    g = _grammar(args.file)
    if args.stage == "bfa":
        sys.stdout.write(bfa_to_dot(lpeg_to_bfa(g, args.mode)))
    else:
        sys.stdout.write(dfa_to_dot(run_pipeline(g, args.mode, max_states=args.max_states).minimal))
    return OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linpeg", description="Linear PEG toolkit: check, compile to DFAs, convert back.")
    sub = parser.add_subparsers(dest="command", required=True)

    def mode(p):
        p.add_argument("--mode", choices=("prefix", "exact"), default="exact",
                       help="language of a grammar: successful prefix match or full match")

    def budget(p):
        p.add_argument("--max-states", type=int, default=100_000,
                       help="DFA state budget (exit 3 when exceeded)")

    p = sub.add_parser("check", help="decide whether a grammar is an LPEG")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("compile", help="compile an LPEG to a DFA (JSON)")
    p.add_argument("file")
    mode(p)
    budget(p)
    p.add_argument("-o", "--output", help="output JSON file (default: stdout)")
    p.add_argument("--emit-bfa", metavar="DOT", help="also write the BFA as Graphviz DOT")
    p.add_argument("--no-minimize", action="store_true")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("match", help="DFA membership of a string")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--dfa", metavar="JSON")
    src.add_argument("--grammar", metavar="FILE")
    mode(p)
    budget(p)
    p.add_argument("string")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("run", help="run the reference PEG interpreter")
    p.add_argument("file")
    p.add_argument("string")
    p.add_argument("--packrat", action="store_true", help="memoize results")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("regex2lpeg", help="translate a regular expression to an LPEG")
    p.add_argument("regex")
    p.add_argument("--alphabet", help="terminal symbols, e.g. 'abc' (default: those in the regex)")
    p.add_argument("--unanchored", action="store_true",
                   help="start from the empty continuation instead of end-of-input")
    p.set_defaults(func=cmd_regex2lpeg)

    p = sub.add_parser("dfa2lpeg", help="translate a DFA (JSON) to an LPEG")
    p.add_argument("file")
    p.set_defaults(func=cmd_dfa2lpeg)

    p = sub.add_parser("equiv", help="compare two grammars or DFAs")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--max-len", type=int, default=8, help="length bound for --via interp")
    p.add_argument("--via", choices=("dfa", "interp"), default="dfa",
                   help="exact product comparison or bounded enumeration")
    mode(p)
    budget(p)
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("export-dot", help="Graphviz DOT for a grammar's automaton or a DFA file")
    p.add_argument("kind", choices=("grammar", "dfa"))
    p.add_argument("file")
    p.add_argument("--stage", choices=("bfa", "dfa"), default="bfa",
                   help="for grammars: which automaton to draw")
    mode(p)
    budget(p)
    p.set_defaults(func=cmd_export_dot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.func(args)
    except _Usage as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except (NotLpegError, IllFormedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return NEGATIVE
    except (ResourceLimitExceeded, RecursionDepthExceeded) as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return RESOURCE
    except LpegError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


def run_cli(argv=None) -> int:
    return main(argv)


if __name__ == "__main__":
    sys.exit(main())
