"""Reference PEG interpreter: plain recursive descent over the AST.

This is the oracle the automaton pipeline is checked against, so it stays
deliberately naive.  The packrat variant memoizes on (node, position) and
must give identical answers.
"""
from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass

from .errors import RecursionDepthExceeded
from .expr import (
    Alt, And, Any, Char, Choice, Class, Empty, Expr, Nonterminal, Not, Opt,
    Plus, Seq, Star,
)
from .grammar import Grammar


@dataclass(frozen=True)
class Consumed:
    length: int

    def __str__(self):
        return f"Consumed({self.length})"


@dataclass(frozen=True)
class Fail:
    def __str__(self):
        return "Fail"


FAIL = Fail()
MatchResult = Consumed | Fail


class _Evaluator:
    def __init__(self, g: Grammar, text: str, max_depth: int, memo: bool):
        self.rules = g.rules
        self.alphabet = g.alphabet
        self.text = text
        self.max_depth = max_depth
        self.depth = 0
        self.memo = {} if memo else None

    def run(self, e, pos):
        """End position after matching `e` at `pos`, or -1 on failure."""
        if self.memo is not None:
            key = (id(e), pos)
            hit = self.memo.get(key)
            if hit is None:
                hit = self.memo[key] = self.eval(e, pos)
            return hit
        return self.eval(e, pos)

    def eval(self, e, pos):
        text = self.text
        if isinstance(e, Char):
            return pos + 1 if pos < len(text) and text[pos] == e.char else -1
        if isinstance(e, Seq):
            mid = self.run(e.left, pos)
            return -1 if mid < 0 else self.run(e.right, mid)
        if isinstance(e, Nonterminal):
            self.depth += 1
            if self.depth > self.max_depth:
                raise RecursionDepthExceeded(
                    f"nonterminal nesting exceeded {self.max_depth} at {e.name} (position {pos})")
            try:
                return self.run(self.rules[e.name], pos)
            finally:
                self.depth -= 1
        if isinstance(e, Choice):
            end = self.run(e.first, pos)
            return end if end >= 0 else self.run(e.second, pos)
        if isinstance(e, Empty):
            return pos
        if isinstance(e, Any):
            return pos + 1 if pos < len(text) and text[pos] in self.alphabet else -1
        if isinstance(e, Not):
            return pos if self.run(e.body, pos) < 0 else -1
        if isinstance(e, Star):
            while True:
                end = self.run(e.body, pos)
                if end < 0:
                    return pos
                if end == pos:
                    raise RecursionDepthExceeded("repetition body succeeded without consuming input")
                pos = end
        if isinstance(e, Class):
            return pos + 1 if pos < len(text) and text[pos] in e.chars else -1
        if isinstance(e, Opt):
            end = self.run(e.body, pos)
            return end if end >= 0 else pos
        if isinstance(e, Plus):
            end = self.run(e.body, pos)
            return -1 if end < 0 else self.eval(Star(e.body), end)
        if isinstance(e, And):
            return pos if self.run(e.body, pos) >= 0 else -1
        if isinstance(e, Alt):
            raise TypeError("unordered alternation has no PEG semantics; use the automaton path")
        raise TypeError(f"not a parsing expression: {e!r}")


def consume(g: Grammar, e: Expr, text: str, max_depth: int | None = None,
            memo: bool = False) -> MatchResult:
    """Match `e` against a prefix of `text` under standard PEG semantics.

    The depth guard bounds nonterminal nesting (default ``10*len(text)+100``);
    tripping it raises RecursionDepthExceeded rather than looping.
    """
    if max_depth is None:
        max_depth = 10 * len(text) + 100
    ev = _Evaluator(g, text, max_depth, memo)
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 8 * max_depth + 1000))
    try:
        end = ev.run(e, 0)
    except RecursionError:
        raise RecursionDepthExceeded("Python stack exhausted while evaluating") from None
    finally:
        sys.setrecursionlimit(limit)
    return FAIL if end < 0 else Consumed(end)


def lang_member(g: Grammar, text: str, mode: str = "prefix") -> bool:
    """Membership in L(G): ``prefix`` = the start expression succeeds, ``exact`` = it consumes all."""
    result = consume(g, g.start, text)
    if mode == "prefix":
        return result != FAIL
    if mode == "exact":
        return result == Consumed(len(text))
    raise ValueError(f"mode must be 'prefix' or 'exact', not {mode!r}")


def strings_upto(alphabet, max_len: int):
    """All strings over `alphabet` by increasing length, then lexicographically."""
    symbols = sorted(alphabet)
    for n in range(max_len + 1):
        for tup in itertools.product(symbols, repeat=n):
            yield "".join(tup)


def expr_equiv_bounded(g1: Grammar, g2: Grammar, max_len: int) -> str | None:
    """First string up to `max_len` on which the start expressions' results differ, else None."""
    if g1.alphabet != g2.alphabet:
        raise ValueError("grammars have different alphabets")
    for w in strings_upto(g1.alphabet, max_len):
        if consume(g1, g1.start, w) != consume(g2, g2.start, w):
            return w
    return None
