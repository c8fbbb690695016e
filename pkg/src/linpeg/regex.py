"""Regular expressions: parsing, a derivative matcher, translation to LPEGs
and extraction from DFAs by state elimination."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

from .automata import DFA
from .expr import (
    ANY, EMPTY, Choice, Expr, Nonterminal, Not, Seq, Char as PChar, size,
)
from .grammar import FreshNames, Grammar


@dataclass(frozen=True)
class Epsilon:
    pass


@dataclass(frozen=True)
class EmptySet:
    pass


@dataclass(frozen=True)
class Symbol:
    char: str


@dataclass(frozen=True)
class Concat:
    left: Regex
    right: Regex


@dataclass(frozen=True)
class Union_:
    left: Regex
    right: Regex


@dataclass(frozen=True)
class Kleene:
    body: Regex


Regex = Union[Epsilon, EmptySet, Symbol, Concat, Union_, Kleene]

EPS = Epsilon()
NULL = EmptySet()


# smart constructors; they only apply identities that keep the language

def cat(a: Regex, b: Regex) -> Regex:
    if a == NULL or b == NULL:
        return NULL
    if a == EPS:
        return b
    if b == EPS:
        return a
    if isinstance(a, Concat):        # keep concatenations right-nested
        return Concat(a.left, cat(a.right, b))
    return Concat(a, b)


def _alternatives(r: Regex) -> list:
    if isinstance(r, Union_):
        return _alternatives(r.left) + _alternatives(r.right)
    return [r]


def alt(a: Regex, b: Regex) -> Regex:
    if a == NULL:
        return b
    if b == NULL:
        return a
    items = []
    for r in _alternatives(a) + _alternatives(b):
        if r not in items:
            items.append(r)
    if EPS in items and any(nullable(r) for r in items if r != EPS):
        items.remove(EPS)
    out = items[-1]
    for r in reversed(items[:-1]):
        out = Union_(r, out)
    return out


def star(r: Regex) -> Regex:
    if r in (EPS, NULL):
        return EPS
    if isinstance(r, Kleene):
        return r
    return Kleene(r)


def cat_all(*items: Regex) -> Regex:
    out = EPS
    for r in reversed(items):
        out = cat(r, out)
    return out


def symbols(r: Regex) -> set[str]:
    if isinstance(r, Symbol):
        return {r.char}
    if isinstance(r, (Concat, Union_)):
        return symbols(r.left) | symbols(r.right)
    if isinstance(r, Kleene):
        return symbols(r.body)
    return set()


def regex_size(r: Regex) -> int:
    if isinstance(r, (Concat, Union_)):
        return 1 + regex_size(r.left) + regex_size(r.right)
    if isinstance(r, Kleene):
        return 1 + regex_size(r.body)
    return 1


# ---------------------------------------------------------------------------
# derivative matcher (the regex oracle)

@lru_cache(maxsize=None)
def nullable(r: Regex) -> bool:
    if isinstance(r, (Epsilon, Kleene)):
        return True
    if isinstance(r, Concat):
        return nullable(r.left) and nullable(r.right)
    if isinstance(r, Union_):
        return nullable(r.left) or nullable(r.right)
    return False


@lru_cache(maxsize=None)
def deriv(r: Regex, a: str) -> Regex:
    """Brzozowski derivative: the words w with a·w in L(r)."""
    if isinstance(r, Symbol):
        return EPS if r.char == a else NULL
    if isinstance(r, Concat):
        d = cat(deriv(r.left, a), r.right)
        return alt(d, deriv(r.right, a)) if nullable(r.left) else d
    if isinstance(r, Union_):
        return alt(deriv(r.left, a), deriv(r.right, a))
    if isinstance(r, Kleene):
        return cat(deriv(r.body, a), r)
    return NULL


def matches(r: Regex, word: str) -> bool:
    for a in word:
        r = deriv(r, a)
        if r == NULL:
            return False
    return nullable(r)


# ---------------------------------------------------------------------------
# text form

_SPECIAL = set("|()*\\")


class RegexSyntaxError(ValueError):
    pass


def parse_regex(text: str) -> Regex:
    """``|`` union, juxtaposition, postfix ``*``, parentheses, ``\\`` escapes.

    An empty operand (``()``, ``a|``, the empty string) is ε; ``∅`` is the
    empty language.
    """
    pos = 0

    def peek():
        return text[pos] if pos < len(text) else None

    def union():
        nonlocal pos
        r = concat()
        while peek() == "|":
            pos += 1
            r = Union_(r, concat())
        return r

    def concat():
        items = []
        while peek() is not None and peek() not in "|)":
            items.append(postfix())
        if not items:
            return EPS
        out = items[-1]
        for r in reversed(items[:-1]):
            out = Concat(r, out)
        return out

    def postfix():
        nonlocal pos
        r = atom()
        while peek() == "*":
            pos += 1
            r = Kleene(r)
        return r

    def atom():
        nonlocal pos
        c = peek()
        if c == "(":
            pos += 1
            r = union()
            if peek() != ")":
                raise RegexSyntaxError(f"missing ')' at position {pos}")
            pos += 1
            return r
        if c == "*":
            raise RegexSyntaxError(f"'*' with nothing to repeat at position {pos}")
        if c == "\\":
            if pos + 1 >= len(text):
                raise RegexSyntaxError("dangling '\\' at end of pattern")
            pos += 2
            return Symbol(text[pos - 1])
        pos += 1
        return NULL if c == "∅" else Symbol(c)

    r = union()
    if pos != len(text):
        raise RegexSyntaxError(f"unexpected {text[pos]!r} at position {pos}")
    return r


_RPREC = {Union_: 1, Concat: 2, Kleene: 3}


def show_regex(r: Regex, outer: int = 0) -> str:
    """Inverse of parse_regex up to associativity."""
    if isinstance(r, Epsilon):
        return "()"
    if isinstance(r, EmptySet):
        return "∅"
    if isinstance(r, Symbol):
        return "\\" + r.char if r.char in _SPECIAL or r.char == "∅" else r.char
    p = _RPREC[type(r)]
    if isinstance(r, Kleene):
        s = show_regex(r.body, 3) + "*"
    elif isinstance(r, Concat):
        s = show_regex(r.left, 2) + show_regex(r.right, 2)
    else:
        s = show_regex(r.left, 1) + "|" + show_regex(r.right, 1)
    return "(" + s + ")" if p < outer else s


# ---------------------------------------------------------------------------
# regex -> LPEG

class _Builder:
    def __init__(self, rules: dict, alphabet):
        self.rules = dict(rules)
        self.alphabet = frozenset(alphabet)
        self.fresh = FreshNames(rules)


def _pi(r: Regex, b: _Builder, cont: Expr, share: int | None) -> Expr:
    """Start expression of Π(r, G) where G has start `cont`; rules accumulate in `b`."""
    if isinstance(r, Epsilon):
        return cont
    if isinstance(r, Symbol):
        return Seq(PChar(r.char), cont)
    if isinstance(r, EmptySet):
        return Seq(Not(EMPTY), cont)
    if isinstance(r, Concat):
        return _pi(r.left, b, _pi(r.right, b, cont, share), share)
    if isinstance(r, Union_):
        if share is not None and size(cont) > share and not isinstance(cont, Nonterminal):
            name = b.fresh("K")
            b.rules[name] = cont
            cont = Nonterminal(name)
        return Choice(_pi(r.left, b, cont, share), _pi(r.right, b, cont, share))
    if isinstance(r, Kleene):
        name = b.fresh("A")
        b.rules[name] = None                  # reserve; filled below
        body = _pi(r.body, b, Nonterminal(name), share)
        b.rules[name] = Choice(body, cont)
        return Nonterminal(name)
    raise TypeError(f"not a regex: {r!r}")


def pi_regex(r: Regex, g: Grammar) -> Grammar:
    """The continuation translation Π(r, G), case by case."""
    b = _Builder(g.rules, g.alphabet | symbols(r))
    start = _pi(r, b, g.start, None)
    return Grammar(b.alphabet, b.rules, start)


def without_empty_word(r: Regex) -> Regex:
    """A regex for L(r) minus {ε}."""
    if isinstance(r, (Epsilon, EmptySet)):
        return NULL
    if isinstance(r, Symbol):
        return r
    if isinstance(r, Union_):
        return alt(without_empty_word(r.left), without_empty_word(r.right))
    if isinstance(r, Concat):
        if nullable(r.left) and nullable(r.right):
            return alt(cat(without_empty_word(r.left), r.right), without_empty_word(r.right))
        return r
    body = without_empty_word(r.body)
    return cat(body, star(body))


def normalize_stars(r: Regex) -> Regex:
    """Rewrite so no starred body accepts ε (which would make Π left-recursive)."""
    if isinstance(r, Concat):
        return cat(normalize_stars(r.left), normalize_stars(r.right))
    if isinstance(r, Union_):
        return alt(normalize_stars(r.left), normalize_stars(r.right))
    if isinstance(r, Kleene):
        return star(without_empty_word(normalize_stars(r.body)))
    return r


def regex_to_lpeg(r: Regex, alphabet=None, anchored: bool = True,
                  share: int | None = 12) -> Grammar:
    """An LPEG whose exact-mode language is L(r).

    The continuation starts as ``!.`` (end of input) when `anchored`, so a
    prefix match of one alternative cannot hide a longer one.  Starred
    bodies are made ε-free first.  Continuations bigger than `share` nodes
    are bound to a fresh nonterminal before a union duplicates them.
    """
    alphabet = frozenset(symbols(r) if alphabet is None else alphabet) | symbols(r)
    end = Not(ANY) if anchored and alphabet else EMPTY
    b = _Builder({}, alphabet)
    start = _pi(normalize_stars(r), b, end, share)
    return Grammar(alphabet, b.rules, start)


# ---------------------------------------------------------------------------
# DFA -> regex

def dfa_to_regex(d: DFA) -> Regex:
    """State elimination on the generalized automaton of `d`."""
    live = _live_states(d)
    start, final = object(), object()
    edges: dict = {}

    def add(p, q, r):
        edges[(p, q)] = alt(edges.get((p, q), NULL), r)

    if d.start in live:
        add(start, d.start, EPS)
    for p in live:
        for a in d.alphabet:
            q = d.transitions[p][a]
            if q in live:
                add(p, q, Symbol(a))
        if p in d.accepting:
            add(p, final, EPS)

    remaining = [q for q in d.states if q in live]
    while remaining:
        def cost(q):
            ins = sum(1 for (p, t) in edges if t == q and p != q)
            outs = sum(1 for (p, t) in edges if p == q and t != q)
            return (ins * outs, remaining.index(q))
        q = min(remaining, key=cost)
        remaining.remove(q)
        loop = star(edges.pop((q, q), NULL))
        ins = [(p, r) for (p, t), r in edges.items() if t == q]
        outs = [(t, r) for (p, t), r in edges.items() if p == q]
        for p, _ in ins:
            del edges[(p, q)]
        for t, _ in outs:
            del edges[(q, t)]
        for p, r_in in ins:
            for t, r_out in outs:
                add(p, t, cat_all(r_in, loop, r_out))
    return edges.get((start, final), NULL)


def _live_states(d: DFA) -> set:
    """States reachable from the start that can reach an accepting state."""
    reach, stack = {d.start}, [d.start]
    while stack:
        p = stack.pop()
        for q in d.transitions[p].values():
            if q not in reach:
                reach.add(q)
                stack.append(q)
    back: dict = {}
    for p in d.states:
        for q in d.transitions[p].values():
            back.setdefault(q, set()).add(p)
    coreach = set(d.accepting)
    stack = list(coreach)
    while stack:
        q = stack.pop()
        for p in back.get(q, ()):
            if p not in coreach:
                coreach.add(p)
                stack.append(p)
    return reach & coreach


def dfa_to_lpeg(d: DFA) -> Grammar:
    return regex_to_lpeg(dfa_to_regex(d), alphabet=d.alphabet)
