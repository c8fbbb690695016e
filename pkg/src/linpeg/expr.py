"""Parsing-expression AST.

Nodes are frozen dataclasses so expressions can be shared, hashed and
compared structurally.  Sequences and choices are binary; the parser builds
them right-nested.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union


@dataclass(frozen=True)
class Empty:
    pass


@dataclass(frozen=True)
class Char:
    char: str


@dataclass(frozen=True)
class Any:
    pass


@dataclass(frozen=True)
class Seq:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Choice:
    """Prioritized choice ``first / second``."""
    first: Expr
    second: Expr


@dataclass(frozen=True)
class Star:
    body: Expr


@dataclass(frozen=True)
class Not:
    body: Expr


@dataclass(frozen=True)
class Nonterminal:
    name: str


# sugar, removed by desugar()

@dataclass(frozen=True)
class Class:
    chars: tuple[str, ...]


@dataclass(frozen=True)
class Opt:
    body: Expr


@dataclass(frozen=True)
class Plus:
    body: Expr


@dataclass(frozen=True)
class And:
    body: Expr


@dataclass(frozen=True)
class Alt:
    """Unordered alternation ``first | second``; only built by the conversion pipeline."""
    first: Expr
    second: Expr


Expr = Union[Empty, Char, Any, Seq, Choice, Star, Not, Nonterminal,
             Class, Opt, Plus, And, Alt]

EMPTY = Empty()
ANY = Any()

_UNARY = (Star, Not, Opt, Plus, And)
_BINARY = (Seq, Choice, Alt)


def children(e: Expr) -> tuple[Expr, ...]:
    if isinstance(e, _BINARY):
        return (e.first, e.second) if not isinstance(e, Seq) else (e.left, e.right)
    if isinstance(e, _UNARY):
        return (e.body,)
    return ()


def rebuild(e: Expr, kids) -> Expr:
    """Return a node of the same kind as `e` with new children."""
    if isinstance(e, _BINARY) or isinstance(e, _UNARY):
        return type(e)(*kids)
    return e


def walk(e: Expr) -> Iterator[Expr]:
    """Pre-order traversal."""
    stack = [e]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def subexpr(e: Expr, path) -> Expr:
    for i in path:
        e = children(e)[i]
    return e


def nonterminals(e: Expr) -> set[str]:
    return {n.name for n in walk(e) if isinstance(n, Nonterminal)}


def terminals(e: Expr) -> set[str]:
    out: set[str] = set()
    for n in walk(e):
        if isinstance(n, Char):
            out.add(n.char)
        elif isinstance(n, Class):
            out.update(n.chars)
    return out


def is_nfree(e: Expr) -> bool:
    return not any(isinstance(n, Nonterminal) for n in walk(e))


def uses_any(e: Expr) -> bool:
    return any(isinstance(n, Any) for n in walk(e))


def size(e: Expr) -> int:
    return sum(1 for _ in walk(e))


def seq(*items: Expr) -> Expr:
    """Right-nested sequence; ``seq()`` is the empty expression."""
    if not items:
        return EMPTY
    out = items[-1]
    for item in reversed(items[:-1]):
        out = Seq(item, out)
    return out


def choice(*items: Expr) -> Expr:
    out = items[-1]
    for item in reversed(items[:-1]):
        out = Choice(item, out)
    return out


def literal(text: str) -> Expr:
    return seq(*(Char(c) for c in text)) if text else EMPTY


def flatten_seq(e: Expr, path=()) -> list[tuple[Expr, tuple[int, ...]]]:
    """Items of a (possibly nested) sequence with their paths, left to right."""
    if isinstance(e, Seq):
        return flatten_seq(e.left, path + (0,)) + flatten_seq(e.right, path + (1,))
    return [(e, path)]


# rendering

_PREC = {Choice: 1, Alt: 1, Seq: 2, Not: 3, And: 3, Star: 4, Opt: 4, Plus: 4}

_ESCAPES = {"\n": "\\n", "\t": "\\t", "\\": "\\\\", "'": "\\'", '"': '\\"',
            "[": "\\[", "]": "\\]"}


def escape(c: str) -> str:
    return _ESCAPES.get(c, c)


def render(e: Expr, compact: bool = False) -> str:
    """Render in grammar-file syntax, or in the terse textbook style when `compact`.

    The compact form writes terminals bare and drops spaces (``aAa``, ``B*``);
    it is meant for messages, not for re-parsing.
    """
    return _render(e, compact, 0)


def _render(e: Expr, compact: bool, outer: int) -> str:
    prec = _PREC.get(type(e), 5)
    if isinstance(e, Empty):
        s = "ε" if compact else "''"
    elif isinstance(e, Char):
        s = escape(e.char) if compact else "'" + escape(e.char) + "'"
    elif isinstance(e, Any):
        s = "."
    elif isinstance(e, Nonterminal):
        s = e.name
    elif isinstance(e, Class):
        s = "[" + "".join(escape(c) for c in e.chars) + "]"
    elif isinstance(e, Seq):
        sep = "" if compact else " "
        s = sep.join(_render(item, compact, 3) for item, _ in flatten_seq(e))
    elif isinstance(e, (Choice, Alt)):
        op = "/" if isinstance(e, Choice) else "|"
        sep = op if compact else f" {op} "
        s = _render(e.first, compact, 2) + sep + _render(e.second, compact, 1)
    elif isinstance(e, (Not, And)):
        s = ("!" if isinstance(e, Not) else "&") + _render(e.body, compact, 4)
    else:
        suffix = {Star: "*", Opt: "?", Plus: "+"}[type(e)]
        s = _render(e.body, compact, 5) + suffix
    if prec < outer:
        return "(" + s + ")"
    return s
