"""Grammars: file parsing, desugaring, the LPEG judgement and well-formedness."""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import GrammarError
from .expr import (
    ANY, EMPTY, Alt, And, Any, Char, Choice, Class, Empty, Expr, Nonterminal,
    Not, Opt, Plus, Seq, Star, children, choice, escape, flatten_seq,
    is_nfree, literal, nonterminals, rebuild, render, seq, terminals,
    uses_any, walk,
)


@dataclass(frozen=True)
class Grammar:
    """The 4-tuple (N, Σ, P, e_s).

    `rules` keeps insertion order; treat it as read-only.  N is derived from
    the rule keys.
    """
    alphabet: frozenset
    rules: dict
    start: Expr

    def __post_init__(self):
        object.__setattr__(self, "alphabet", frozenset(self.alphabet))
        for name, body in self.rules.items():
            self._check_expr(body, name)
        self._check_expr(self.start, "start")

    def _check_expr(self, e, where):
        missing = nonterminals(e) - self.rules.keys()
        if missing:
            raise GrammarError(f"{where}: undefined nonterminal {sorted(missing)[0]!r}")
        stray = terminals(e) - self.alphabet
        if stray:
            raise GrammarError(f"{where}: terminal {sorted(stray)[0]!r} not in alphabet")
        if not self.alphabet and uses_any(e):
            raise GrammarError(f"{where}: '.' used with an empty alphabet")

    @property
    def nonterminals(self) -> frozenset:
        return frozenset(self.rules)

    def expressions(self):
        """(owner, expression) pairs: every rule body, then the start expression."""
        yield from self.rules.items()
        yield "start", self.start

    def replace(self, **changes) -> Grammar:
        fields = {"alphabet": self.alphabet, "rules": self.rules, "start": self.start}
        fields.update(changes)
        return Grammar(**fields)

    def __str__(self):
        return format_grammar(self)


class FreshNames:
    """Collision-free name supply: ``base_1``, ``base_2``, ..."""

    def __init__(self, used):
        self.used = set(used)

    def __call__(self, base: str) -> str:
        k = 1
        while f"{base}_{k}" in self.used:
            k += 1
        name = f"{base}_{k}"
        self.used.add(name)
        return name


# ---------------------------------------------------------------------------
# grammar files

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<directive>%[A-Za-z]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<arrow><-)
  | (?P<lit>'(?:\\.|[^'\\\n])*'|"(?:\\.|[^"\\\n])*")
  | (?P<cls>\[(?:\\.|[^\]\\\n])*\])
  | (?P<op>[/?*+!&().])
""", re.VERBOSE)

_UNESCAPE = {"n": "\n", "t": "\t", "\\": "\\", "'": "'", '"': '"', "[": "[", "]": "]"}


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _unescape(body: str, line: int, col: int) -> list[str]:
    out = []
    i = 0
    while i < len(body):
        c = body[i]
        if c == "\\":
            nxt = body[i + 1:i + 2]
            if nxt not in _UNESCAPE:
                raise GrammarError(f"unknown escape \\{nxt}", line, col + i)
            out.append(_UNESCAPE[nxt])
            i += 2
        else:
            out.append(c)
            i += 1
    return out


def _tokenize(text: str):
    toks: list[_Tok] = []
    directives: list[tuple[str, str, int]] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise GrammarError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind == "directive":
            end = text.find("\n", pos)
            end = len(text) if end < 0 else end
            rest = text[m.end():end]
            directives.append((m.group()[1:], rest, line))
            pos = end
            continue
        if kind not in ("ws", "comment"):
            toks.append(_Tok(kind, m.group(), line, col))
        newlines = m.group().count("\n")
        if newlines:
            line += newlines
            line_start = m.start() + m.group().rfind("\n") + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks, directives


class _Parser:
    def __init__(self, toks):
        self.toks = toks
        self.i = 0

    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, kind, text=None):
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text or kind
            got = tok.text or "end of input"
            raise GrammarError(f"expected {want!r}, found {got!r}", tok.line, tok.col)
        return self.take()

    def at_rule_start(self):
        return self.peek().kind == "ident" and self.peek(1).kind == "arrow"

    def rules(self):
        out = []
        while self.peek().kind != "eof":
            name = self.expect("ident")
            self.expect("arrow")
            out.append((name, self.choice()))
        return out

    def choice(self):
        alts = [self.sequence()]
        while self.peek().kind == "op" and self.peek().text == "/":
            self.take()
            alts.append(self.sequence())
        return choice(*alts)

    def sequence(self):
        items = []
        while True:
            tok = self.peek()
            if tok.kind == "eof" or self.at_rule_start():
                break
            if tok.kind == "op" and tok.text in "/)":
                break
            items.append(self.prefix())
        return seq(*items)

    def prefix(self):
        tok = self.peek()
        if tok.kind == "op" and tok.text in "!&":
            self.take()
            body = self.prefix()
            return Not(body) if tok.text == "!" else And(body)
        return self.suffix()

    def suffix(self):
        e = self.primary()
        while self.peek().kind == "op" and self.peek().text in "?*+":
            op = self.take().text
            e = {"?": Opt, "*": Star, "+": Plus}[op](e)
        return e

    def primary(self):
        tok = self.take()
        if tok.kind == "ident":
            return Nonterminal(tok.text)
        if tok.kind == "lit":
            return literal("".join(_unescape(tok.text[1:-1], tok.line, tok.col + 1)))
        if tok.kind == "cls":
            chars = _unescape(tok.text[1:-1], tok.line, tok.col + 1)
            return Class(tuple(dict.fromkeys(chars)))
        if tok.kind == "op" and tok.text == ".":
            return ANY
        if tok.kind == "op" and tok.text == "(":
            e = self.choice()
            self.expect("op", ")")
            return e
        got = tok.text or "end of input"
        raise GrammarError(f"unexpected {got!r}", tok.line, tok.col)


def parse_grammar(text: str) -> Grammar:
    """Parse grammar-file source.

    >>> g = parse_grammar("A <- 'a' A / 'b'")
    >>> render(g.rules["A"])
    "'a' A / 'b'"
    """
    toks, directives = _tokenize(text)
    parser = _Parser(toks)
    rule_toks = parser.rules()

    rules: dict[str, Expr] = {}
    for name_tok, body in rule_toks:
        if name_tok.text in rules:
            raise GrammarError(f"duplicate rule {name_tok.text!r}", name_tok.line, name_tok.col)
        rules[name_tok.text] = body
    for name_tok, body in rule_toks:
        missing = sorted(nonterminals(body) - rules.keys())
        if missing:
            raise GrammarError(f"undefined nonterminal {missing[0]!r}", name_tok.line, name_tok.col)

    alphabet = None
    start_name = None
    for key, rest, line in directives:
        if key == "alphabet":
            chars = _unescape("".join(rest.split()), line, 1)
            alphabet = frozenset(chars)
        elif key == "start":
            start_name = rest.strip()
            if start_name not in rules:
                raise GrammarError(f"%start names undefined rule {start_name!r}", line, 1)
        else:
            raise GrammarError(f"unknown directive %{key}", line, 1)
    if not rules:
        raise GrammarError("grammar has no rules")
    if start_name is None:
        start_name = next(iter(rules))

    used = set()
    for body in rules.values():
        used |= terminals(body)
    if alphabet is None:
        alphabet = frozenset(used)
    elif not used <= alphabet:
        raise GrammarError(f"terminal {sorted(used - alphabet)[0]!r} not in %alphabet")
    if not alphabet and any(uses_any(b) for b in rules.values()):
        raise GrammarError("'.' used but the alphabet is empty")
    return Grammar(alphabet, rules, Nonterminal(start_name))


def format_grammar(g: Grammar) -> str:
    """Grammar-file text that parses back to an equivalent grammar.

    A start expression that is not a bare nonterminal is written as a fresh
    first rule.
    """
    lines = ["%alphabet " + "".join(escape(c) for c in sorted(g.alphabet))]
    rules = dict(g.rules)
    if isinstance(g.start, Nonterminal):
        start = g.start.name
    else:
        start = FreshNames(rules)("Start")
        rules = {start: g.start, **rules}
    lines.append(f"%start {start}")
    lines += [f"{name} <- {render(body)}" for name, body in rules.items()]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# desugaring

def desugar(g: Grammar, eliminate_stars: bool = False) -> Grammar:
    """Expand character classes, ``?``, ``+`` and ``&``; eliminate repetitions.

    A repetition ``e*`` whose body mentions a nonterminal always becomes a
    fresh nonterminal ``N <- e N / ''``; with `eliminate_stars` every
    repetition does.  ``.`` is kept.
    """
    fresh = FreshNames(g.rules)
    new_rules: dict[str, Expr] = {}

    def go(e, owner):
        if isinstance(e, Class):
            if not e.chars:
                return Not(EMPTY)
            return choice(*(Char(c) for c in e.chars))
        if isinstance(e, Opt):
            return Choice(go(e.body, owner), EMPTY)
        if isinstance(e, And):
            return Not(Not(go(e.body, owner)))
        if isinstance(e, Plus):
            body = go(e.body, owner)
            return Seq(body, star(body, owner))
        if isinstance(e, Star):
            return star(go(e.body, owner), owner)
        return rebuild(e, [go(k, owner) for k in children(e)])

    def star(body, owner):
        if not eliminate_stars and is_nfree(body):
            return Star(body)
        name = fresh(owner)
        new_rules[name] = Choice(Seq(body, Nonterminal(name)), EMPTY)
        return Nonterminal(name)

    rules = {name: go(body, name) for name, body in g.rules.items()}
    start = go(g.start, "Start")
    rules.update(new_rules)
    return Grammar(g.alphabet, rules, start)


# ---------------------------------------------------------------------------
# LPEG judgement

@dataclass(frozen=True)
class Violation:
    rule: str
    path: tuple
    expr: Expr
    reason: str

    @property
    def text(self) -> str:
        return render(self.expr, compact=True)


@dataclass(frozen=True)
class LpegJudgement:
    violations: list = field(default_factory=list)

    @property
    def is_lpeg(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.is_lpeg


def _judge(e, path, out):
    """Collect violations of the linear-expression syntax in `e`."""
    if is_nfree(e) or isinstance(e, Nonterminal):
        return
    if isinstance(e, (Choice, Alt)):
        _judge(e.first, path + (0,), out)
        _judge(e.second, path + (1,), out)
    elif isinstance(e, Opt):
        _judge(e.body, path + (0,), out)
    elif isinstance(e, (Not, And)):
        # a trailing predicate reads as !e ε
        _judge(e.body, path + (0,), out)
    elif isinstance(e, (Star, Plus)):
        out.append((path, e, "repetition of an expression containing a nonterminal"))
    elif isinstance(e, Seq):
        items = flatten_seq(e, path)
        misplaced = False
        for item, item_path in items[:-1]:
            if isinstance(item, (Not, And)):
                _judge(item.body, item_path + (0,), out)
            elif not is_nfree(item):
                misplaced = True
        if misplaced:
            out.append((path, e, "nonterminal followed by an expression"))
        last, last_path = items[-1]
        _judge(last, last_path, out)


def is_lpeg(g: Grammar) -> LpegJudgement:
    """Decide whether every rule body and the start expression are linear.

    Works on parsed grammars directly; sugar nodes are read through their
    expansions (``[..]``, ``?`` and ``&`` are harmless, ``+`` is a repetition).
    """
    violations = []
    for owner, body in g.expressions():
        found = []
        _judge(body, (), found)
        violations += [Violation(owner, p, e, why) for p, e, why in found]
    return LpegJudgement(violations)


# ---------------------------------------------------------------------------
# well-formedness

def _props(e, env):
    """(may succeed consuming nothing, may succeed consuming input, may fail)."""
    if isinstance(e, Empty):
        return True, False, False
    if isinstance(e, (Char, Any, Class)):
        return False, True, True
    if isinstance(e, Nonterminal):
        return env[e.name]
    if isinstance(e, Seq):
        za, pa, fa = _props(e.left, env)
        zb, pb, fb = _props(e.right, env)
        return (za and zb,
                (pa and (zb or pb)) or (za and pb),
                fa or ((za or pa) and fb))
    if isinstance(e, Choice):
        za, pa, fa = _props(e.first, env)
        zb, pb, fb = _props(e.second, env)
        return za or (fa and zb), pa or (fa and pb), fa and fb
    if isinstance(e, Alt):
        za, pa, fa = _props(e.first, env)
        zb, pb, fb = _props(e.second, env)
        return za or zb, pa or pb, fa and fb
    z, p, f = _props(e.body, env)
    if isinstance(e, Star):
        return f, p, False
    if isinstance(e, Plus):
        return False, p, f
    if isinstance(e, Opt):
        return z or f, p, False
    if isinstance(e, Not):
        return f, False, z or p
    if isinstance(e, And):
        return z or p, False, f
    raise TypeError(e)


def grammar_props(g: Grammar) -> dict:
    env = {name: (False, False, False) for name in g.rules}
    changed = True
    while changed:
        changed = False
        for name, body in g.rules.items():
            new = _props(body, env)
            if new != env[name]:
                env[name] = new
                changed = True
    return env


def _first_calls(e, env) -> set:
    """Nonterminals that may be invoked at the position where `e` starts."""
    if isinstance(e, Nonterminal):
        return {e.name}
    if isinstance(e, Seq):
        out = _first_calls(e.left, env)
        if _props(e.left, env)[0]:
            out |= _first_calls(e.right, env)
        return out
    if isinstance(e, Choice):
        out = _first_calls(e.first, env)
        if _props(e.first, env)[2]:
            out |= _first_calls(e.second, env)
        return out
    out = set()
    for k in children(e):
        out |= _first_calls(k, env)
    return out


def check_wellformed(g: Grammar) -> list[str]:
    """Diagnostics for constructs that make PEG evaluation diverge; empty means fine."""
    env = grammar_props(g)
    diags = []
    graph = {name: _first_calls(body, env) for name, body in g.rules.items()}
    reported = set()
    for name in g.rules:
        cycle = _find_cycle(graph, name)
        if cycle and frozenset(cycle) not in reported:
            reported.add(frozenset(cycle))
            diags.append(f"rule {name}: recursion without consuming input: {' -> '.join(cycle)}")
    for owner, body in g.expressions():
        for node in walk(body):
            if isinstance(node, (Star, Plus)) and _props(node.body, env)[0]:
                diags.append(f"{owner}: repetition body can succeed without consuming input: "
                             f"{render(node, compact=True)}")
    return diags


def _find_cycle(graph, root):
    """A path root -> ... -> root in `graph`, or None."""
    stack = [(root, [root])]
    seen = set()
    while stack:
        node, path = stack.pop()
        for nxt in sorted(graph[node]):
            if nxt == root:
                return path + [root]
            if nxt not in seen:
                seen.add(nxt)
                stack.append((nxt, path + [nxt]))
    return None
