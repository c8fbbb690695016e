"""LPEG to BFA to DFA.

The pipeline: eliminate repetitions, rewrite prioritized choices into
guarded alternations, split nonterminals used inside not-predicates into
primed copies, translate to a BFA whose recursive references are temporary
variables, substitute the temporaries, determinize and minimize.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import count

from . import boolfn as bf
from .automata import BFA, DFA, bfa_to_dfa, dfa_minimize
from .boolfn import BoolFn, Var, conj, disj, neg
from .errors import ConversionError, IllFormedError, NotLpegError
from .expr import (
    ANY, EMPTY, Alt, Any, Char, Choice, Empty, Expr, Nonterminal, Not, Seq,
    children, is_nfree, rebuild,
)
from .grammar import FreshNames, Grammar, check_wellformed, desugar, is_lpeg

MODES = ("prefix", "exact")


def rewrite_choices(e: Expr) -> Expr:
    """Bottom-up ``e1 / e2`` to ``e1 | !e1 e2``."""
    kids = [rewrite_choices(k) for k in children(e)]
    if isinstance(e, Choice):
        first, second = kids
        return Alt(first, Seq(Not(first), second))
    return rebuild(e, kids)


def rewrite_grammar(g: Grammar) -> Grammar:
    return g.replace(rules={n: rewrite_choices(b) for n, b in g.rules.items()},
                     start=rewrite_choices(g.start))


def prime(name: str) -> str:
    return name if name.endswith("'") else name + "'"


def copy_expr(e: Expr) -> Expr:
    """Rename every nonterminal A to A' (already-primed names stay)."""
    if isinstance(e, Nonterminal):
        return Nonterminal(prime(e.name))
    return rebuild(e, [copy_expr(k) for k in children(e)])


def cn(e: Expr) -> Expr:
    """Prime the nonterminals that occur inside not-predicates."""
    if isinstance(e, Not):
        return Not(copy_expr(e.body))
    return rebuild(e, [cn(k) for k in children(e)])


def cg(g: Grammar) -> Grammar:
    """Add a primed copy A' <- copy(e_A) of every rule; predicates refer to the copies."""
    clash = [n for n in g.rules if n.endswith("'")]
    if clash:
        raise ConversionError(f"grammar already uses primed name {clash[0]!r}")
    rules = {n: cn(b) for n, b in g.rules.items()}
    rules.update({prime(n): copy_expr(b) for n, b in g.rules.items()})
    return g.replace(rules=rules, start=cn(g.start))


def phi(f1: BoolFn, f2: BoolFn, accepting) -> BoolFn:
    """Replace each variable s of `accepting` in f1 by s ∨ f2."""
    return bf.substitute(f1, {s: disj(Var(s), f2) for s in accepting})


# ---------------------------------------------------------------------------
# the translation T

MAIN = "main"
PRED = "pred"


class _Translator:
    """Builds one BFA; T(e, ctx) returns (initial function, F, P) of e.

    A nonterminal is expanded once per context and referenced by a
    temporary afterwards.  Tail positions inherit the context; predicate
    bodies share the PRED context (their continuation is always "done",
    realised by self-loops); the left operand of a sequence that mentions
    nonterminals gets a private context so its expansions carry exactly one
    continuation.
    """

    def __init__(self, g: Grammar):
        self.rules = g.rules
        self.alphabet = tuple(sorted(g.alphabet))
        self.states: list[str] = []
        self.delta: dict = {}
        self.entries: dict = {}        # (name, ctx) -> initial function, None while expanding
        self.finished: list = []       # keys in order of completed expansion
        self.temp_names: dict = {}
        self._used_temp_names: set = set()
        self._ctx = count(1)

    def new_state(self) -> str:
        q = f"q{len(self.states)}"
        self.states.append(q)
        return q

    def temp_for(self, key) -> Var:
        name = self.temp_names.get(key)
        if name is None:
            nt, ctx = key
            name = f"f_tmp_{nt}"
            if ctx not in (MAIN, PRED):
                name += f"@{ctx}"
            if name in self._used_temp_names:
                name += f"#{len(self._used_temp_names)}"
            self._used_temp_names.add(name)
            self.temp_names[key] = name
        return bf.temp(name)

    def T(self, e: Expr, ctx):
        if isinstance(e, Empty):
            s = self.new_state()
            return Var(s), {s}, set()
        if isinstance(e, (Char, Any)):
            s, t = self.new_state(), self.new_state()
            symbols = self.alphabet if isinstance(e, Any) else (e.char,)
            for a in symbols:
                self.delta[(s, a)] = Var(t)
            return Var(s), {t}, set()
        if isinstance(e, Not):
            f, F, P = self.T(e.body, PRED)
            s = self.new_state()
            done = F | P
            for t in sorted(done, key=self.states.index):
                for a in self.alphabet:
                    self.delta[(t, a)] = disj(self.delta.get((t, a), bf.FALSE_FN), Var(t))
            return conj(Var(s), neg(f)), {s}, done
        if isinstance(e, Seq):
            return self._seq(e, ctx)
        if isinstance(e, Alt):
            f1, F1, P1 = self.T(e.first, ctx)
            f2, F2, P2 = self.T(e.second, ctx)
            return disj(f1, f2), F1 | F2, P1 | P2
        if isinstance(e, Nonterminal):
            key = (e.name, ctx)
            if key in self.entries:
                return self.temp_for(key), set(), set()
            self.temp_for(key)
            self.entries[key] = None
            f, F, P = self.T(self.rules[e.name], ctx)
            self.entries[key] = f
            self.finished.append(key)
            return f, F, P
        raise ConversionError(f"no translation for {type(e).__name__}; "
                              "rewrite choices and eliminate repetitions first")

    def _seq(self, e: Seq, ctx):
        first_state = len(self.states)
        first_entry = len(self.finished)
        left_ctx = ctx if is_nfree(e.left) else next(self._ctx)
        f1, F1, P1 = self.T(e.left, left_ctx)
        left_states = self.states[first_state:]
        left_entries = self.finished[first_entry:]
        f2, F2, P2 = self.T(e.right, ctx)
        overlap = (set(left_states) & set(self.states[first_state + len(left_states):]))
        if overlap:
            raise ConversionError("state sets of a sequence overlap")
        for q in left_states:
            for a in self.alphabet:
                fn = self.delta.get((q, a))
                if fn is not None:
                    self.delta[(q, a)] = phi(fn, f2, F1)
        for key in left_entries:
            self.entries[key] = phi(self.entries[key], f2, F1)
        return phi(f1, f2, F1), F2, P1 | P2


def any_star_rule(g: Grammar) -> tuple[str, dict]:
    """A fresh rule for ``.*`` already in pipeline form, plus its primed copy."""
    name = FreshNames(g.rules)("AnyStar")
    body = rewrite_choices(Choice(Seq(ANY, Nonterminal(name)), EMPTY))
    return name, {name: cn(body), prime(name): copy_expr(body)}


def construct_bfa(g: Grammar, mode: str = "exact") -> BFA:
    """Translate a pipeline grammar (choices rewritten, copies added) to a BFA with temporaries.

    ``exact`` translates the start expression itself; ``prefix`` translates
    the start expression followed by ``.*``.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    start = g.start
    rules = g.rules
    if mode == "prefix":
        name, extra = any_star_rule(g)
        rules = {**rules, **extra}
        start = Seq(start, Nonterminal(name))
        g = Grammar(g.alphabet, rules, start)
    tr = _Translator(g)
    f0, F, P = tr.T(start, MAIN)
    functions = {tr.temp_names[key]: fn for key, fn in tr.entries.items()}
    return BFA(tuple(tr.states), tr.alphabet, tr.delta, f0, F, P, functions)


def substitute_temps(b: BFA) -> BFA:
    """Replace every temporary by its nonterminal's initial function.

    Temporaries are resolved depth first.  Meeting one again while it is
    being resolved means a rule reaches itself without reading input;
    well-formed grammars only do that behind a guard that can never
    succeed, so that occurrence becomes false.
    """
    table = dict(b.initial_functions)
    resolved: dict = {}
    active: set = set()

    def resolve(name):
        if name in resolved:
            return resolved[name]
        if name in active:
            return bf.FALSE_FN
        if name not in table:
            raise ConversionError(f"no initial function for {name}")
        active.add(name)
        fn = table[name]
        resolved[name] = bf.substitute(fn, {t: resolve(t) for t in bf.temps(fn)})
        active.discard(name)
        return resolved[name]

    for name in table:
        resolve(name)
    table = resolved
    used = set(bf.temps(b.initial))
    for fn in b.delta.values():
        used |= bf.temps(fn)
    unresolved = used - table.keys()
    if unresolved:
        raise ConversionError(f"no initial function for {sorted(unresolved)[0]}")
    delta = {k: bf.substitute(fn, table) for k, fn in b.delta.items()}
    initial = bf.substitute(b.initial, table)
    out = BFA(b.states, b.alphabet, delta, initial, b.accepting, b.lookahead, {})
    if not out.is_finalized:
        raise ConversionError("temporaries remain after substitution")
    return out


# ---------------------------------------------------------------------------
# whole pipeline

@dataclass(frozen=True)
class Pipeline:
    """Every intermediate value of one LPEG to DFA conversion."""
    mode: str
    desugared: Grammar
    rewritten: Grammar
    copied: Grammar
    bfa_with_temps: BFA
    bfa: BFA
    dfa: DFA
    minimal: DFA | None


def prepare(g: Grammar) -> Grammar:
    """Check the grammar and bring it into pipeline form (through the copy step)."""
    judgement = is_lpeg(g)
    if not judgement.is_lpeg:
        raise NotLpegError(judgement)
    diags = check_wellformed(desugar(g))
    if diags:
        raise IllFormedError(diags)
    return cg(rewrite_grammar(desugar(g, eliminate_stars=True)))


def run_pipeline(g: Grammar, mode: str = "exact", minimize: bool = True,
                 max_states: int = 1_000_000) -> Pipeline:
    judgement = is_lpeg(g)
    if not judgement.is_lpeg:
        raise NotLpegError(judgement)
    diags = check_wellformed(desugar(g))
    if diags:
        raise IllFormedError(diags)
    desugared = desugar(g, eliminate_stars=True)
    rewritten = rewrite_grammar(desugared)
    copied = cg(rewritten)
    with_temps = construct_bfa(copied, mode)
    final = substitute_temps(with_temps)
    dfa = bfa_to_dfa(final, max_states=max_states)
    return Pipeline(mode, desugared, rewritten, copied, with_temps, final, dfa,
                    dfa_minimize(dfa) if minimize else None)


def lpeg_to_bfa(g: Grammar, mode: str = "exact") -> BFA:
    return substitute_temps(construct_bfa(prepare(g), mode))


def lpeg_to_dfa(g: Grammar, mode: str = "exact", minimize: bool = True,
                max_states: int = 1_000_000) -> DFA:
    """DFA for {w : lang_member(g, w, mode)}."""
    p = run_pipeline(g, mode, minimize, max_states)
    return p.minimal if minimize else p.dfa
