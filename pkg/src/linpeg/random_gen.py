"""Seeded random generators for grammars, regexes, DFAs and boolean functions.

All generators take a `random.Random` so test corpora are reproducible.
"""
from __future__ import annotations

import random

from .automata import BFA, DFA
from .boolfn import BoolFn, Var, conj, disj, neg, TRUE_FN, FALSE_FN
from .expr import (
    ANY, EMPTY, And, Char, Choice, Class, Expr, Nonterminal, Not, Opt, Plus,
    Seq, Star,
)
from .grammar import Grammar, check_wellformed, desugar, is_lpeg
from .regex import EPS, NULL, Concat, Kleene, Regex, Symbol, Union_

SIGMA = ("a", "b")


def random_nfree(rng: random.Random, depth: int, alphabet=SIGMA) -> Expr:
    """A nonterminal-free parsing expression of at most `depth` levels."""
    if depth <= 1 or rng.random() < 0.3:
        roll = rng.random()
        if roll < 0.75:
            return Char(rng.choice(alphabet))
        if roll < 0.85:
            return ANY
        if roll < 0.93:
            return EMPTY
        return Class(tuple(sorted(rng.sample(alphabet, rng.randint(1, len(alphabet))))))
    d = depth - 1
    kind = rng.choice(["seq", "seq", "choice", "star", "not", "opt", "plus", "and"])
    if kind == "seq":
        return Seq(random_nfree(rng, d, alphabet), random_nfree(rng, d, alphabet))
    if kind == "choice":
        return Choice(random_nfree(rng, d, alphabet), random_nfree(rng, d, alphabet))
    wrap = {"star": Star, "not": Not, "opt": Opt, "plus": Plus, "and": And}[kind]
    return wrap(random_nfree(rng, d, alphabet))


def random_linear(rng: random.Random, depth: int, names, alphabet=SIGMA) -> Expr:
    """A linear expression: p | pA | pe | e/e | !e e."""
    if depth <= 1:
        return random_nfree(rng, 1, alphabet)
    d = depth - 1
    kinds = ["p", "pe", "choice", "pred"] + (["pA", "pA"] if names else [])
    kind = rng.choice(kinds)
    if kind == "p":
        return random_nfree(rng, d, alphabet)
    if kind == "pA":
        return Seq(random_nfree(rng, d, alphabet), Nonterminal(rng.choice(names)))
    if kind == "pe":
        return Seq(random_nfree(rng, d, alphabet), random_linear(rng, d, names, alphabet))
    if kind == "choice":
        return Choice(random_linear(rng, d, names, alphabet), random_linear(rng, d, names, alphabet))
    return Seq(Not(random_linear(rng, d, names, alphabet)), random_linear(rng, d, names, alphabet))


def acceptable(g: Grammar) -> bool:
    return is_lpeg(g).is_lpeg and not check_wellformed(desugar(g))


def random_lpeg(rng: random.Random, max_rules: int = 3, depth: int = 4,
                alphabet=SIGMA, tries: int = 1000) -> Grammar:
    """A well-formed LPEG, by rejection sampling."""
    for _ in range(tries):
        names = [f"R{i}" for i in range(rng.randint(1, max_rules))]
        rules = {n: random_linear(rng, depth, names, alphabet) for n in names}
        g = Grammar(frozenset(alphabet), rules, Nonterminal(names[0]))
        if acceptable(g):
            return g
    raise RuntimeError("no acceptable grammar found; loosen the parameters")


def random_choice_pair(rng: random.Random, depth: int = 4, alphabet=SIGMA,
                       tries: int = 1000) -> Grammar:
    """A grammar whose start expression is ``e1 / e2`` for random linear e1, e2.

    There is at most one rule so that the operands may refer to it.
    """
    for _ in range(tries):
        names = ["R"] if rng.random() < 0.5 else []
        rules = {n: random_linear(rng, depth, names, alphabet) for n in names}
        e1 = random_linear(rng, depth, names, alphabet)
        e2 = random_linear(rng, depth, names, alphabet)
        g = Grammar(frozenset(alphabet), rules, Choice(e1, e2))
        if acceptable(g):
            return g
    raise RuntimeError("no acceptable pair found")


def random_regex(rng: random.Random, depth: int = 5, alphabet=SIGMA,
                 allow_empty_set: bool = True) -> Regex:
    if depth <= 1 or rng.random() < 0.25:
        roll = rng.random()
        if roll < 0.8:
            return Symbol(rng.choice(alphabet))
        if roll < 0.95 or not allow_empty_set:
            return EPS
        return NULL
    d = depth - 1
    kind = rng.choice(["cat", "cat", "alt", "star"])
    if kind == "star":
        return Kleene(random_regex(rng, d, alphabet, allow_empty_set))
    left = random_regex(rng, d, alphabet, allow_empty_set)
    right = random_regex(rng, d, alphabet, allow_empty_set)
    return Concat(left, right) if kind == "cat" else Union_(left, right)


def random_dfa(rng: random.Random, max_states: int = 5, alphabet=SIGMA) -> DFA:
    n = rng.randint(1, max_states)
    states = [f"p{i}" for i in range(n)]
    transitions = {q: {a: rng.choice(states) for a in alphabet} for q in states}
    accepting = {q for q in states if rng.random() < 0.4}
    return DFA(tuple(alphabet), states, states[0], accepting, transitions)


def random_boolfn(rng: random.Random, names, depth: int = 4) -> BoolFn:
    if depth <= 1 or rng.random() < 0.2:
        roll = rng.random()
        if roll < 0.9:
            return Var(rng.choice(names))
        return TRUE_FN if roll < 0.95 else FALSE_FN
    d = depth - 1
    kind = rng.choice(["and", "or", "not"])
    if kind == "not":
        return neg(random_boolfn(rng, names, d))
    op = conj if kind == "and" else disj
    return op(random_boolfn(rng, names, d), random_boolfn(rng, names, d))


def random_bfa(rng: random.Random, n_states: int = 4, alphabet=SIGMA, depth: int = 3) -> BFA:
    """A finalized BFA with random transition functions."""
    states = [f"q{i}" for i in range(n_states)]
    delta = {(q, a): random_boolfn(rng, states, depth)
             for q in states for a in alphabet if rng.random() < 0.8}
    accepting = {q for q in states if rng.random() < 0.3}
    lookahead = {q for q in states if q not in accepting and rng.random() < 0.2}
    return BFA(tuple(states), tuple(alphabet), delta, random_boolfn(rng, states, depth),
               accepting, lookahead)
