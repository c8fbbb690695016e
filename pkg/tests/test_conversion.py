import re

import pytest

from linpeg.automata import BFA, bfa_accepts, bfa_consume, dfa_equiv, dfa_match
from linpeg.boolfn import FALSE_FN, Var, equivalent, parse_boolfn, show
from linpeg.conversion import (
    cg, cn, construct_bfa, copy_expr, lpeg_to_bfa, lpeg_to_dfa, phi, prepare,
    rewrite_choices, rewrite_grammar, run_pipeline, substitute_temps,
)
from linpeg.errors import ConversionError, IllFormedError, NotLpegError
from linpeg.expr import EMPTY, Alt, Char, Nonterminal, Not, Seq, render
from linpeg.grammar import Grammar, desugar, parse_grammar
from linpeg.interp import Consumed, consume, lang_member, strings_upto

ASTARB = parse_grammar("A <- 'a' A / 'b'")
EXAMPLE2 = parse_grammar("A <- !('a' A) 'a' A / 'b'")
EXAMPLE4 = parse_grammar("A <- !('a' A / 'b' B / 'c') 'd'\nB <- 'a' B / 'b'")

a, b = Char("a"), Char("b")
A = Nonterminal("A")


def rules_text(g):
    return {name: render(body, compact=True) for name, body in g.rules.items()}


# choice rewriting

def test_rewrite_simple_choice():
    e = rewrite_choices(ASTARB.rules["A"])
    assert e == Alt(Seq(a, A), Seq(Not(Seq(a, A)), b))
    assert render(e, compact=True) == "aA|!(aA)b"


def test_rewrite_nested_choice_guards_every_later_alternative():
    g = rewrite_grammar(EXAMPLE4)
    # c is guarded by both earlier alternatives
    assert rules_text(g) == {"A": "!(aA|!(aA)(bB|!(bB)c))d", "B": "aB|!(aB)b"}


def test_rewrite_without_choice_is_identity():
    assert rewrite_choices(EMPTY) == EMPTY
    assert rewrite_choices(Seq(a, Not(b))) == Seq(a, Not(b))


# copies

def test_copy_expr():
    c, A1 = Char("c"), Nonterminal("A'")
    e = Alt(Seq(a, A), Alt(Seq(Not(Seq(a, A)), b), Seq(Not(b), c)))
    assert copy_expr(e) == Alt(Seq(a, A1), Alt(Seq(Not(Seq(a, A1)), b), Seq(Not(b), c)))
    once = copy_expr(Not(Seq(a, A)))
    assert copy_expr(once) == once == Not(Seq(a, Nonterminal("A'")))
    assert copy_expr(Seq(a, b)) == Seq(a, b)


def test_cg_example():
    g = cg(rewrite_grammar(ASTARB))
    assert rules_text(g) == {"A": "aA|!(aA')b", "A'": "aA'|!(aA')b"}
    assert g.start == A


def test_cg_nested_example():
    g = cg(rewrite_grammar(EXAMPLE4))
    assert rules_text(g) == {
        "A": "!(aA'|!(aA')(bB'|!(bB')c))d",
        "B": "aB|!(aB')b",
        "A'": "!(aA'|!(aA')(bB'|!(bB')c))d",
        "B'": "aB'|!(aB')b",
    }


def test_cg_without_predicates():
    g = cg(parse_grammar("S <- 'a' S / 'b' T\nT <- 'c'"))
    assert g.rules["S"] == parse_grammar("S <- 'a' S / 'b' T\nT <- 'c'").rules["S"]
    assert set(g.rules) == {"S", "T", "S'", "T'"}


def test_cg_closure(rng):
    from linpeg.random_gen import random_lpeg
    from linpeg.expr import nonterminals
    for _ in range(50):
        g = cg(rewrite_grammar(desugar(random_lpeg(rng), eliminate_stars=True)))
        for _, body in g.expressions():
            assert nonterminals(body) <= set(g.rules)


def test_cg_rejects_primed_names():
    g = Grammar({"a"}, {"A'": Char("a")}, Nonterminal("A'"))
    with pytest.raises(ConversionError):
        cg(g)


def test_cn_primes_only_inside_predicates():
    e = Seq(Not(Seq(a, A)), Seq(a, A))
    assert cn(e) == Seq(Not(Seq(a, Nonterminal("A'"))), Seq(a, A))


# the translation

def test_translate_empty_and_char():
    g = Grammar({"a"}, {}, EMPTY)
    bfa = construct_bfa(g)
    assert bfa.states == ("q0",) and bfa.initial == Var("q0")
    assert bfa.accepting == {"q0"} and bfa.lookahead == frozenset() and bfa.delta == {}
    bfa = construct_bfa(Grammar({"a"}, {}, a))
    assert bfa.delta == {("q0", "a"): Var("q1")}
    assert bfa.accepting == {"q1"}


def test_worked_example_with_temporaries():
    b = construct_bfa(prepare(ASTARB), "exact")
    assert len(b.states) == 14
    assert b.initial == parse_boolfn("q0 | (q11 | q12) & !q2")
    assert b.accepting == {"q13"} and b.lookahead == {"q10"}
    table = {k: show(v) for k, v in b.delta.items()}
    assert table == {
        ("q0", "a"): "q1 ∨ f_tmp_A",
        ("q2", "a"): "q3 ∨ q4 ∨ (q8 ∨ q9) ∧ ¬q6",
        ("q4", "a"): "q5 ∨ f_tmp_A'",
        ("q6", "a"): "q7 ∨ f_tmp_A'",
        ("q9", "b"): "q10",
        ("q10", "a"): "q10",
        ("q10", "b"): "q10",
        ("q12", "b"): "q13",
    }
    assert {k: show(v) for k, v in b.initial_functions.items()} == {
        "f_tmp_A": "q0 ∨ (q11 ∨ q12) ∧ ¬q2",
        "f_tmp_A'": "q4 ∨ (q8 ∨ q9) ∧ ¬q6",
    }


def test_worked_example_after_substitution():
    b = substitute_temps(construct_bfa(prepare(ASTARB), "exact"))
    assert b.is_finalized and not b.initial_functions
    assert show(b.delta[("q0", "a")]) == "q1 ∨ q0 ∨ (q11 ∨ q12) ∧ ¬q2"
    assert show(b.delta[("q4", "a")]) == "q5 ∨ q4 ∨ (q8 ∨ q9) ∧ ¬q6"
    assert show(b.delta[("q6", "a")]) == "q7 ∨ q4 ∨ (q8 ∨ q9) ∧ ¬q6"
    assert show(b.delta[("q2", "a")]) == "q3 ∨ q4 ∨ (q8 ∨ q9) ∧ ¬q6"
    assert bfa_accepts(b, "b") and not bfa_accepts(b, "a")


def test_substitute_temps_without_temps_is_identity():
    bfa = construct_bfa(Grammar({"a"}, {}, a))
    assert substitute_temps(bfa) == bfa


def test_substitute_temps_unresolved():
    bfa = BFA(("q0",), ("a",), {}, Var("f_tmp_X", temp=True), {"q0"}, set())
    with pytest.raises(ConversionError):
        substitute_temps(bfa)


def test_dead_self_reference_becomes_false():
    g = parse_grammar("A <- !'' A / 'a'")
    for mode in ("exact", "prefix"):
        d = lpeg_to_dfa(g, mode)
        for w in strings_upto("a", 5):
            assert dfa_match(d, w) == lang_member(g, w, mode)


def test_prefix_mode_adds_any_star():
    b = construct_bfa(prepare(ASTARB), "prefix")
    assert any(name.startswith("f_tmp_AnyStar") for name in b.initial_functions)
    with pytest.raises(ValueError):
        construct_bfa(prepare(ASTARB), "full")


# full pipeline

def test_astarb_exact_and_prefix():
    exact = lpeg_to_dfa(ASTARB, "exact")
    prefix = lpeg_to_dfa(ASTARB, "prefix")
    assert len(exact.states) == 3 and len(prefix.states) == 2
    for w in strings_upto("ab", 10):
        assert dfa_match(exact, w) == bool(re.fullmatch("a*b", w))
        assert dfa_match(prefix, w) == bool(re.fullmatch("a*b[ab]*", w))


def test_example2_language_is_b():
    d = lpeg_to_dfa(EXAMPLE2, "exact")
    for w in strings_upto("ab", 8):
        assert dfa_match(d, w) == (w == "b")


def test_pipeline_rejects_nonlinear_and_illformed():
    with pytest.raises(NotLpegError) as info:
        lpeg_to_dfa(parse_grammar("A <- 'a' A 'a' / B*\nB <- 'a' B / 'b'"))
    assert sorted(v.text for v in info.value.judgement.violations) == ["B*", "aAa"]
    with pytest.raises(IllFormedError):
        lpeg_to_dfa(parse_grammar("A <- '' A / 'a'"))


def test_pipeline_stages_exposed():
    p = run_pipeline(ASTARB, "exact", minimize=True)
    assert p.bfa_with_temps.initial_functions and not p.bfa.initial_functions
    assert dfa_equiv(p.dfa, p.minimal) is None
    assert run_pipeline(ASTARB, minimize=False).minimal is None


@pytest.mark.parametrize("text", [
    "S <- 'a'* 'b'",
    "S <- !('a' 'b') 'a' .",
    "S <- &('a' 'b') 'a'",
    "S <- ('a' / 'a' 'b') 'b'",
    "S <- 'a' S / !'b' 'a' / 'b' B\nB <- 'a' B / ''",
    "S <- ('a' 'b')* !.",
    "S <- !A 'b'*\nA <- 'a' A / 'b'",
    "S <- [ab]* 'a'",
    "S <- ('a' / 'b')+ 'b'?",
    "A <- 'a' A / 'b' B / 'c'\nB <- 'a' B / 'b' A / 'c'",
    "S <- !(!'a' .) . S / ''",
])
def test_pipeline_agrees_with_interpreter(text):
    g = parse_grammar(text)
    for mode in ("exact", "prefix"):
        d = lpeg_to_dfa(g, mode)
        for w in strings_upto(g.alphabet, 7):
            assert dfa_match(d, w) == lang_member(g, w, mode), (mode, w)


def test_choice_rewrite_consumes_like_choice(rng):
    from linpeg.random_gen import random_choice_pair
    for _ in range(30):
        g = random_choice_pair(rng)
        b = lpeg_to_bfa(g, "exact")
        for w in strings_upto("ab", 5):
            r = consume(g, g.start, w)
            assert bfa_consume(b, w) == ({r.length} if isinstance(r, Consumed) else set())
