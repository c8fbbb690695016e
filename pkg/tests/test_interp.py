import re

import pytest

from linpeg.errors import RecursionDepthExceeded
from linpeg.expr import Alt, Char, Not, Nonterminal
from linpeg.grammar import Grammar, desugar, parse_grammar
from linpeg.interp import (
    FAIL, Consumed, consume, expr_equiv_bounded, lang_member, strings_upto,
)

ASTARB = parse_grammar("A <- 'a' A / 'b'")


def test_consume_recursive_rule():
    assert consume(ASTARB, ASTARB.start, "aab") == Consumed(3)
    assert consume(ASTARB, ASTARB.start, "aaba") == Consumed(3)
    assert consume(ASTARB, ASTARB.start, "aa") == FAIL


def test_consume_terminal_and_predicate():
    g = Grammar({"a", "b"}, {}, Char("b"))
    assert consume(g, Char("b"), "ba") == Consumed(1)
    assert consume(g, Not(Char("a")), "a") == FAIL
    assert consume(g, Not(Char("a")), "b") == Consumed(0)


def test_choice_is_prioritized():
    g = parse_grammar("S <- ('a' / 'a' 'b') 'b'")
    # the first alternative wins, so "ab" is matched as a·b
    assert consume(g, g.start, "ab") == Consumed(2)
    assert consume(g, g.start, "abb") == Consumed(2)


def test_star_is_greedy():
    g = parse_grammar("S <- 'a'* 'a'")
    assert consume(g, g.start, "aaa") == FAIL


def test_sugar_semantics():
    g = parse_grammar("%alphabet abc\nS <- [ab]+ 'c'? &'a'")
    assert consume(g, g.start, "abca") == Consumed(3)
    assert consume(g, g.start, "abc") == FAIL


def test_any_matches_alphabet_only():
    g = parse_grammar("%alphabet ab\nS <- .")
    assert consume(g, g.start, "a") == Consumed(1)
    assert consume(g, g.start, "z") == FAIL
    assert consume(g, g.start, "") == FAIL


def test_lang_member_modes():
    assert lang_member(ASTARB, "b", "prefix")
    assert not lang_member(ASTARB, "a", "prefix")
    assert lang_member(ASTARB, "ba", "prefix")
    assert not lang_member(ASTARB, "ba", "exact")
    with pytest.raises(ValueError):
        lang_member(ASTARB, "b", "full")


def test_exact_language_of_astarb_matches_regex():
    for w in strings_upto("ab", 8):
        assert lang_member(ASTARB, w, "exact") == bool(re.fullmatch("a*b", w))
        assert lang_member(ASTARB, w, "prefix") == bool(re.match("a*b", w))


def test_depth_guard_trips_on_left_recursion():
    g = parse_grammar("A <- A 'a' / 'b'")
    with pytest.raises(RecursionDepthExceeded):
        consume(g, g.start, "ba")


def test_nullable_star_body_is_reported():
    g = parse_grammar("A <- (!'a')* 'b'")
    with pytest.raises(RecursionDepthExceeded):
        consume(g, g.start, "b")


def test_alt_is_not_interpretable():
    g = Grammar({"a"}, {}, Alt(Char("a"), Char("a")))
    with pytest.raises(TypeError):
        consume(g, g.start, "a")


def test_packrat_agrees(rng):
    from linpeg.random_gen import random_lpeg
    for _ in range(40):
        g = random_lpeg(rng)
        for w in strings_upto("ab", 6):
            assert consume(g, g.start, w) == consume(g, g.start, w, memo=True)


def test_desugar_preserves_results(rng):
    from linpeg.random_gen import random_lpeg
    for _ in range(40):
        g = random_lpeg(rng)
        d = desugar(g, eliminate_stars=True)
        assert expr_equiv_bounded(g, d, 7) is None


def test_strings_upto_order_and_count():
    words = list(strings_upto("ba", 2))
    assert words == ["", "a", "b", "aa", "ab", "ba", "bb"]
    assert sum(1 for _ in strings_upto("ab", 12)) == 8191


def test_expr_equiv_bounded():
    g1 = parse_grammar("A <- 'a' / 'b'")
    g2 = parse_grammar("A <- 'b' / 'a'")
    assert expr_equiv_bounded(g1, g1, 4) is None
    assert expr_equiv_bounded(g1, g2, 3) is None
    assert expr_equiv_bounded(parse_grammar("A <- 'a'"), parse_grammar("A <- 'a' 'a'"), 2) == "a"
    with pytest.raises(ValueError):
        expr_equiv_bounded(g1, parse_grammar("A <- 'c'"), 2)


def test_double_negation_is_lookahead():
    g = parse_grammar("S <- 'a' 'b' / 'b'")
    for w in strings_upto("ab", 5):
        inner = consume(g, g.start, w)
        outer = consume(g, Not(Not(g.start)), w)
        assert (inner == FAIL) == (outer == FAIL)
        if outer != FAIL:
            assert outer == Consumed(0)
