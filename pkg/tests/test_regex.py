import re

import pytest

from linpeg.automata import DFA, dfa_equiv, dfa_match
from linpeg.conversion import lpeg_to_dfa
from linpeg.expr import EMPTY, Char, Choice, Nonterminal, Not, Seq
from linpeg.grammar import Grammar, check_wellformed, desugar, is_lpeg
from linpeg.interp import lang_member, strings_upto
from linpeg.random_gen import random_dfa, random_regex
from linpeg.regex import (
    EPS, NULL, Concat, Kleene, RegexSyntaxError, Symbol, Union_, alt, cat, deriv,
    dfa_to_lpeg, dfa_to_regex, matches, normalize_stars, nullable, parse_regex, pi_regex,
    regex_to_lpeg, show_regex, star, without_empty_word,
)

G0 = Grammar(frozenset(), {}, EMPTY)
CORPUS = ["", "a", "ab", "a|b", "a*", "(a|b)*abb", "a*b|c"]


def python_pattern(r):
    """The same regex in Python's re syntax."""
    if r == EPS:
        return "(?:)"
    if r == NULL:
        return "(?!)"
    if isinstance(r, Symbol):
        return re.escape(r.char)
    if isinstance(r, Kleene):
        return f"(?:{python_pattern(r.body)})*"
    if isinstance(r, Concat):
        return f"(?:{python_pattern(r.left)}{python_pattern(r.right)})"
    return f"(?:{python_pattern(r.left)}|{python_pattern(r.right)})"


def test_parse_and_show():
    r = parse_regex("(a|b)*abb")
    assert r == Concat(Kleene(Union_(Symbol("a"), Symbol("b"))),
                       Concat(Symbol("a"), Concat(Symbol("b"), Symbol("b"))))
    assert show_regex(r) == "(a|b)*abb"
    assert parse_regex("") == EPS and parse_regex("()") == EPS
    assert parse_regex("a|") == Union_(Symbol("a"), EPS)
    assert parse_regex(r"\*\|") == Concat(Symbol("*"), Symbol("|"))
    assert parse_regex("∅") == NULL
    for text in ["(a|b)*abb", r"\(a\)*", "a(b|())*", "∅|a"]:
        assert parse_regex(show_regex(parse_regex(text))) == parse_regex(text)


@pytest.mark.parametrize("text", ["(a", "a)", "*a", "a\\"])
def test_parse_errors(text):
    with pytest.raises(RegexSyntaxError):
        parse_regex(text)


def test_derivative_matcher_against_re(rng):
    for _ in range(150):
        r = random_regex(rng, 5)
        pattern = re.compile(python_pattern(r))
        for w in strings_upto("ab", 6):
            assert matches(r, w) == bool(pattern.fullmatch(w)), (show_regex(r), w)


def test_smart_constructors():
    a = Symbol("a")
    assert cat(a, EPS) == a and cat(NULL, a) == NULL
    assert alt(a, NULL) == a and alt(a, a) == a
    assert star(EPS) == EPS and star(NULL) == EPS and star(Kleene(a)) == Kleene(a)
    assert nullable(Kleene(a)) and not nullable(a)
    assert deriv(a, "a") == EPS and deriv(a, "b") == NULL


def test_without_empty_word(rng):
    for _ in range(100):
        r = random_regex(rng, 5)
        r2 = without_empty_word(r)
        assert not nullable(r2)
        for w in strings_upto("ab", 5):
            if w:
                assert matches(r2, w) == matches(r, w)


def test_normalize_stars_keeps_language(rng):
    for _ in range(100):
        r = random_regex(rng, 5)
        n = normalize_stars(r)
        for w in strings_upto("ab", 5):
            assert matches(n, w) == matches(r, w)


# the continuation translation

def test_pi_symbol():
    g = pi_regex(Symbol("a"), G0)
    assert g.start == Seq(Char("a"), EMPTY) and g.rules == {}


def test_pi_star():
    g = pi_regex(parse_regex("a*"), G0)
    assert g.start == Nonterminal("A_1")
    assert g.rules == {"A_1": Choice(Seq(Char("a"), Nonterminal("A_1")), EMPTY)}


def test_pi_union_and_concat():
    g = pi_regex(parse_regex("(a|b)c"), G0)
    c = Seq(Char("c"), EMPTY)
    assert g.start == Choice(Seq(Char("a"), c), Seq(Char("b"), c))


def test_pi_output_is_lpeg(rng):
    for _ in range(100):
        assert is_lpeg(pi_regex(random_regex(rng), G0))


def test_unanchored_translation_misses_longer_alternatives():
    r = parse_regex("a|ab")
    loose = regex_to_lpeg(r, anchored=False)
    assert not lang_member(loose, "ab", "exact")
    assert lang_member(regex_to_lpeg(r), "ab", "exact")


@pytest.mark.parametrize("text", CORPUS)
def test_corpus(text):
    r = parse_regex(text)
    g = regex_to_lpeg(r, alphabet="abc")
    assert is_lpeg(g) and not check_wellformed(desugar(g))
    for w in strings_upto("abc", 6):
        assert lang_member(g, w, "exact") == matches(r, w)


def test_abb_matches_oracle():
    r = parse_regex("(a|b)*abb")
    g = regex_to_lpeg(r)
    d = lpeg_to_dfa(g, "exact")
    assert len(d.states) == 4
    for w in strings_upto("ab", 8):
        assert lang_member(g, w, "exact") == matches(r, w) == dfa_match(d, w)


def test_nullable_star_body_is_normalized():
    r = parse_regex("(a|())*b")
    g = regex_to_lpeg(r)
    assert not check_wellformed(desugar(g))
    for w in strings_upto("ab", 6):
        assert lang_member(g, w, "exact") == matches(r, w)


def test_empty_set():
    g = regex_to_lpeg(NULL, alphabet="a")
    assert isinstance(g.start.left, Not) and g.start.left.body == EMPTY
    assert not any(lang_member(g, w, "exact") for w in strings_upto("a", 4))


def test_shared_continuations_stay_small():
    r = parse_regex("(a|b)(a|b)(a|b)(a|b)(a|b)(a|b)(a|b)(a|b)(a|b)(a|b)")
    g = regex_to_lpeg(r)
    from linpeg.expr import size
    assert sum(size(b) for b in g.rules.values()) + size(g.start) < 400
    assert lang_member(g, "ab" * 5, "exact") and not lang_member(g, "ab" * 4, "exact")


# DFA back to regex

def one_state_loop():
    return DFA(("a",), ("p",), "p", {"p"}, {"p": {"a": "p"}})


def test_loop_dfa_gives_star():
    assert dfa_to_regex(one_state_loop()) == Kleene(Symbol("a"))


def test_astarb_dfa_to_regex():
    d = DFA(("a", "b"), ("x", "y", "z"), "x", {"y"},
            {"x": {"a": "x", "b": "y"}, "y": {"a": "z", "b": "z"}, "z": {"a": "z", "b": "z"}})
    r = dfa_to_regex(d)
    for w in strings_upto("ab", 8):
        assert matches(r, w) == bool(re.fullmatch("a*b", w))


def test_empty_language_dfa():
    d = DFA(("a",), ("p",), "p", set(), {"p": {"a": "p"}})
    assert dfa_to_regex(d) == NULL
    g = dfa_to_lpeg(d)
    assert isinstance(g.start.left, Not) and g.start.left.body == EMPTY


def test_round_trip(rng):
    for _ in range(30):
        d = random_dfa(rng)
        assert dfa_equiv(d, lpeg_to_dfa(dfa_to_lpeg(d), "exact")) is None
