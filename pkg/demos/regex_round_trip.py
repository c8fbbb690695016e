"""Regular expressions to LPEGs, and DFAs back to LPEGs.

Run:  python demos/regex_round_trip.py
"""
import random

from linpeg import format_grammar, is_lpeg
from linpeg.automata import dfa_equiv
from linpeg.conversion import lpeg_to_dfa
from linpeg.random_gen import random_dfa
from linpeg.regex import dfa_to_lpeg, dfa_to_regex, parse_regex, regex_to_lpeg, show_regex

for text in ["a*b|c", "(a|b)*abb"]:
    r = parse_regex(text)
    g = regex_to_lpeg(r)
    d = lpeg_to_dfa(g, "exact")
    print(f"== regex {text}")
    print(format_grammar(g), end="")
    print(f"linear: {bool(is_lpeg(g))}, minimal DFA has {len(d.states)} states\n")

rng = random.Random(7)
d = random_dfa(rng, max_states=4)
print("== a random DFA")
for q in d.states:
    mark = "*" if q in d.accepting else " "
    print(f"  {mark}{q}: " + "  ".join(f"{a}->{d.transitions[q][a]}" for a in d.alphabet))
print("state elimination gives", show_regex(dfa_to_regex(d)))
g = dfa_to_lpeg(d)
print(format_grammar(g), end="")
back = lpeg_to_dfa(g, "exact")
witness = dfa_equiv(d, back)
print("round trip:", "equivalent" if witness is None else f"differs on {witness!r}")
