"""Follow A <- 'a' A / 'b' through every stage of the conversion to a DFA.

Run:  python demos/pipeline_walkthrough.py
"""
from linpeg import format_grammar, parse_grammar, run_pipeline
from linpeg.automata import bfa_accepts, dfa_match
from linpeg.boolfn import show
from linpeg.interp import lang_member, strings_upto

g = parse_grammar("A <- 'a' A / 'b'")

for mode in ("exact", "prefix"):
    p = run_pipeline(g, mode)
    print(f"######## {mode} mode")
    print("-- choices rewritten, predicate copies added")
    print(format_grammar(p.copied), end="")

    b = p.bfa_with_temps
    print("-- BFA before substituting temporaries")
    print("  initial:", show(b.initial))
    for name, fn in b.initial_functions.items():
        print(f"  {name} = {show(fn)}")
    print("  F =", sorted(b.accepting), " P =", sorted(b.lookahead))

    b = p.bfa
    print("-- BFA")
    print("  initial:", show(b.initial))
    for (q, a), fn in sorted(b.delta.items()):
        print(f"  delta({q}, {a}) = {show(fn)}")

    print(f"-- DFA: {len(p.dfa.states)} states, minimal: {len(p.minimal.states)}")
    for q in p.minimal.states:
        mark = "*" if q in p.minimal.accepting else " "
        row = "  ".join(f"{a}->{p.minimal.transitions[q][a]}" for a in p.minimal.alphabet)
        print(f"  {mark}{q}: {row}")

    words = list(strings_upto("ab", 6))
    agree = sum(bfa_accepts(p.bfa, w) == dfa_match(p.minimal, w) == lang_member(g, w, mode)
                for w in words)
    print(f"-- interpreter, BFA and DFA agree on {agree}/{len(words)} strings up to length 6")
    print()
