"""Which grammars are linear, and what the checker says about the ones that aren't.

Run:  python demos/lpeg_judgement.py
"""
from pathlib import Path

from linpeg import check_wellformed, desugar, format_grammar, is_lpeg, parse_grammar

HERE = Path(__file__).parent / "grammars"

for name in ["example1", "example2", "example3", "no_ab_prefix"]:
    g = parse_grammar((HERE / f"{name}.peg").read_text())
    j = is_lpeg(g)
    print(f"== {name}")
    print(format_grammar(g), end="")
    print("linear:", "yes" if j else "no")
    for v in j.violations:
        print(f"  rule {v.rule}: {v.text!r} ({v.reason})")
    # linearity and well-formedness are separate questions
    diags = check_wellformed(desugar(g))
    print("well-formed:", "yes" if not diags else "; ".join(map(str, diags)))
    print()
