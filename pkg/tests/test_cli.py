import json
import subprocess
import sys
from pathlib import Path

import pytest

from linpeg.cli import main

GRAMMARS = Path(__file__).resolve().parent.parent / "demos" / "grammars"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_check_linear(capsys):
    code, out, _ = run(capsys, "check", GRAMMARS / "example1.peg")
    assert code == 0 and "LPEG: yes" in out


def test_check_nonlinear(capsys):
    code, out, _ = run(capsys, "check", GRAMMARS / "example3.peg")
    assert code == 1
    assert "LPEG: no" in out and "aAa" in out and "B*" in out


def test_check_illformed(tmp_path, capsys):
    f = tmp_path / "loop.peg"
    f.write_text("A <- '' A / 'a'\n")
    code, out, _ = run(capsys, "check", f)
    assert code == 1 and "well-formed: no" in out


def test_compile_then_match(tmp_path, capsys):
    out_json = tmp_path / "out.json"
    dot = tmp_path / "bfa.dot"
    code, _, err = run(capsys, "compile", GRAMMARS / "astarb.peg", "--mode", "exact",
                       "-o", out_json, "--emit-bfa", dot)
    assert code == 0 and "3 states" in err
    assert json.loads(out_json.read_text())["start"] == "s0"
    assert dot.read_text().startswith("digraph bfa")
    assert run(capsys, "match", "--dfa", out_json, "aab")[:2] == (0, "accepted\n")
    assert run(capsys, "match", "--dfa", out_json, "aba")[:2] == (1, "rejected\n")


def test_compile_is_deterministic(tmp_path, capsys):
    outs = []
    for i in range(2):
        target = tmp_path / f"o{i}.json"
        run(capsys, "compile", GRAMMARS / "example1.peg", "--mode", "prefix", "-o", target)
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]


def test_match_from_grammar(capsys):
    assert run(capsys, "match", "--grammar", GRAMMARS / "astarb.peg", "--mode", "prefix", "ba")[0] == 0
    assert run(capsys, "match", "--grammar", GRAMMARS / "astarb.peg", "ba")[0] == 1


def test_run_interpreter(capsys):
    assert run(capsys, "run", GRAMMARS / "astarb.peg", "aabxx")[:2] == (0, "Consumed(3)\n")
    assert run(capsys, "run", GRAMMARS / "astarb.peg", "aa")[:2] == (1, "Fail\n")


def test_regex2lpeg(capsys):
    code, out, _ = run(capsys, "regex2lpeg", "(a|b)*abb")
    assert code == 0 and out.startswith("%alphabet ab\n")
    code, out, _ = run(capsys, "regex2lpeg", "a*", "--alphabet", "abc", "--unanchored")
    assert "%alphabet abc" in out and "!." not in out
    code, _, err = run(capsys, "regex2lpeg", "(a")
    assert code == 2 and "bad regex" in err


def test_dfa2lpeg_and_equiv(tmp_path, capsys):
    dfa = tmp_path / "d.json"
    run(capsys, "compile", GRAMMARS / "astarb.peg", "-o", dfa)
    code, out, _ = run(capsys, "dfa2lpeg", dfa)
    assert code == 0
    back = tmp_path / "back.peg"
    back.write_text(out)
    assert run(capsys, "equiv", back, dfa)[0] == 0
    assert run(capsys, "equiv", GRAMMARS / "astarb.peg", back, "--via", "interp")[0] == 0
    code, out, _ = run(capsys, "equiv", GRAMMARS / "astarb.peg", GRAMMARS / "example2.peg")
    assert code == 1 and 'counterexample: "ab"' in out


def test_export_dot(tmp_path, capsys):
    code, out, _ = run(capsys, "export-dot", "grammar", GRAMMARS / "astarb.peg")
    assert code == 0 and "doubleoctagon" in out
    code, out, _ = run(capsys, "export-dot", "grammar", GRAMMARS / "astarb.peg", "--stage", "dfa")
    assert code == 0 and out.startswith("digraph dfa")


def test_exit_codes(tmp_path, capsys):
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "check", tmp_path / "missing.peg")[0] == 2
    bad = tmp_path / "bad.peg"
    bad.write_text("A <- (\n")
    code, _, err = run(capsys, "check", bad)
    assert code == 2 and "line 2, column 1" in err
    code, _, err = run(capsys, "compile", GRAMMARS / "example3.peg")
    assert code == 1 and "aAa" in err
    code, _, err = run(capsys, "compile", GRAMMARS / "no_ab_prefix.peg", "--max-states", "1")
    assert code == 3 and "resource" in err
    junk = tmp_path / "junk.json"
    junk.write_text("{}")
    assert run(capsys, "match", "--dfa", junk, "a")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "linpeg", "check", str(GRAMMARS / "example2.peg")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "LPEG: yes" in proc.stdout
