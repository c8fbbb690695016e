"""Boolean finite automata, DFAs, and the algorithms connecting them."""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

from . import boolfn as bf
from .bdd import BDD, FALSE, TRUE
from .boolfn import FALSE_FN, BoolFn
from .errors import ConversionError, ResourceLimitExceeded


@dataclass(frozen=True)
class BFA:
    """(Q, Σ, δ, f0, F, P).

    `delta` maps ``(state, symbol)`` to a boolean function; absent pairs mean
    false.  `initial_functions` maps temporary variable names to the
    initial function of their nonterminal and is empty once finalized.
    """
    states: tuple
    alphabet: tuple
    delta: dict
    initial: BoolFn
    accepting: frozenset
    lookahead: frozenset
    initial_functions: dict = field(default_factory=dict)
    _compiled: object = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(sorted(self.alphabet)))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "lookahead", frozenset(self.lookahead))
        known = set(self.states)
        for fn in self.functions():
            for name in bf.variables(fn) - bf.temps(fn):
                if name not in known:
                    raise ValueError(f"variable {name!r} is not a state")

    def transition(self, q: str, a: str) -> BoolFn:
        return self.delta.get((q, a), FALSE_FN)

    def functions(self):
        yield self.initial
        yield from self.delta.values()
        yield from self.initial_functions.values()

    @property
    def is_finalized(self) -> bool:
        return not any(bf.temps(fn) for fn in self.functions())

    def compiled(self) -> _CompiledBFA:
        if self._compiled is None:
            object.__setattr__(self, "_compiled", _CompiledBFA(self))
        return self._compiled


class _CompiledBFA:
    """BDD images of a finalized BFA, shared by stepping, acceptance and determinization."""

    def __init__(self, b: BFA, prune: bool = True):
        if not b.is_finalized:
            raise ConversionError("BFA still contains temporary variables")
        self.mgr = mgr = BDD(b.states)
        memo: dict = {}
        self.images = {a: {} for a in b.alphabet}
        for (q, a), fn in b.delta.items():
            if a in self.images:
                u = bf.to_bdd(fn, mgr, memo)
                if u != FALSE:
                    self.images[a][mgr.level_of[q]] = u
        self.initial = bf.to_bdd(b.initial, mgr, memo)
        self.final_levels = {mgr.level_of[q] for q in b.accepting | b.lookahead}
        self.accepting_levels = {mgr.level_of[q] for q in b.accepting}
        if prune:
            self._prune()
        self.step_cache = {a: {} for a in b.alphabet}
        # compose keeps unmapped variables, so stepping needs total maps
        levels = range(len(mgr.names))
        self.step_images = {a: {lv: img.get(lv, FALSE) for lv in levels}
                            for a, img in self.images.items()}
        # a symbol outside the alphabet sends every state to false
        self.no_images = {lv: FALSE for lv in levels}

    def _prune(self):
        """Replace states that can never contribute (no transitions, not final) by false."""
        while True:
            live = set(self.final_levels)
            for img in self.images.values():
                live.update(img)
            dead = {lv: FALSE for lv in range(len(self.mgr.names)) if lv not in live}
            if not dead:
                return
            cache: dict = {}
            changed = False
            for a, img in self.images.items():
                for lv, u in list(img.items()):
                    v = self.mgr.compose(u, dead, cache)
                    if v == FALSE:
                        del img[lv]
                        changed = True
                    else:
                        img[lv] = v
            self.initial = self.mgr.compose(self.initial, dead, cache)
            if not changed:
                return

    def step(self, u: int, a: str) -> int:
        img = self.step_images.get(a)
        if img is None:
            return self.mgr.compose(u, self.no_images)
        return self.mgr.compose(u, img, self.step_cache[a])

    def accepts_node(self, u: int) -> bool:
        return self.mgr.evaluate(u, self.final_levels)


def bfa_step(b: BFA, f: BoolFn, a: str) -> BoolFn:
    """δ(f, a): substitute every state variable q by δ(q, a)."""
    if bf.temps(f):
        raise ConversionError("cannot step a function containing temporary variables")
    return bf.substitute(f, {q: b.transition(q, a) for q in bf.variables(f)})


def bfa_run(b: BFA, f: BoolFn, word: str) -> BoolFn:
    for a in word:
        f = bfa_step(b, f, a)
    return f


def bfa_accepts(b: BFA, word: str) -> bool:
    """Step f0 over the word, then evaluate with F ∪ P true.  Foreign symbols reject."""
    c = b.compiled()
    u = c.initial
    for a in word:
        if a not in c.images:
            return False
        u = c.step(u, a)
    return c.accepts_node(u)


def bfa_accepts_backward(b: BFA, word: str) -> bool:
    """Acceptance computed right to left on plain boolean values.

    δ(f0, w)(c) equals f0 evaluated at the vector whose q-component is
    δ(q, w)(c), and that vector can be built suffix by suffix.  No BDDs,
    no symbolic stepping: used as an independent check.
    """
    if any(a not in b.alphabet for a in word):
        return False
    final = b.accepting | b.lookahead
    values = {q: q in final for q in b.states}
    for a in reversed(word):
        values = {q: bf.evaluate(b.transition(q, a), values) for q in b.states}
    return bf.evaluate(b.initial, values)


def bfa_consume(b: BFA, word: str, lookahead: str = "rest") -> set[int]:
    """Lengths |x| of prefixes the automaton consumes from `word`.

    x qualifies when, after reading x and setting the accepting variables
    true, reading y leaves a function that holds with only the
    lookahead-accepting variables true.  With ``lookahead="rest"`` y is the
    whole remaining input; ``"any"`` lets y be any prefix of it.
    """
    if lookahead not in ("rest", "any"):
        raise ValueError("lookahead must be 'rest' or 'any'")
    c = b.compiled()
    p_levels = {c.mgr.level_of[q] for q in b.lookahead}
    to_true = {lv: TRUE for lv in c.accepting_levels}
    out = set()
    u = c.initial
    for i in range(len(word) + 1):
        if i:
            u = c.step(u, word[i - 1])
        v = c.mgr.compose(u, to_true)
        hits = []
        for a in word[i:]:
            hits.append(c.mgr.evaluate(v, p_levels))
            v = c.step(v, a)
        hits.append(c.mgr.evaluate(v, p_levels))
        if hits[-1] if lookahead == "rest" else any(hits):
            out.add(i)
    return out


# ---------------------------------------------------------------------------
# DFAs

@dataclass(frozen=True)
class DFA:
    alphabet: tuple
    states: tuple
    start: str
    accepting: frozenset
    transitions: dict

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(sorted(self.alphabet)))
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        states = set(self.states)
        if self.start not in states:
            raise ValueError(f"start state {self.start!r} is not a state")
        if not self.accepting <= states:
            raise ValueError("accepting states must be states")
        for q in self.states:
            row = self.transitions.get(q)
            if row is None or set(row) != set(self.alphabet):
                raise ValueError(f"transitions of {q!r} are not total over the alphabet")
            for target in row.values():
                if target not in states:
                    raise ValueError(f"transition target {target!r} is not a state")

    def __len__(self):
        return len(self.states)


def bfa_to_dfa(b: BFA, max_states: int = 1_000_000) -> DFA:
    """Subset-style construction whose states are canonical boolean functions.

    Each DFA state is the BDD of a function reachable from f0; it accepts
    when the function holds with F ∪ P true.  The constant false function
    plays the sink.
    """
    c = b.compiled()
    names = {c.initial: "d0"}
    order = [c.initial]
    queue = deque([c.initial])
    transitions = {}
    while queue:
        u = queue.popleft()
        row = {}
        for a in b.alphabet:
            v = c.step(u, a)
            if v not in names:
                if len(names) >= max_states:
                    raise ResourceLimitExceeded(f"DFA exceeds {max_states} states")
                names[v] = f"d{len(names)}"
                order.append(v)
                queue.append(v)
            row[a] = names[v]
        transitions[names[u]] = row
    accepting = {names[u] for u in order if c.accepts_node(u)}
    return DFA(b.alphabet, [names[u] for u in order], "d0", accepting, transitions)


def dfa_match(d: DFA, word: str) -> bool:
    state = d.start
    transitions = d.transitions
    for a in word:
        nxt = transitions[state].get(a)
        if nxt is None:
            return False
        state = nxt
    return state in d.accepting


def _reachable(d: DFA) -> list:
    seen = {d.start}
    order = [d.start]
    queue = deque(order)
    while queue:
        q = queue.popleft()
        for a in d.alphabet:
            r = d.transitions[q][a]
            if r not in seen:
                seen.add(r)
                order.append(r)
                queue.append(r)
    return order


def dfa_minimize(d: DFA, prefix: str = "s") -> DFA:
    """Hopcroft partition refinement; states renamed ``s0, s1, ...`` in BFS order."""
    states = _reachable(d)
    inverse = {a: {q: [] for q in states} for a in d.alphabet}
    for q in states:
        for a in d.alphabet:
            inverse[a][d.transitions[q][a]].append(q)

    acc = [q for q in states if q in d.accepting]
    rej = [q for q in states if q not in d.accepting]
    blocks = [set(b) for b in (acc, rej) if b]
    block_of = {q: i for i, b in enumerate(blocks) for q in b}
    work = set(range(len(blocks)))
    while work:
        splitter = set(blocks[work.pop()])
        for a in d.alphabet:
            touched: dict = {}
            for q in splitter:
                for p in inverse[a][q]:
                    touched.setdefault(block_of[p], set()).add(p)
            for bi, inside in touched.items():
                block = blocks[bi]
                if len(inside) == len(block):
                    continue
                outside = block - inside
                blocks[bi] = inside
                nb = len(blocks)
                blocks.append(outside)
                for q in outside:
                    block_of[q] = nb
                if bi in work or len(outside) <= len(inside):
                    work.add(nb)
                else:
                    work.add(bi)

    # rebuild in BFS order from the start block
    rep = {bi: next(iter(sorted(b))) for bi, b in enumerate(blocks)}
    names = {block_of[d.start]: f"{prefix}0"}
    queue = deque([block_of[d.start]])
    transitions = {}
    while queue:
        bi = queue.popleft()
        row = {}
        for a in d.alphabet:
            target = block_of[d.transitions[rep[bi]][a]]
            if target not in names:
                names[target] = f"{prefix}{len(names)}"
                queue.append(target)
            row[a] = names[target]
        transitions[names[bi]] = row
    accepting = {names[bi] for bi in names if rep[bi] in d.accepting}
    return DFA(d.alphabet, list(names.values()), f"{prefix}0", accepting, transitions)


def dfa_equiv(d1: DFA, d2: DFA) -> str | None:
    """None when the languages agree, else a shortest distinguishing string.

    Breadth-first search over the product automaton; among shortest
    witnesses the lexicographically smallest is returned.
    """
    if d1.alphabet != d2.alphabet:
        raise ValueError(f"alphabets differ: {d1.alphabet} vs {d2.alphabet}")
    start = (d1.start, d2.start)
    parent = {start: None}
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        p, q = pair
        if (p in d1.accepting) != (q in d2.accepting):
            out = []
            while parent[pair] is not None:
                pair, a = parent[pair]
                out.append(a)
            return "".join(reversed(out))
        for a in d1.alphabet:
            nxt = (d1.transitions[p][a], d2.transitions[q][a])
            if nxt not in parent:
                parent[nxt] = (pair, a)
                queue.append(nxt)
    return None


# ---------------------------------------------------------------------------
# serialization

def dfa_to_dict(d: DFA) -> dict:
    return {
        "alphabet": list(d.alphabet),
        "states": list(d.states),
        "start": d.start,
        "accepting": sorted(d.accepting, key=d.states.index),
        "transitions": {q: dict(sorted(d.transitions[q].items())) for q in d.states},
    }


def dfa_to_json(d: DFA) -> str:
    return json.dumps(dfa_to_dict(d), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def dfa_from_dict(data: dict) -> DFA:
    try:
        return DFA(tuple(data["alphabet"]), tuple(data["states"]), data["start"],
                   frozenset(data["accepting"]),
                   {q: dict(row) for q, row in data["transitions"].items()})
    except KeyError as exc:
        raise ValueError(f"DFA JSON lacks key {exc.args[0]!r}") from None


def dfa_from_json(text: str) -> DFA:
    return dfa_from_dict(json.loads(text))


def _dot_id(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def dfa_to_dot(d: DFA, name: str = "dfa") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;", '  __start [shape=point, label=""];']
    for q in d.states:
        shape = "doublecircle" if q in d.accepting else "circle"
        lines.append(f"  {_dot_id(q)} [shape={shape}];")
    lines.append(f"  __start -> {_dot_id(d.start)};")
    for q in d.states:
        grouped: dict = {}
        for a in d.alphabet:
            grouped.setdefault(d.transitions[q][a], []).append(a)
        for target, symbols in grouped.items():
            label = ",".join(symbols)
            lines.append(f"  {_dot_id(q)} -> {_dot_id(target)} [label={_dot_id(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def bfa_to_dot(b: BFA, name: str = "bfa") -> str:
    """States as circles (F: double circle, P: double octagon).

    A transition whose function is a single state is a plain edge; anything
    else goes through a box node labelled with the function, with dashed
    edges to the states it mentions.
    """
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    for q in b.states:
        if q in b.accepting:
            attrs = 'shape=doublecircle, xlabel="F"'
        elif q in b.lookahead:
            attrs = 'shape=doubleoctagon, xlabel="P"'
        else:
            attrs = "shape=circle"
        lines.append(f"  {_dot_id(q)} [{attrs}];")
    boxes = 0

    def target(src, label, fn):
        nonlocal boxes
        if isinstance(fn, bf.Var):
            lines.append(f"  {src} -> {_dot_id(fn.name)} [label={_dot_id(label)}];")
            return
        box = f"f{boxes}"
        boxes += 1
        lines.append(f"  {box} [shape=box, label={_dot_id(bf.show(fn))}];")
        lines.append(f"  {src} -> {box} [label={_dot_id(label)}];")
        for v in sorted(bf.variables(fn), key=bf._natural_key):
            lines.append(f"  {box} -> {_dot_id(v)} [style=dashed, arrowhead=none];")

    lines.append('  __init [shape=point, label=""];')
    target("__init", "f0", b.initial)
    for (q, a), fn in sorted(b.delta.items(), key=lambda kv: (b.states.index(kv[0][0]), kv[0][1])):
        if fn != FALSE_FN:
            target(_dot_id(q), a, fn)
    lines.append("}")
    return "\n".join(lines) + "\n"
