"""Boolean functions over automaton state variables.

`BoolFn` values are small immutable expression trees, built through
`conj`/`disj`/`neg` which fold constants on the fly.  Semantic questions
(equality, canonical form) go through a BDD; `truth_table` is an
independent brute-force backend for up to 16 variables.
"""
from __future__ import annotations

import re
import weakref
from typing import Union

from .bdd import BDD, FALSE, TRUE


class _Node:
    """Hash-consed immutable node: structurally equal nodes are the same object,
    so equality and hashing are O(1) however deep the tree."""
    __slots__ = ("__weakref__",)
    _fields: tuple = ()
    _table: weakref.WeakValueDictionary = weakref.WeakValueDictionary()

    def __new__(cls, *args):
        key = (cls,) + tuple(a if isinstance(a, (str, bool)) else id(a) for a in args)
        node = _Node._table.get(key)
        if node is None:
            node = object.__new__(cls)
            for name, value in zip(cls._fields, args):
                object.__setattr__(node, name, value)
            _Node._table[key] = node
        return node

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __reduce__(self):
        return type(self), tuple(getattr(self, f) for f in self._fields)

    def __repr__(self):
        args = ", ".join(repr(getattr(self, f)) for f in self._fields)
        return f"{type(self).__name__}({args})"


class Const(_Node):
    __slots__ = ("value",)
    _fields = ("value",)

    def __new__(cls, value: bool):
        return super().__new__(cls, bool(value))


class Var(_Node):
    __slots__ = ("name", "temp")
    _fields = ("name", "temp")

    def __new__(cls, name: str, temp: bool = False):
        return super().__new__(cls, name, bool(temp))


class And(_Node):
    __slots__ = ("left", "right")
    _fields = ("left", "right")

    def __new__(cls, left, right):
        return super().__new__(cls, left, right)


class Or(_Node):
    __slots__ = ("left", "right")
    _fields = ("left", "right")

    def __new__(cls, left, right):
        return super().__new__(cls, left, right)


class Neg(_Node):
    __slots__ = ("body",)
    _fields = ("body",)

    def __new__(cls, body):
        return super().__new__(cls, body)


BoolFn = Union[Const, Var, And, Or, Neg]

TRUE_FN = Const(True)
FALSE_FN = Const(False)


def var(name: str) -> Var:
    return Var(name)


def temp(name: str) -> Var:
    return Var(name, temp=True)


def conj(a: BoolFn, b: BoolFn) -> BoolFn:
    if a == FALSE_FN or b == FALSE_FN:
        return FALSE_FN
    if a == TRUE_FN:
        return b
    if b == TRUE_FN or a == b:
        return a
    return And(a, b)


def disj(a: BoolFn, b: BoolFn) -> BoolFn:
    if a == TRUE_FN or b == TRUE_FN:
        return TRUE_FN
    if a == FALSE_FN:
        return b
    if b == FALSE_FN or a == b:
        return a
    return Or(a, b)


def neg(a: BoolFn) -> BoolFn:
    if isinstance(a, Const):
        return Const(not a.value)
    if isinstance(a, Neg):
        return a.body
    return Neg(a)


def disj_all(items) -> BoolFn:
    out = FALSE_FN
    for item in items:
        out = disj(out, item)
    return out


def _leaves(f: BoolFn):
    seen: set = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if id(g) in seen:
            continue
        seen.add(id(g))
        if isinstance(g, Var):
            yield g
        elif isinstance(g, (And, Or)):
            stack += [g.left, g.right]
        elif isinstance(g, Neg):
            stack.append(g.body)


def variables(f: BoolFn) -> set[str]:
    return {v.name for v in _leaves(f)}


def temps(f: BoolFn) -> set[str]:
    return {v.name for v in _leaves(f) if v.temp}


def substitute(f: BoolFn, mapping) -> BoolFn:
    """Replace variables by functions, all at once (images are not re-substituted)."""
    memo: dict = {}

    def go(g):
        if g in memo:
            return memo[g]
        if isinstance(g, Var):
            r = mapping.get(g.name, g)
        elif isinstance(g, And):
            r = conj(go(g.left), go(g.right))
        elif isinstance(g, Or):
            r = disj(go(g.left), go(g.right))
        elif isinstance(g, Neg):
            r = neg(go(g.body))
        else:
            r = g
        memo[g] = r
        return r
    return go(f)


def evaluate(f: BoolFn, assignment) -> bool:
    """Standard boolean semantics; every variable of `f` must be assigned."""
    memo: dict = {}

    def go(g):
        r = memo.get(g)
        if r is not None:
            return r
        if isinstance(g, Const):
            r = g.value
        elif isinstance(g, Var):
            if g.name not in assignment:
                raise KeyError(f"variable {g.name!r} has no value")
            r = bool(assignment[g.name])
        elif isinstance(g, And):
            r = go(g.left) and go(g.right)
        elif isinstance(g, Or):
            r = go(g.left) or go(g.right)
        else:
            r = not go(g.body)
        memo[g] = r
        return r
    return go(f)


def eval_f(f: BoolFn, accepting) -> BoolFn:
    """Set the variables of accepting states to true, leave the rest symbolic."""
    return substitute(f, {q: TRUE_FN for q in accepting})


def eval_p(f: BoolFn, lookahead) -> bool:
    """Lookahead-accepting variables true, every other variable false."""
    lookahead = set(lookahead)
    return evaluate(f, {q: q in lookahead for q in variables(f)})


# ---------------------------------------------------------------------------
# canonical forms

def _natural_key(name: str):
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", name)]


def to_bdd(f: BoolFn, mgr: BDD, memo: dict | None = None) -> int:
    if memo is None:
        memo = {}

    def go(g):
        r = memo.get(g)
        if r is not None:
            return r
        if isinstance(g, Const):
            r = TRUE if g.value else FALSE
        elif isinstance(g, Var):
            r = mgr.var(g.name)
        elif isinstance(g, And):
            r = mgr.conj(go(g.left), go(g.right))
        elif isinstance(g, Or):
            r = mgr.disj(go(g.left), go(g.right))
        else:
            r = mgr.neg(go(g.body))
        memo[g] = r
        return r
    return go(f)


def from_bdd(u: int, mgr: BDD) -> BoolFn:
    """Expand a BDD node into an if-then-else shaped expression."""
    memo: dict = {}

    def go(n):
        if n == TRUE:
            return TRUE_FN
        if n == FALSE:
            return FALSE_FN
        if n not in memo:
            x = Var(mgr.names[mgr.level(n)])
            hi, lo = go(mgr.high(n)), go(mgr.low(n))
            memo[n] = disj(conj(x, hi), conj(neg(x), lo))
        return memo[n]
    return go(u)


def canonical(f: BoolFn, order=None):
    """Hashable canonical form: the reduced ordered BDD under `order`.

    The default order sorts variable names naturally (q2 before q10).
    Two functions have equal canonical forms iff they agree on every
    assignment (given the same order).
    """
    if order is None:
        order = sorted(variables(f), key=_natural_key)
    mgr = BDD(order)
    return mgr.structure(to_bdd(f, mgr))


def equivalent(f: BoolFn, g: BoolFn) -> bool:
    order = sorted(variables(f) | variables(g), key=_natural_key)
    return canonical(f, order) == canonical(g, order)


def truth_table(f: BoolFn, order) -> int:
    """Bitmask of satisfying assignments; bit i encodes the assignment whose
    j-th variable is bit j of i.  Limited to 16 variables."""
    order = list(order)
    if len(order) > 16:
        raise ValueError("truth tables are limited to 16 variables")
    missing = variables(f) - set(order)
    if missing:
        raise KeyError(f"variable {sorted(missing)[0]!r} not in order")
    mask = 0
    for i in range(1 << len(order)):
        assignment = {name: bool(i >> j & 1) for j, name in enumerate(order)}
        if evaluate(f, assignment):
            mask |= 1 << i
    return mask


# ---------------------------------------------------------------------------
# text form

_PREC = {Or: 1, And: 2, Neg: 3}


def show(f: BoolFn, outer: int = 0) -> str:
    """Render with ∧ ∨ ¬; temporaries print as their names."""
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Neg):
        s = "¬" + show(f.body, 3)
    else:
        op = " ∧ " if isinstance(f, And) else " ∨ "
        p = _PREC[type(f)]
        s = show(f.left, p) + op + show(f.right, p)
    return "(" + s + ")" if _PREC[type(f)] < outer else s


_BTOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][\w']*)|(?P<op>[()&|!~∧∨¬]))")


def parse_boolfn(text: str) -> BoolFn:
    """Parse ``(q1 & q2) | !q3`` (or the ∧ ∨ ¬ spellings).

    ``true``/``false`` are constants; names starting with ``f_tmp_`` are
    temporaries.  Binary operators are left-associative.
    """
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _BTOKEN.match(text, pos)
        if not m:
            raise ValueError(f"bad boolean formula at {pos}: {text[pos:]!r}")
        toks.append(m.group("name") or {"∧": "&", "∨": "|", "¬": "!", "~": "!"}.get(m.group("op"), m.group("op")))
        pos = m.end()
    toks.append(None)
    i = 0

    def peek():
        return toks[i]

    def take():
        nonlocal i
        i += 1
        return toks[i - 1]

    def disjunction():
        f = conjunction()
        while peek() == "|":
            take()
            f = Or(f, conjunction())
        return f

    def conjunction():
        f = unary()
        while peek() == "&":
            take()
            f = And(f, unary())
        return f

    def unary():
        t = take()
        if t == "!":
            return Neg(unary())
        if t == "(":
            f = disjunction()
            if take() != ")":
                raise ValueError("missing ')'")
            return f
        if t in ("true", "false"):
            return Const(t == "true")
        if t is None or t in "&|)":
            raise ValueError(f"unexpected {t!r}")
        return Var(t, temp=t.startswith("f_tmp_"))

    f = disjunction()
    if peek() is not None:
        raise ValueError(f"trailing input at token {peek()!r}")
    return f

