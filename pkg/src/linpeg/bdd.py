"""A small reduced ordered binary decision diagram manager.

Nodes are integers; 0 and 1 are the constants.  Variable order is the order
of declaration.  No garbage collection: a manager lives as long as one
automaton computation.
"""
from __future__ import annotations

FALSE = 0
TRUE = 1


class BDD:
    def __init__(self, variables=()):
        self.names: list[str] = []
        self.level_of: dict[str, int] = {}
        # node -> (level, low, high); terminals sit below every variable
        self._nodes: list[tuple[int, int, int]] = [(1 << 30, 0, 0), (1 << 30, 1, 1)]
        self._unique: dict[tuple[int, int, int], int] = {}
        self._ite_cache: dict[tuple[int, int, int], int] = {}
        for name in variables:
            self.declare(name)

    def declare(self, name: str) -> int:
        if name not in self.level_of:
            self.level_of[name] = len(self.names)
            self.names.append(name)
        return self.level_of[name]

    def __len__(self):
        return len(self._nodes)

    def level(self, u: int) -> int:
        return self._nodes[u][0]

    def low(self, u: int) -> int:
        return self._nodes[u][1]

    def high(self, u: int) -> int:
        return self._nodes[u][2]

    def mk(self, level: int, low: int, high: int) -> int:
        if low == high:
            return low
        key = (level, low, high)
        u = self._unique.get(key)
        if u is None:
            u = len(self._nodes)
            self._nodes.append(key)
            self._unique[key] = u
        return u

    def var(self, name: str) -> int:
        return self.mk(self.level_of[name], FALSE, TRUE)

    def ite(self, f: int, g: int, h: int) -> int:
        if f == TRUE:
            return g
        if f == FALSE:
            return h
        if g == h:
            return g
        if g == TRUE and h == FALSE:
            return f
        key = (f, g, h)
        r = self._ite_cache.get(key)
        if r is not None:
            return r
        nodes = self._nodes
        top = min(nodes[f][0], nodes[g][0], nodes[h][0])
        f0, f1 = self._cofactors(f, top)
        g0, g1 = self._cofactors(g, top)
        h0, h1 = self._cofactors(h, top)
        r = self.mk(top, self.ite(f0, g0, h0), self.ite(f1, g1, h1))
        self._ite_cache[key] = r
        return r

    def _cofactors(self, u, level):
        lv, lo, hi = self._nodes[u]
        if lv == level:
            return lo, hi
        return u, u

    def neg(self, u: int) -> int:
        return self.ite(u, FALSE, TRUE)

    def conj(self, u: int, v: int) -> int:
        return self.ite(u, v, FALSE)

    def disj(self, u: int, v: int) -> int:
        return self.ite(u, TRUE, v)

    def compose(self, u: int, images: dict, cache: dict | None = None) -> int:
        """Simultaneously substitute variable levels by the nodes in `images`.

        `cache` may be shared between calls that use the same `images`.
        """
        if cache is None:
            cache = {}
        return self._compose(u, images, cache)

    def _compose(self, u, images, cache):
        if u <= TRUE:
            return u
        r = cache.get(u)
        if r is not None:
            return r
        lv, lo, hi = self._nodes[u]
        img = images.get(lv)
        if img is None:
            img = self.mk(lv, FALSE, TRUE)
        r = self.ite(img, self._compose(hi, images, cache), self._compose(lo, images, cache))
        cache[u] = r
        return r

    def restrict(self, u: int, values: dict) -> int:
        """Fix the variables at the given levels to constants."""
        return self.compose(u, {lv: TRUE if b else FALSE for lv, b in values.items()})

    def evaluate(self, u: int, true_levels) -> bool:
        """Value of `u` when exactly the variables at `true_levels` are true."""
        nodes = self._nodes
        while u > TRUE:
            lv, lo, hi = nodes[u]
            u = hi if lv in true_levels else lo
        return u == TRUE

    def support(self, u: int) -> set:
        seen, out, stack = set(), set(), [u]
        while stack:
            n = stack.pop()
            if n <= TRUE or n in seen:
                continue
            seen.add(n)
            lv, lo, hi = self._nodes[n]
            out.add(self.names[lv])
            stack += [lo, hi]
        return out

    def structure(self, u: int):
        """A manager-independent nested tuple ``(var, low, high)`` for `u`."""
        memo = {}

        def go(n):
            if n <= TRUE:
                return n == TRUE
            if n not in memo:
                lv, lo, hi = self._nodes[n]
                memo[n] = (self.names[lv], go(lo), go(hi))
            return memo[n]
        return go(u)

    def count_nodes(self, u: int) -> int:
        seen, stack = set(), [u]
        while stack:
            n = stack.pop()
            if n in seen:
                continue
            seen.add(n)
            if n > TRUE:
                stack += [self._nodes[n][1], self._nodes[n][2]]
        return len(seen)
