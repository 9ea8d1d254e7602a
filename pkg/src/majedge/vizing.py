"""(Δ+1)-edge-colouring of simple graphs by fan rotation (Misra and Gries)."""

from __future__ import annotations

from .colouring import Colouring
from .graph import Graph


class _State:
    def __init__(self, g: Graph):
        self.g = g
        self.k = g.max_degree + 1
        self.colour = [0] * g.m
        self.at: list[dict[int, int]] = [{} for _ in range(g.n)]  # vertex -> {colour: edge}

    def other(self, e: int, v: int) -> int:
        a, b = self.g.edges[e]
        return b if a == v else a

    def free(self, v: int) -> int:
        busy = self.at[v]
        for c in range(1, self.k + 1):
            if c not in busy:
                return c
        raise AssertionError(f"vertex {v} has no free colour")

    def is_free(self, v: int, c: int) -> bool:
        return c not in self.at[v]

    def set(self, e: int, c: int) -> None:
        old = self.colour[e]
        u, v = self.g.edges[e]
        if old:
            del self.at[u][old]
            del self.at[v][old]
        self.colour[e] = c
        if c:
            self.at[u][c] = e
            self.at[v][c] = e


def _fan(s: _State, u: int, first: int) -> list[int]:
    """Maximal fan at ``u`` starting with the uncoloured edge to ``first``."""
    fan = [first]
    used = {first}
    grew = True
    while grew:
        grew = False
        last = fan[-1]
        for c, e in sorted(s.at[u].items()):
            w = s.other(e, u)
            if w not in used and s.is_free(last, c):
                fan.append(w)
                used.add(w)
                grew = True
                break
    return fan


def _invert_path(s: _State, u: int, c: int, d: int) -> None:
    """Swap c and d along the c/d path that starts at ``u`` (``c`` is free at ``u``)."""
    path = []
    v, want = u, d
    while want in s.at[v]:
        e = s.at[v][want]
        path.append(e)
        v = s.other(e, v)
        want = c if want == d else d
    old = [s.colour[e] for e in path]
    for e in path:
        s.set(e, 0)
    for e, col in zip(path, old):
        s.set(e, c if col == d else d)


def vizing_color(g: Graph) -> Colouring:
    """Proper edge colouring using colours ``1..Δ+1`` (as tokens ``"1"``...)."""
    s = _State(g)
    for e, (u, v) in enumerate(g.edges):
        fan = _fan(s, u, v)
        c = s.free(u)
        d = s.free(fan[-1])
        if c != d:
            _invert_path(s, u, c, d)
        # shortest fan prefix that is still a fan and ends at a vertex missing d
        edge_to = {w: f for f, w in ((f, s.other(f, u)) for f in s.at[u].values())}
        edge_to[v] = e
        stop = None
        for i, w in enumerate(fan):
            if i > 0:
                prev = fan[i - 1]
                if not s.is_free(prev, s.colour[edge_to[w]]):
                    break
            if s.is_free(w, d):
                stop = i
                break
        assert stop is not None, "fan rotation found no end vertex"
        # rotate: edge to fan[i] takes the colour of the edge to fan[i+1]
        for i in range(stop):
            nxt = s.colour[edge_to[fan[i + 1]]]
            s.set(edge_to[fan[i + 1]], 0)
            s.set(edge_to[fan[i]], nxt)
        s.set(edge_to[fan[stop]], d)
    return Colouring(s.colour)
