"""Edge colouring of bipartite graphs: König's Δ-colouring and Galvin's list colouring."""

from __future__ import annotations

from collections import Counter, defaultdict
from collections.abc import Mapping
from typing import Callable, Iterable, Sequence

from .colouring import Color, Colouring, ListAssignment, as_colour, colour_key, sorted_colours
from .errors import ListTooShort, NotBipartite, PreconditionError, PreferenceClash
from .graph import Graph
from .transform import BipartitionLabels


def _check_labels(h: Graph, labels: BipartitionLabels) -> None:
    if not labels.check(h):
        raise NotBipartite("labels do not split every edge between X and Y")


def konig_colour_ints(
    h: Graph, labels: BipartitionLabels, colours: int | None = None, owner: Sequence[int] | None = None
) -> list[int]:
    """Proper edge colouring of a bipartite graph with colours ``1..colours`` (default Δ).

    Edges are inserted in id order and take a colour free at both ends; with
    ``owner`` (vertex -> group) the one least used at the two groups so far,
    otherwise the smallest. When no colour is free at both ends, the
    alternating path through one end is flipped; in a bipartite graph that
    path can never reach back.
    """
    _check_labels(h, labels)
    delta = h.max_degree
    k = delta if colours is None else colours
    if k < delta:
        raise PreconditionError(f"{k} colours cannot colour a graph of maximum degree {delta}")
    colour = [0] * h.m
    at: list[dict[int, int]] = [{} for _ in range(h.n)]  # vertex -> {colour: edge}
    use: dict[int, Counter] = defaultdict(Counter)

    def free(v: int) -> int:
        busy = at[v]
        c = 1
        while c in busy:
            c += 1
        return c

    def paint(f: int, c: int) -> None:
        u, w = h.edges[f]
        if colour[f]:
            del at[u][colour[f]]
            del at[w][colour[f]]
            if owner is not None:
                use[owner[u]][colour[f]] -= 1
                use[owner[w]][colour[f]] -= 1
        colour[f] = c
        at[u][c] = f
        at[w][c] = f
        if owner is not None:
            use[owner[u]][c] += 1
            use[owner[w]][c] += 1

    for e, (x, y) in enumerate(h.edges):
        common = [c for c in range(1, k + 1) if c not in at[x] and c not in at[y]]
        if common:
            if owner is None:
                c = common[0]
            else:
                ox, oy = owner[x], owner[y]
                c = min(common, key=lambda c: (use[ox][c] + use[oy][c], c))
        else:
            # walk the a/b path from y, starting with its a-edge, and swap
            a, b = free(x), free(y)
            path = []
            v, want = y, a
            while want in at[v]:
                f = at[v][want]
                path.append(f)
                u, w = h.edges[f]
                v = w if u == v else u
                want = b if want == a else a
            old = [colour[f] for f in path]
            for f in path:
                u, w = h.edges[f]
                del at[u][colour[f]]
                del at[w][colour[f]]
                if owner is not None:
                    use[owner[u]][colour[f]] -= 1
                    use[owner[w]][colour[f]] -= 1
                colour[f] = 0
            for f, col in zip(path, old):
                paint(f, b if col == a else a)
            c = a
        assert c <= k
        paint(e, c)
    return colour


def konig_color(h: Graph, labels: BipartitionLabels) -> Colouring:
    return Colouring(konig_colour_ints(h, labels))


def _phi_value(x) -> object:
    return x if isinstance(x, int) else colour_key(x)


def stable_kernel(
    h: Graph, edges: Iterable[int], phi: Mapping[int, object], labels: BipartitionLabels
) -> set[int]:
    """Stable matching of the edge subset under φ-preferences.

    X-vertices prefer incident edges of larger φ, Y-vertices smaller φ.
    X proposes (deferred acceptance). Every subset edge left out is dominated:
    its X-end holds a kernel edge of larger φ or its Y-end one of smaller φ.
    """
    edges = list(edges)
    xs: dict[int, list[tuple[object, int]]] = {}
    seen: dict[tuple[int, object], int] = {}
    for e in edges:
        u, v = h.edges[e]
        if labels.side[u] == labels.side[v]:
            raise NotBipartite(f"edge {e} lies inside one side")
        x, y = (u, v) if labels.side[u] == "X" else (v, u)
        p = _phi_value(phi[e])
        for end in (x, y):
            if (end, p) in seen:
                raise PreferenceClash(f"edges {seen[(end, p)]} and {e} share vertex {end} and φ value")
            seen[(end, p)] = e
        xs.setdefault(x, []).append((p, e))
    for lst in xs.values():
        lst.sort(reverse=True)  # X prefers larger φ
    nxt = {x: 0 for x in xs}
    held: dict[int, tuple[object, int]] = {}  # y -> (φ, edge)
    free = sorted(xs, reverse=True)
    while free:
        x = free.pop()
        lst = xs[x]
        i = nxt[x]
        if i == len(lst):
            continue
        nxt[x] = i + 1
        p, e = lst[i]
        u, v = h.edges[e]
        y = v if u == x else u
        cur = held.get(y)
        if cur is None:
            held[y] = (p, e)
        elif p < cur[0]:  # Y prefers smaller φ
            held[y] = (p, e)
            cu, cv = h.edges[cur[1]]
            free.append(cu if labels.side[cu] == "X" else cv)
        else:
            free.append(x)
    return {e for _, e in held.values()}


RoundHook = Callable[[Color, set[int], dict[int, set[Color]], set[int]], None]


def galvin_list_color(
    h: Graph,
    labels: BipartitionLabels,
    lists: ListAssignment,
    on_round: RoundHook | None = None,
) -> Colouring:
    """Proper edge colouring of a bipartite graph from lists of size at least Δ.

    With φ a König colouring, colours are handled in ascending token order:
    the uncoloured edges still listing colour c get a stable kernel, the
    kernel is coloured c, and c is struck from every remaining list.

    ``on_round(c, kernel, remaining_lists, uncoloured)`` is called after each
    round (before the kernel is removed) for auditing.
    """
    _check_labels(h, labels)
    lists.check_covers(h)
    delta = h.max_degree
    short = [e for e in range(h.m) if len(lists[e]) < delta]
    if short:
        raise ListTooShort(f"edge {short[0]} has {len(lists[short[0]])} colours, Δ = {delta}")
    phi = konig_colour_ints(h, labels)
    remaining: dict[int, set[Color]] = {e: set(lists[e]) for e in range(h.m)}
    result: dict[int, Color] = {}
    by_colour: dict[Color, set[int]] = {}
    for e, lst in remaining.items():
        for c in lst:
            by_colour.setdefault(c, set()).add(e)
    for c in sorted_colours(by_colour):
        if not remaining:
            break
        candidates = {e for e in by_colour[c] if e in remaining}
        if not candidates:
            continue
        kernel = stable_kernel(h, candidates, phi, labels)
        for e in candidates:
            remaining[e].discard(c)
        if on_round is not None:
            on_round(c, kernel, remaining, set(remaining))
        for e in kernel:
            result[e] = c
            del remaining[e]
    if remaining:
        e = min(remaining)
        raise PreconditionError(f"Galvin loop ran out of colours at edge {e}")  # unreachable with |L| >= Δ
    return Colouring(result)


def line_outdegree(h: Graph, phi: list[int], labels: BipartitionLabels, e: int, alive: set[int]) -> int:
    """Number of live edges that can dominate ``e``: larger φ at its X-end, smaller at its Y-end."""
    u, v = h.edges[e]
    x, y = (u, v) if labels.side[u] == "X" else (v, u)
    out = sum(1 for _, f in h.adjacency[x] if f != e and f in alive and phi[f] > phi[e])
    out += sum(1 for _, f in h.adjacency[y] if f != e and f in alive and phi[f] < phi[e])
    return out


def sentinel_colours(count: int) -> list[Color]:
    """Fresh colour tokens for ghost edges; they never collide with file tokens."""
    return [as_colour(f"~ghost{i}") for i in range(count)]
