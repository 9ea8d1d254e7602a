"""Seeded random instances: graphs, lists and tolerances.

Every generator takes a ``random.Random`` so a master seed reproduces a
whole sweep.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .colouring import ListAssignment, ToleranceFn, as_colour, as_fraction
from .errors import InfeasibleParams
from .graph import Graph


def random_regular_graph(n: int, d: int, rng: random.Random, max_tries: int = 1000) -> Graph:
    """Uniform-ish simple d-regular graph on n vertices.

    Pairs half-edges at random while avoiding loops and repeated edges
    among the still-open stubs, restarting when it gets stuck. Dense degrees
    go through the complement.
    """
    if n < 1 or d < 0:
        raise InfeasibleParams("n must be positive and d non-negative")
    if (n * d) % 2:
        raise InfeasibleParams(f"n*d = {n * d} is odd")
    if d >= n:
        raise InfeasibleParams(f"degree {d} needs more than {n} vertices")
    if d == 0:
        return Graph(n, [])
    if 2 * d > n - 1:
        # dense case: complement of a sparse regular graph, where pairing rarely gets stuck
        sparse = set(random_regular_graph(n, n - 1 - d, rng, max_tries).edges)
        return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in sparse])
    for _ in range(max_tries):
        edges = _try_pairing(n, d, rng)
        if edges is not None:
            return Graph(n, sorted(edges))
    raise InfeasibleParams(f"no simple {d}-regular graph found on {n} vertices after {max_tries} tries")


def _try_pairing(n: int, d: int, rng: random.Random) -> set[tuple[int, int]] | None:
    edges: set[tuple[int, int]] = set()
    stubs = [v for v in range(n) for _ in range(d)]
    while stubs:
        open_deg: dict[int, int] = {}
        rng.shuffle(stubs)
        it = iter(stubs)
        for u, v in zip(it, it):
            if u > v:
                u, v = v, u
            if u != v and (u, v) not in edges:
                edges.add((u, v))
            else:
                open_deg[u] = open_deg.get(u, 0) + 1
                open_deg[v] = open_deg.get(v, 0) + 1
        if not open_deg:
            return edges
        # give up when no valid pair remains among open vertices
        rest = list(open_deg)
        if not any(
            (min(a, b), max(a, b)) not in edges for i, a in enumerate(rest) for b in rest[i + 1:]
        ):
            return None
        stubs = [v for v, k in open_deg.items() for _ in range(k)]
    return edges


def random_min_degree_graph(n: int, delta: int, rng: random.Random, p: float = 0.0) -> Graph:
    """Erdős–Rényi G(n, p), then add random edges until every degree is at least ``delta``."""
    if delta >= n:
        raise InfeasibleParams(f"minimum degree {delta} needs more than {n} vertices")
    if not 0 <= p <= 1:
        raise InfeasibleParams("p must lie in [0, 1]")
    adj = [set() for _ in range(n)]
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                adj[u].add(v)
                adj[v].add(u)
    for u in range(n):
        while len(adj[u]) < delta:
            cands = [v for v in range(n) if v != u and v not in adj[u]]
            # prefer partners that are still short
            short = [v for v in cands if len(adj[v]) < delta]
            v = rng.choice(short or cands)
            adj[u].add(v)
            adj[v].add(u)
    edges = [(u, v) for u in range(n) for v in sorted(adj[u]) if u < v]
    return Graph(n, edges)


def random_lists(g: Graph, size: int, pool: int, rng: random.Random, clustered: bool = False) -> ListAssignment:
    """Lists of ``size`` distinct colours from ``1..pool``.

    ``clustered`` biases each vertex towards a small window of the pool so
    neighbouring edges share most of their colours (adversarial for the
    majority constraint).
    """
    if size > pool:
        raise InfeasibleParams(f"list size {size} exceeds the pool of {pool} colours")
    palette = [as_colour(c) for c in range(1, pool + 1)]
    if not clustered:
        return ListAssignment({e: rng.sample(palette, size) for e in range(g.m)})
    width = min(pool, size + 1)
    start = [rng.randrange(pool - width + 1) for _ in range(g.n)]
    out = {}
    for e, (u, _) in enumerate(g.edges):
        window = palette[start[u]:start[u] + width]
        out[e] = rng.sample(window, size)
    return ListAssignment(out)


def random_tolerance_vector(ell: int, eps, rng: random.Random, denom: int = 60) -> list[Fraction]:
    """ℓ rationals in (0, 1) summing exactly to 1 + ε."""
    eps = as_fraction(eps)
    total = 1 + eps
    if not 0 < total < ell:
        raise InfeasibleParams(f"{ell} tolerances below 1 cannot sum to {total}")
    for _ in range(10000):
        cuts = sorted(rng.randint(1, denom - 1) for _ in range(ell - 1))
        parts = [Fraction(b - a, denom) for a, b in zip([0] + cuts, cuts + [denom])]
        vec = [x * total for x in parts]
        if all(0 < x < 1 for x in vec):
            return vec
    raise InfeasibleParams(f"no tolerance vector found for ell={ell}, eps={eps}")


def random_lambda_lists(g: Graph, vector, pool_per_slot: int, rng: random.Random) -> tuple[ListAssignment, ToleranceFn]:
    """Λ-lists: each edge takes one colour from the slot-i pool for every entry α_i.

    Slot i owns colours ``"s{i}_1".."s{i}_{pool}"`` all with tolerance α_i.
    """
    vector = [as_fraction(a) for a in vector]
    tol = {}
    slots = []
    for i, a in enumerate(vector):
        cols = [as_colour(f"s{i}_{j}") for j in range(1, pool_per_slot + 1)]
        slots.append(cols)
        for c in cols:
            tol[c] = a
    lists = ListAssignment({e: [rng.choice(s) for s in slots] for e in range(g.m)})
    return lists, ToleranceFn(tol)


def random_excessive_instance(
    g: Graph, a, eps, rng: random.Random, pool: int = 12
) -> tuple[ListAssignment, ToleranceFn]:
    """ε-excessive lists with every tolerance at least ``a``.

    Tolerances are drawn per colour from [a, 1) on a grid of 1/60; each list
    keeps adding random colours until its tolerance sum reaches 1 + ε.
    """
    a, eps = as_fraction(a), as_fraction(eps)
    if not 0 < a < 1 or eps <= 0:
        raise InfeasibleParams("need 0 < a < 1 and eps > 0")
    lo = max(1, -(-a.numerator * 60 // a.denominator))
    palette = [as_colour(c) for c in range(1, pool + 1)]
    tol = {c: Fraction(rng.randint(lo, 59), 60) for c in palette}
    target = 1 + eps
    if sum(tol.values()) < target:
        raise InfeasibleParams(f"a pool of {pool} colours cannot reach tolerance sum {target}")
    out = {}
    for e in range(g.m):
        order = rng.sample(palette, pool)
        lst, total = [], Fraction(0)
        for c in order:
            lst.append(c)
            total += tol[c]
            if total >= target:
                break
        out[e] = lst
    return ListAssignment(out), ToleranceFn(tol)
