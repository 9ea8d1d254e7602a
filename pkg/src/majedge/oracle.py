"""Exhaustive ground truth for small instances.

* ``brute_force`` / ``count_feasible``: depth-first search over list
  colourings with per-vertex counters and exact caps, or (``prune=False``)
  a plain product enumeration checked by the verifiers.
* ``build_counterexample``: the K_{n,n} instance with vertex-dependent
  tolerances that has no colouring.
* ``failure_probability_exact``: exact probability that a star's centre is
  overloaded when its edges draw from given tolerance-vector lists.
* ``binomial_window_sum``: sums of consecutive entries of a Pascal row.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .colouring import (
    Color,
    Colouring,
    ListAssignment,
    ToleranceFn,
    VertexToleranceFn,
    as_colour,
    as_fraction,
    verify_majority,
    verify_vertex_tolerance,
)
from .errors import BetaTooLarge, BudgetExceeded, InvalidProbabilities, PreconditionError
from .graph import Graph

DEFAULT_BUDGET = 2**24


@dataclass(frozen=True)
class Instance:
    graph: Graph
    lists: ListAssignment
    tolerance: ToleranceFn | VertexToleranceFn
    eps: Fraction | None = None

    def __post_init__(self):
        self.lists.check_covers(self.graph)

    def bound(self, v: int, c: Color) -> Fraction:
        if isinstance(self.tolerance, VertexToleranceFn):
            return self.tolerance(v, c)
        return self.tolerance(c)

    def cap(self, v: int, c: Color) -> int:
        """Largest allowed count of colour c at v: floor(tolerance * d(v))."""
        t = self.bound(v, c)
        return (t.numerator * self.graph.degree(v)) // t.denominator

    def verify(self, w: Colouring):
        if isinstance(self.tolerance, VertexToleranceFn):
            return verify_vertex_tolerance(self.graph, w, self.tolerance)
        return verify_majority(self.graph, w, self.tolerance)

    def search_space(self) -> int:
        return math.prod(len(self.lists[e]) for e in range(self.graph.m))


def _check_budget(inst: Instance, budget: int) -> None:
    size = inst.search_space()
    if size > budget:
        raise BudgetExceeded(f"{size} assignments exceed the budget of {budget}")


class _Search:
    """DFS over edges ordered by (list size, id), pruning on exceeded caps."""

    def __init__(self, inst: Instance, fixed: dict[int, Color] | None = None):
        g = inst.graph
        self.inst = inst
        self.order = sorted(range(g.m), key=lambda e: (len(inst.lists[e]), e))
        self.caps: dict[tuple[int, Color], int] = {}
        self.counts: list[dict[Color, int]] = [dict() for _ in range(g.n)]
        self.colour: list[Color | None] = [None] * g.m
        self.fixed = fixed or {}

    def cap(self, v: int, c: Color) -> int:
        x = self.caps.get((v, c))
        if x is None:
            x = self.caps[(v, c)] = self.inst.cap(v, c)
        return x

    def choices(self, e: int):
        if e in self.fixed:
            return (self.fixed[e],)
        return self.inst.lists[e]

    def run(self, count_all: bool) -> tuple[int, list[Color] | None]:
        edges = self.inst.graph.edges
        order, counts, colour = self.order, self.counts, self.colour
        found = 0
        witness = None

        def go(i: int) -> bool:
            nonlocal found, witness
            if i == len(order):
                found += 1
                if witness is None:
                    witness = list(colour)
                return not count_all
            e = order[i]
            u, v = edges[e]
            for c in self.choices(e):
                cu = counts[u].get(c, 0) + 1
                cv = counts[v].get(c, 0) + 1
                if cu > self.cap(u, c) or cv > self.cap(v, c):
                    continue
                counts[u][c] = cu
                counts[v][c] = cv
                colour[e] = c
                stop = go(i + 1)
                counts[u][c] = cu - 1
                counts[v][c] = cv - 1
                colour[e] = None
                if stop:
                    return True
            return False

        go(0)
        return found, witness


def _search_part(inst: Instance, first_edge: int | None, c: Color | None, count_all: bool):
    fixed = {} if first_edge is None else {first_edge: c}
    return _Search(inst, fixed).run(count_all)


def _run(inst: Instance, count_all: bool, workers: int) -> tuple[int, list[Color] | None]:
    g = inst.graph
    if g.m == 0:
        return 1, []
    if workers <= 1:
        return _search_part(inst, None, None, count_all)
    first = min(range(g.m), key=lambda e: (len(inst.lists[e]), e))
    parts = list(inst.lists[first])
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_search_part, [inst] * len(parts), [first] * len(parts), parts, [count_all] * len(parts)))
    total = sum(r[0] for r in results)
    witness = next((r[1] for r in results if r[1] is not None), None)
    return total, witness


def _product(inst: Instance):
    g = inst.graph
    # list entries are interned colours already
    for combo in itertools.product(*(inst.lists[e] for e in range(g.m))):
        yield Colouring.from_colours(combo)


def brute_force(
    inst: Instance, budget: int = DEFAULT_BUDGET, prune: bool = True, workers: int = 1
) -> Colouring | None:
    """A verified feasible colouring, or None if none exists.

    ``prune=False`` walks the full product of the lists and asks the exact
    verifier about every assignment; it shares no code with the DFS.
    """
    _check_budget(inst, budget)
    if not prune:
        for w in _product(inst):
            if inst.verify(w).ok:
                return w
        return None
    _, witness = _run(inst, count_all=False, workers=workers)
    if witness is None:
        return None
    w = Colouring(witness)
    assert inst.verify(w).ok
    return w


def count_feasible(inst: Instance, budget: int = DEFAULT_BUDGET, prune: bool = True, workers: int = 1) -> int:
    """Number of list colourings that pass the verifier."""
    _check_budget(inst, budget)
    if not prune:
        return sum(1 for w in _product(inst) if inst.verify(w).ok)
    return _run(inst, count_all=True, workers=workers)[0]


def complete_bipartite(n: int) -> Graph:
    return Graph(2 * n, [(a, n + b) for a in range(n) for b in range(n)])


def build_counterexample(n: int, r: int, beta) -> Instance:
    """K_{n,n} with lists [2r] and the two-sided tolerance table.

    Side A (vertices 0..n-1) tolerates colours 1..r at β and r+1..2r at 1-β;
    side B (n..2n-1) the other way round. Each endpoint's list sum is r, so
    the instance is (r-1)-excessive, yet no colouring exists when rβ < 1/2.
    """
    beta = as_fraction(beta)
    if n < 1 or r < 1:
        raise PreconditionError("n and r must be positive")
    if not 0 < beta < 1:
        raise PreconditionError(f"beta must lie in (0, 1), got {beta}")
    if r * beta >= Fraction(1, 2):
        raise BetaTooLarge(f"r*beta = {r * beta} must be below 1/2")
    g = complete_bipartite(n)
    palette = [as_colour(c) for c in range(1, 2 * r + 1)]
    lists = ListAssignment.uniform(g, palette)
    tau = {}
    for v in range(2 * n):
        in_a = v < n
        for i, c in enumerate(palette, start=1):
            low = i <= r
            tau[(v, c)] = beta if low == in_a else 1 - beta
    return Instance(g, lists, VertexToleranceFn(tau), eps=Fraction(r - 1))


def _validate_family(d: int, family: Sequence[Sequence], p: Sequence, alphas: Sequence):
    ell = len(alphas)
    if len(family) != d:
        raise PreconditionError(f"family has {len(family)} lists for degree {d}")
    if d > 12:
        raise PreconditionError("degree must be at most 12")
    alphas = [as_fraction(a) for a in alphas]
    p = [as_fraction(x) for x in p]
    if len(p) != ell:
        raise InvalidProbabilities("one probability per tolerance entry is required")
    if sum(p) != 1 or any(x < 0 for x in p):
        raise InvalidProbabilities("probabilities must be non-negative and sum to 1")
    for i in range(ell):
        if not p[i] < alphas[i]:
            raise InvalidProbabilities(f"p[{i}] = {p[i]} is not below alpha[{i}] = {alphas[i]}")
        for j in range(ell):
            if alphas[i] == alphas[j] and p[i] != p[j]:
                raise InvalidProbabilities("equal tolerances need equal probabilities")
    tol: dict[Color, Fraction] = {}
    lists = []
    for lst in family:
        lst = [as_colour(c) for c in lst]
        if len(lst) != ell or len(set(lst)) != ell:
            raise PreconditionError("each list needs one distinct colour per tolerance entry")
        for c, a in zip(lst, alphas):
            if tol.setdefault(c, a) != a:
                raise PreconditionError(f"colour {c!r} appears with two tolerances")
        lists.append(lst)
    return lists, p, tol


def failure_probability_exact(
    d: int, family: Sequence[Sequence], p: Sequence, alphas: Sequence, method: str = "dp"
) -> Fraction:
    """Probability that some colour exceeds ``alpha(c)*d`` at a degree-d star.

    Edge j draws ``family[j][i]`` with probability ``p[i]``; position i of
    every list carries tolerance ``alphas[i]``. ``method="enumerate"`` sums
    over all ℓ^d outcomes; ``"dp"`` folds edges one at a time, merging equal
    count vectors and absorbing overloaded states. Both are exact.
    """
    lists, p, tol = _validate_family(d, family, p, alphas)
    caps = {c: (a.numerator * d) // a.denominator for c, a in tol.items()}
    ell = len(p)
    denom = math.lcm(*(x.denominator for x in p))
    weight = [x.numerator * (denom // x.denominator) for x in p]
    total = denom**d
    if method == "enumerate":
        bad = 0
        for pick in itertools.product(range(ell), repeat=d):
            cnt: dict[Color, int] = {}
            wgt = 1
            for j, i in enumerate(pick):
                wgt *= weight[i]
                c = lists[j][i]
                cnt[c] = cnt.get(c, 0) + 1
            if wgt and any(x > caps[c] for c, x in cnt.items()):
                bad += wgt
        return Fraction(bad, total)
    if method != "dp":
        raise ValueError(f"unknown method {method!r}")
    colours = sorted(tol)
    index = {c: i for i, c in enumerate(colours)}
    cap_vec = [caps[c] for c in colours]
    states: dict[tuple[int, ...], int] = {(0,) * len(colours): 1}
    bad = 0
    for j in range(d):
        nxt: dict[tuple[int, ...], int] = {}
        for state, wgt in states.items():
            for i in range(ell):
                if not weight[i]:
                    continue
                k = index[lists[j][i]]
                x = state[k] + 1
                w2 = wgt * weight[i]
                # the remaining edges multiply by denom each
                if x > cap_vec[k]:
                    bad += w2 * denom ** (d - j - 1)
                    continue
                s2 = state[:k] + (x,) + state[k + 1:]
                nxt[s2] = nxt.get(s2, 0) + w2
        states = nxt
    return Fraction(bad, total)


def binomial_window_sum(z: int, a: int, b: int) -> int:
    """Sum of C(z, i) for a <= i <= b, with C(z, i) = 0 outside 0..z."""
    lo, hi = max(a, 0), min(b, z)
    return sum(math.comb(z, i) for i in range(lo, hi + 1))
