"""Vertex splitting, evenization, Euler orientation and the bipartite incidence graph.

Each operation returns the new graph together with a ``TransformTrace`` that
records where every new edge and vertex came from. Traces compose with
``then`` and let a colouring of the last graph be pulled back to the first.

Edge roles in a trace step:

* live: the unique image of an old edge; its colour is what the old edge gets
  on pull-back.
* twin: a copy of an old edge made by evenization. It inherits the old edge's
  list but its colour is discarded.
* ghost: an edge with no preimage at all (the odd-vertex joins). It gets a
  sentinel list and its colour is discarded.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .colouring import Color, Colouring
from .errors import DegreeTooSmall, OddDegree, PreconditionError, TraceMismatch
from .graph import Graph


@dataclass(frozen=True)
class TraceStep:
    name: str
    source_edges: int
    source_vertices: int
    edge_map: tuple[int | None, ...]  # new edge -> old edge, None for ghosts
    vertex_map: tuple[int, ...]  # new vertex -> old vertex
    twins: frozenset[int] = frozenset()


@dataclass(frozen=True)
class TransformTrace:
    steps: tuple[TraceStep, ...]

    @classmethod
    def identity(cls, g: Graph) -> "TransformTrace":
        return cls((TraceStep("identity", g.m, g.n, tuple(range(g.m)), tuple(range(g.n))),))

    def then(self, other: "TransformTrace") -> "TransformTrace":
        """Trace of applying ``self`` and then ``other``."""
        last, first = self.steps[-1], other.steps[0]
        if len(last.edge_map) != first.source_edges or len(last.vertex_map) != first.source_vertices:
            raise TraceMismatch(f"cannot chain step {first.name!r} after {last.name!r}")
        return TransformTrace(self.steps + other.steps)

    @property
    def original_edges(self) -> int:
        return self.steps[0].source_edges

    @property
    def final_edges(self) -> int:
        return len(self.steps[-1].edge_map)

    @cached_property
    def _resolved(self) -> tuple[tuple[int | None, ...], tuple[int | None, ...]]:
        # (live origin, list source) for every final edge
        live = list(range(self.final_edges))
        src: list[int | None] = list(range(self.final_edges))
        alive = [True] * self.final_edges
        for step in reversed(self.steps):
            for i, e in enumerate(src):
                if e is None:
                    continue
                if e in step.twins:
                    alive[i] = False
                src[i] = step.edge_map[e]
        for i in range(len(live)):
            live[i] = src[i] if alive[i] else None
        return tuple(live), tuple(src)

    def origin(self, e: int) -> int | None:
        """Original edge whose live image is ``e``, else None."""
        return self._resolved[0][e]

    def source(self, e: int) -> int | None:
        """Original edge whose list ``e`` inherits (live or twin), None for ghosts."""
        return self._resolved[1][e]

    @cached_property
    def ghosts(self) -> frozenset[int]:
        return frozenset(i for i, s in enumerate(self._resolved[1]) if s is None)

    @cached_property
    def vertex_origin(self) -> tuple[int, ...]:
        vm = list(range(len(self.steps[-1].vertex_map)))
        for step in reversed(self.steps):
            vm = [step.vertex_map[v] for v in vm]
        return tuple(vm)

    def dump(self) -> str:
        """Text form: ``map <new> <old>``, ``twin <new> <old>``, ``ghost <e>``, ``vertex <new> <old>``."""
        live, src = self._resolved
        out = []
        for e in range(self.final_edges):
            if live[e] is not None:
                out.append(f"map {e} {live[e]}")
            elif src[e] is not None:
                out.append(f"twin {e} {src[e]}")
            else:
                out.append(f"ghost {e}")
        out.extend(f"vertex {v} {o}" for v, o in enumerate(self.vertex_origin))
        return "\n".join(out) + "\n"


@dataclass(frozen=True)
class Orientation:
    base: Graph
    direction: tuple[tuple[int, int], ...]  # edge id -> (tail, head)

    def __post_init__(self):
        if len(self.direction) != self.base.m:
            raise PreconditionError("orientation must direct every edge")
        for e, (t, h) in enumerate(self.direction):
            if tuple(sorted((t, h))) != self.base.edges[e]:
                raise PreconditionError(f"arc {(t, h)} does not match edge {self.base.edges[e]}")

    def outdegrees(self) -> list[int]:
        out = [0] * self.base.n
        for t, _ in self.direction:
            out[t] += 1
        return out

    def indegrees(self) -> list[int]:
        inn = [0] * self.base.n
        for _, h in self.direction:
            inn[h] += 1
        return inn


@dataclass(frozen=True)
class BipartitionLabels:
    side: tuple[str, ...]  # vertex -> "X" or "Y"

    def check(self, h: Graph) -> bool:
        return len(self.side) == h.n and all(self.side[u] != self.side[v] for u, v in h.edges)


def _split_by_blocks(g: Graph, blocks_of, name: str) -> tuple[Graph, TransformTrace]:
    new_vertex_of: dict[tuple[int, int], int] = {}  # (v, neighbour) -> copy id
    vertex_map: list[int] = []
    for v in range(g.n):
        nbrs = sorted(g.neighbours(v))
        sizes = blocks_of(len(nbrs)) or [0]
        pos = 0
        for size in sizes:
            copy = len(vertex_map)
            vertex_map.append(v)
            for w in nbrs[pos:pos + size]:
                new_vertex_of[(v, w)] = copy
            pos += size
    edges = [(new_vertex_of[(u, v)], new_vertex_of[(v, u)]) for u, v in g.edges]
    h = Graph(len(vertex_map), edges)
    step = TraceStep(name, g.m, g.n, tuple(range(g.m)), tuple(vertex_map))
    return h, TransformTrace((step,))


def band_block_sizes(d: int, band: int) -> list[int]:
    """Copy degrees for a vertex of degree ``d``: remainder first, then full bands."""
    if d == 0:
        return []
    s = -(-d // band)
    return [d - band * (s - 1)] + [band] * (s - 1)


def split_vertices(g: Graph, band: int) -> tuple[Graph, TransformTrace]:
    """Split each vertex into ``ceil(d/band)`` copies of degree at most ``band``.

    The first copy takes the ``d - band*(s-1)`` smallest neighbour ids, each
    further copy the next ``band``. Isolated vertices keep a single copy.
    """
    if band < 1:
        raise PreconditionError("band must be at least 1")
    return _split_by_blocks(g, lambda d: band_block_sizes(d, band), f"split{band}")


def interval_block_sizes(d: int, lo: int) -> list[int]:
    q, r = divmod(d, lo)
    return [lo] * (q - 1) + [lo + r]


def split_vertices_interval(g: Graph, lo: int) -> tuple[Graph, TransformTrace]:
    """Split every vertex into copies whose degrees lie in ``[lo, 2*lo - 1]``."""
    if lo < 1:
        raise PreconditionError("lower degree bound must be at least 1")
    if g.min_degree < lo:
        raise DegreeTooSmall(f"minimum degree {g.min_degree} is below {lo}")
    return _split_by_blocks(g, lambda d: interval_block_sizes(d, lo), f"split[{lo},{2 * lo - 1}]")


def evenize(g: Graph) -> tuple[Graph, TransformTrace]:
    """Make all degrees even by doubling ``g`` and joining each odd vertex to its twin.

    Vertices ``n..2n-1`` and edges ``m..2m-1`` form the copy; the joins follow
    as ghost edges in ascending vertex order. An even graph is returned as is.
    """
    odd = [v for v in range(g.n) if g.degree(v) % 2]
    if not odd:
        return g, TransformTrace.identity(g)
    n, m = g.n, g.m
    edges = list(g.edges) + [(u + n, v + n) for u, v in g.edges] + [(v, v + n) for v in odd]
    h = Graph(2 * n, edges)
    edge_map = tuple(range(m)) + tuple(range(m)) + (None,) * len(odd)
    step = TraceStep(
        "evenize", m, n, edge_map, tuple(range(n)) * 2, twins=frozenset(range(m, 2 * m))
    )
    return h, TransformTrace((step,))


def euler_orient(g: Graph) -> Orientation:
    """Orient every edge along an Euler tour of its component.

    Tours start at the lowest-id vertex with untraversed edges and always
    leave through the smallest unused edge id, so the result is deterministic
    and every vertex ends with indegree = outdegree.
    """
    for v in range(g.n):
        if g.degree(v) % 2:
            raise OddDegree(f"vertex {v} has odd degree {g.degree(v)}")
    inc = [sorted(g.adjacency[v], key=lambda p: p[1]) for v in range(g.n)]
    ptr = [0] * g.n
    used = [False] * g.m
    direction: list[tuple[int, int] | None] = [None] * g.m
    for start in range(g.n):
        if ptr[start] == len(inc[start]):
            continue
        stack = [start]
        while stack:
            v = stack[-1]
            lst, i = inc[v], ptr[v]
            while i < len(lst) and used[lst[i][1]]:
                i += 1
            ptr[v] = i
            if i == len(lst):
                stack.pop()
                continue
            w, e = lst[i]
            used[e] = True
            direction[e] = (v, w)
            stack.append(w)
    return Orientation(g, tuple(direction))  # type: ignore[arg-type]


def to_bipartite_incidence(o: Orientation) -> tuple[Graph, TransformTrace, BipartitionLabels]:
    """Bipartite graph with an edge ``v' w''`` for every arc ``(v, w)``.

    ``v'`` is vertex ``v`` and ``w''`` is vertex ``n + w``; edge ids are kept.
    """
    n = o.base.n
    h = Graph(2 * n, [(t, n + hd) for t, hd in o.direction])
    step = TraceStep("incidence", o.base.m, n, tuple(range(o.base.m)), tuple(range(n)) * 2)
    labels = BipartitionLabels(("X",) * n + ("Y",) * n)
    return h, TransformTrace((step,)), labels


def pull_back(w: Colouring, trace: TransformTrace) -> Colouring:
    """Colour each original edge with the colour of its live image."""
    if set(w) != set(range(trace.final_edges)):
        raise TraceMismatch("colouring does not cover the transformed graph")
    out: dict[int, Color] = {}
    for e in range(trace.final_edges):
        o = trace.origin(e)
        if o is None:
            continue
        if o in out:
            raise TraceMismatch(f"original edge {o} has two live images")
        out[o] = w[e]
    if len(out) != trace.original_edges:
        raise TraceMismatch("some original edges have no live image")
    return Colouring(out)


def push_forward(w: Colouring, trace: TransformTrace, ghost_colour: Color) -> Colouring:
    """Copy an original colouring onto the transformed graph (twins included)."""
    return Colouring(
        {
            e: (ghost_colour if trace.source(e) is None else w[trace.source(e)])
            for e in range(trace.final_edges)
        }
    )


def galvin_route(g: Graph, band: int) -> tuple[Graph, TransformTrace, BipartitionLabels]:
    """split(band) -> evenize -> Euler orientation -> bipartite incidence graph."""
    g1, t1 = split_vertices(g, band)
    g2, t2 = evenize(g1)
    h, t3, labels = to_bipartite_incidence(euler_orient(g2))
    return h, t1.then(t2).then(t3), labels
