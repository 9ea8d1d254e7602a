"""Finite simple undirected graphs with dense vertex and edge ids."""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Sequence

from .errors import EmptyInput, ParallelEdge, PreconditionError, SelfLoop

Edge = tuple[int, int]


class Graph:
    """Simple graph on vertices ``0..n-1``.

    Edge ``i`` is ``edges[i]``, stored as ``(min, max)``. ``adjacency[v]``
    lists ``(neighbour, edge id)`` pairs in edge-id order. Instances are
    treated as immutable.
    """

    def __init__(self, n: int, edges: Iterable[Sequence[int]]):
        if n < 0:
            raise PreconditionError("vertex count must be non-negative")
        norm: list[Edge] = []
        seen: set[Edge] = set()
        adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for eid, (u, v) in enumerate(edges):
            u, v = int(u), int(v)
            if u == v:
                raise SelfLoop(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise PreconditionError(f"edge ({u}, {v}) references a vertex outside 0..{n - 1}")
            e = (u, v) if u < v else (v, u)
            if e in seen:
                raise ParallelEdge(f"parallel edge {e}")
            seen.add(e)
            norm.append(e)
            adj[u].append((v, eid))
            adj[v].append((u, eid))
        self.n = n
        self.edges: tuple[Edge, ...] = tuple(norm)
        self.adjacency: tuple[tuple[tuple[int, int], ...], ...] = tuple(tuple(a) for a in adj)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.adjacency)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @property
    def min_degree(self) -> int:
        return min(self.degrees, default=0)

    @property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    def is_regular(self) -> bool:
        return len(set(self.degrees)) <= 1

    @cached_property
    def _edge_index(self) -> dict[Edge, int]:
        return {e: i for i, e in enumerate(self.edges)}

    def edge_id(self, u: int, v: int) -> int:
        """Id of the edge joining ``u`` and ``v``; ``KeyError`` if absent."""
        return self._edge_index[(u, v) if u < v else (v, u)]

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._edge_index

    def neighbours(self, v: int) -> list[int]:
        return [w for w, _ in self.adjacency[v]]

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def build_graph(edge_pairs: Iterable[Sequence[int]], n: int | None = None) -> Graph:
    """Build a graph from vertex pairs.

    The vertex count defaults to one more than the largest id mentioned;
    pass ``n`` to add trailing isolated vertices.
    """
    pairs = [tuple(p) for p in edge_pairs]
    if not pairs:
        raise EmptyInput("no edges given")
    for p in pairs:
        if len(p) != 2:
            raise PreconditionError(f"edge {p!r} is not a pair")
        if min(p) < 0:
            raise PreconditionError(f"negative vertex id in {p!r}")
    top = max(max(p) for p in pairs) + 1
    return Graph(top if n is None else n, pairs)
