"""Line-based text formats.

::

    graph <n> <m>          then m lines   e <u> <v>
    l <u> <v> <c1> <c2> ...                list of edge uv
    t <c> <p>/<q>                          tolerance of colour c
    tv <v> <c> <p>/<q>                     tolerance of colour c at vertex v
    c <u> <v> <colour>                     colour of edge uv

Tokens are whitespace separated; ``#`` starts a comment. Edges in list and
colouring files are named by their endpoints in either order.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Iterator

from .colouring import (
    Colouring,
    ListAssignment,
    ToleranceFn,
    VertexToleranceFn,
    as_colour,
    colour_key,
    sorted_colours,
)
from .errors import FormatError, MajorityError
from .graph import Graph


def _lines(text: str) -> Iterator[tuple[int, list[str]]]:
    for no, raw in enumerate(text.splitlines(), start=1):
        toks = raw.split("#", 1)[0].split()
        if toks:
            yield no, toks


def _int(tok: str, no: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"expected an integer, got {tok!r}", no) from None


def parse_rational(tok: str, no: int | None = None) -> Fraction:
    """``p/q`` or an integer; decimals are rejected to keep input exact."""
    try:
        if "." in tok or "e" in tok.lower():
            raise ValueError
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"expected a rational p/q, got {tok!r}", no) from None


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_graph(text: str) -> Graph:
    header = None
    edges = []
    for no, toks in _lines(text):
        if header is None:
            if toks[0] != "graph" or len(toks) != 3:
                raise FormatError("expected header 'graph <n> <m>'", no)
            header = (_int(toks[1], no), _int(toks[2], no))
            continue
        if toks[0] != "e" or len(toks) != 3:
            raise FormatError(f"expected 'e <u> <v>', got {' '.join(toks)!r}", no)
        edges.append((_int(toks[1], no), _int(toks[2], no)))
    if header is None:
        raise FormatError("missing 'graph' header")
    n, m = header
    if len(edges) != m:
        raise FormatError(f"header declares {m} edges, file has {len(edges)}")
    try:
        return Graph(n, edges)
    except MajorityError as exc:
        raise FormatError(str(exc)) from exc


def format_graph(g: Graph) -> str:
    return "".join([f"graph {g.n} {g.m}\n"] + [f"e {u} {v}\n" for u, v in g.edges])


def _edge(g: Graph, u: str, v: str, no: int) -> int:
    a, b = _int(u, no), _int(v, no)
    if not (0 <= a < g.n and 0 <= b < g.n) or not g.has_edge(a, b):
        raise FormatError(f"{a} {b} is not an edge of the graph", no)
    return g.edge_id(a, b)


def parse_lists(text: str, g: Graph) -> ListAssignment:
    out = {}
    for no, toks in _lines(text):
        if toks[0] != "l" or len(toks) < 4:
            raise FormatError("expected 'l <u> <v> <c1> ...'", no)
        e = _edge(g, toks[1], toks[2], no)
        if e in out:
            raise FormatError(f"second list for edge {toks[1]} {toks[2]}", no)
        out[e] = toks[3:]
    try:
        lists = ListAssignment(out)
        lists.check_covers(g)
    except MajorityError as exc:
        raise FormatError(str(exc)) from exc
    return lists


def format_lists(lists: ListAssignment, g: Graph) -> str:
    return "".join(f"l {u} {v} {' '.join(lists[e])}\n" for e, (u, v) in enumerate(g.edges))


def parse_tolerance(text: str) -> ToleranceFn:
    vals = {}
    for no, toks in _lines(text):
        if toks[0] != "t" or len(toks) != 3:
            raise FormatError("expected 't <c> <p>/<q>'", no)
        c = as_colour(toks[1])
        if c in vals:
            raise FormatError(f"second tolerance for colour {c}", no)
        vals[c] = parse_rational(toks[2], no)
    try:
        return ToleranceFn(vals)
    except MajorityError as exc:
        raise FormatError(str(exc)) from exc


def format_tolerance(alpha: ToleranceFn) -> str:
    return "".join(f"t {c} {format_rational(alpha(c))}\n" for c in sorted_colours(alpha))


def parse_vertex_tolerance(text: str) -> VertexToleranceFn:
    vals = {}
    for no, toks in _lines(text):
        if toks[0] != "tv" or len(toks) != 4:
            raise FormatError("expected 'tv <v> <c> <p>/<q>'", no)
        key = (_int(toks[1], no), as_colour(toks[2]))
        if key in vals:
            raise FormatError(f"second tolerance for {key}", no)
        vals[key] = parse_rational(toks[3], no)
    try:
        return VertexToleranceFn(vals)
    except MajorityError as exc:
        raise FormatError(str(exc)) from exc


def format_vertex_tolerance(tau: VertexToleranceFn) -> str:
    keys = sorted(tau, key=lambda k: (k[0], colour_key(k[1])))
    return "".join(f"tv {v} {c} {format_rational(tau[(v, c)])}\n" for v, c in keys)


def parse_colouring(text: str, g: Graph) -> Colouring:
    out = {}
    for no, toks in _lines(text):
        if toks[0] != "c" or len(toks) != 4:
            raise FormatError("expected 'c <u> <v> <colour>'", no)
        e = _edge(g, toks[1], toks[2], no)
        if e in out:
            raise FormatError(f"second colour for edge {toks[1]} {toks[2]}", no)
        out[e] = toks[3]
    w = Colouring(out)
    try:
        w.check_total(g)
    except MajorityError as exc:
        raise FormatError(str(exc)) from exc
    return w


def format_colouring(w: Colouring, g: Graph) -> str:
    return "".join(f"c {u} {v} {w[e]}\n" for e, (u, v) in enumerate(g.edges))


def read_text(path: str | Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc


def write_text(path: str | Path, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot write {path}: {exc}") from exc
