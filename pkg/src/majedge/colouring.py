"""Colours, lists, tolerances, colourings and the exact verifiers.

Tolerances are ``fractions.Fraction`` values. Every feasibility check
compares an integer count against a rational bound by cross-multiplication,
so no verifier touches floating point.
"""

from __future__ import annotations

import functools
import sys
from collections import Counter
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import (
    InvalidList,
    MissingTolerance,
    PaletteMismatch,
    PartialColouring,
    PreconditionError,
)
from .graph import Graph

Color = str


def as_colour(token) -> Color:
    """Intern a colour token. Integers and strings with the same text are equal."""
    return sys.intern(str(token))


@functools.lru_cache(maxsize=4096)
def colour_key(c: Color):
    """Total order on colour tokens: integers numerically, then other strings."""
    s = str(c)
    if s.lstrip("-").isdigit():
        return (0, int(s), s)
    return (1, 0, s)


def sorted_colours(colours: Iterable[Color]) -> list[Color]:
    return sorted(colours, key=colour_key)


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("tolerances must be exact; pass a Fraction, int or 'p/q' string")
    return Fraction(x)


class ListAssignment(Mapping):
    """Edge id -> ordered tuple of distinct colours."""

    def __init__(self, lists: Mapping[int, Iterable] | Iterable[Iterable]):
        items = lists.items() if isinstance(lists, Mapping) else enumerate(lists)
        data: dict[int, tuple[Color, ...]] = {}
        for e, lst in items:
            t = tuple(as_colour(c) for c in lst)
            if not t:
                raise InvalidList(f"empty list on edge {e}")
            if len(set(t)) != len(t):
                raise InvalidList(f"duplicate colour in list of edge {e}")
            data[int(e)] = t
        self._lists = data

    def __getitem__(self, e: int) -> tuple[Color, ...]:
        return self._lists[e]

    def __iter__(self) -> Iterator[int]:
        return iter(self._lists)

    def __len__(self) -> int:
        return len(self._lists)

    def __repr__(self) -> str:
        return f"ListAssignment({len(self)} edges)"

    def colours(self) -> set[Color]:
        return {c for lst in self._lists.values() for c in lst}

    def min_size(self) -> int:
        return min((len(v) for v in self._lists.values()), default=0)

    def max_size(self) -> int:
        return max((len(v) for v in self._lists.values()), default=0)

    def check_covers(self, g: Graph) -> None:
        """Raise unless the keys are exactly the edge ids of ``g``."""
        if set(self._lists) != set(range(g.m)):
            extra = set(self._lists) - set(range(g.m))
            if extra:
                raise InvalidList(f"lists reference unknown edge ids {sorted(extra)[:5]}")
            raise InvalidList("some edges have no list")

    @classmethod
    def uniform(cls, g: Graph, colours: Sequence) -> "ListAssignment":
        t = tuple(colours)
        return cls({e: t for e in range(g.m)})


class ToleranceFn(Mapping):
    """Colour -> tolerance in the open interval (0, 1), with an optional default."""

    def __init__(self, values: Mapping | None = None, default=None):
        data: dict[Color, Fraction] = {}
        for c, v in (values or {}).items():
            data[as_colour(c)] = _open_unit(as_fraction(v), c)
        self._values = data
        self.default = None if default is None else _open_unit(as_fraction(default), "default")
        self._caps: dict[tuple[Color, int], int] = {}

    @classmethod
    def uniform(cls, value) -> "ToleranceFn":
        return cls({}, default=value)

    def __call__(self, c: Color) -> Fraction:
        v = self._values.get(c)
        if v is not None:
            return v
        if self.default is not None:
            return self.default
        raise MissingTolerance(c)

    def __getitem__(self, c: Color) -> Fraction:
        return self._values[c]

    def cap(self, c: Color, d: int) -> int:
        """Largest count allowed at a degree-d vertex: floor(alpha(c) * d)."""
        key = (c, d)
        x = self._caps.get(key)
        if x is None:
            t = self(c)
            x = self._caps[key] = t.numerator * d // t.denominator
        return x

    def __iter__(self):
        return iter(self._values)

    def __len__(self) -> int:
        return len(self._values)

    def covers(self, colours: Iterable[Color]) -> bool:
        return self.default is not None or all(c in self._values for c in colours)

    def minimum(self, colours: Iterable[Color] | None = None) -> Fraction:
        """Minimal tolerance over ``colours`` (default: every explicit value)."""
        pool = list(self._values) if colours is None else list(colours)
        vals = [self(c) for c in pool]
        if not vals and self.default is not None:
            return self.default
        return min(vals)

    def __repr__(self) -> str:
        return f"ToleranceFn({dict(self._values)!r}, default={self.default!r})"


class VertexToleranceFn(Mapping):
    """(vertex, colour) -> tolerance in (0, 1)."""

    def __init__(self, values: Mapping[tuple[int, Color], object]):
        self._values = {
            (int(v), as_colour(c)): _open_unit(as_fraction(x), (v, c)) for (v, c), x in values.items()
        }
        self._caps: dict[tuple[int, Color, int], int] = {}

    def __call__(self, v: int, c: Color) -> Fraction:
        try:
            return self._values[(v, c)]
        except KeyError:
            raise MissingTolerance((v, c)) from None

    def __getitem__(self, key):
        return self._values[key]

    def cap(self, v: int, c: Color, d: int) -> int:
        """Largest count allowed at v when its degree is d: floor(tau(v, c) * d)."""
        key = (v, c, d)
        x = self._caps.get(key)
        if x is None:
            t = self(v, c)
            x = self._caps[key] = t.numerator * d // t.denominator
        return x

    def __iter__(self):
        return iter(self._values)

    def __len__(self) -> int:
        return len(self._values)


def _open_unit(x: Fraction, what) -> Fraction:
    if not 0 < x < 1:
        raise PreconditionError(f"tolerance for {what!r} must lie in (0, 1), got {x}")
    return x


class Colouring(Mapping):
    """Total map edge id -> colour."""

    def __init__(self, assignment: Mapping[int, object] | Sequence):
        items = assignment.items() if isinstance(assignment, Mapping) else enumerate(assignment)
        self._a = {int(e): as_colour(c) for e, c in items}

    @classmethod
    def from_colours(cls, colours: Sequence[Color]) -> "Colouring":
        """Edge i gets ``colours[i]``; tokens must already be interned colours."""
        w = cls.__new__(cls)
        w._a = dict(enumerate(colours))
        return w

    def __getitem__(self, e: int) -> Color:
        return self._a[e]

    def __iter__(self):
        return iter(self._a)

    def __len__(self) -> int:
        return len(self._a)

    def __eq__(self, other) -> bool:
        if isinstance(other, Colouring):
            return self._a == other._a
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self._a.items())))

    def __repr__(self) -> str:
        return f"Colouring({len(self)} edges)"

    def palette(self) -> set[Color]:
        return set(self._a.values())

    def check_total(self, g: Graph) -> None:
        if len(self._a) != g.m or any(e not in self._a for e in range(g.m)):
            raise PartialColouring(f"colouring covers {len(self._a)} ids, graph has {g.m} edges")

    def respects(self, lists: ListAssignment) -> bool:
        return all(self._a[e] in lists[e] for e in self._a)

    def relabel(self, mapping: Mapping[Color, Color]) -> "Colouring":
        return Colouring({e: mapping.get(c, c) for e, c in self._a.items()})


@dataclass(frozen=True)
class Violation:
    """Colour ``colour`` appears ``count`` times at ``vertex``, above ``bound = tolerance * degree``."""

    vertex: int
    colour: Color
    count: int
    tolerance: Fraction
    degree: int = 1

    @property
    def bound(self) -> Fraction:
        return self.tolerance * self.degree


@dataclass(frozen=True)
class VerificationReport:
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def lines(self) -> list[str]:
        out = [f"violation {x.vertex} {x.colour} {x.count} {x.bound}" for x in self.violations]
        out.append("ok" if self.ok else f"not ok ({len(self.violations)} violations)")
        return out


def colour_counts(g: Graph, w: Colouring) -> list[Counter]:
    """Per-vertex counters colour -> number of incident edges with that colour."""
    w.check_total(g)
    counts = [Counter() for _ in range(g.n)]
    for e, (u, v) in enumerate(g.edges):
        c = w[e]
        counts[u][c] += 1
        counts[v][c] += 1
    return counts


def _plain_counts(g: Graph, w: Colouring) -> list[dict[Color, int]]:
    w.check_total(g)
    counts: list[dict[Color, int]] = [{} for _ in range(g.n)]
    a = w._a
    for e, (u, v) in enumerate(g.edges):
        c = a[e]
        cu, cv = counts[u], counts[v]
        cu[c] = cu.get(c, 0) + 1
        cv[c] = cv.get(c, 0) + 1
    return counts


def _report(g: Graph, counts: list[dict[Color, int]], cap_of, tolerance_of) -> VerificationReport:
    # x <= t*d  <=>  x <= floor(t*d) for integer x
    bad = []
    for v, cnt in enumerate(counts):
        d = len(g.adjacency[v])
        for c, x in cnt.items():
            if x > cap_of(v, c, d):
                bad.append(Violation(v, c, x, tolerance_of(v, c), d))
    if len(bad) > 1:
        bad.sort(key=lambda x: (x.vertex, colour_key(x.colour)))
    return VerificationReport(tuple(bad))


def verify_majority(g: Graph, w: Colouring, alpha: ToleranceFn) -> VerificationReport:
    """Check ``d_{E_c}(v) <= alpha(c) * d(v)`` for every vertex and colour."""
    return _report(g, _plain_counts(g, w), lambda v, c, d: alpha.cap(c, d), lambda v, c: alpha(c))


def verify_vertex_tolerance(g: Graph, w: Colouring, tau: VertexToleranceFn) -> VerificationReport:
    """Check ``d_{E_c}(v) <= tau(v, c) * d(v)`` for every vertex and colour."""
    return _report(g, _plain_counts(g, w), tau.cap, tau)


def check_excessive(lists: ListAssignment, alpha: ToleranceFn, eps) -> bool:
    """True iff every list's tolerance sum is at least ``1 + eps``."""
    target = 1 + as_fraction(eps)
    return all(sum(alpha(c) for c in lst) >= target for lst in lists.values())


def verify_proper(g: Graph, w: Colouring) -> bool:
    """True iff no two edges sharing an endpoint have the same colour."""
    w.check_total(g)
    for v in range(g.n):
        seen = set()
        for _, e in g.adjacency[v]:
            c = w[e]
            if c in seen:
                return False
            seen.add(c)
    return True


def discrepancy_of(g: Graph, w: Colouring, k: int, palette: Iterable[Color] | None = None) -> int:
    """Largest per-vertex gap between two colour counts, absent colours counting 0.

    ``palette`` fixes the ``k`` colours; without it the colours used by ``w``
    are taken, and there may be at most ``k`` of them.
    """
    if palette is None:
        pal = w.palette()
        if len(pal) > k:
            raise PaletteMismatch(f"colouring uses {len(pal)} colours, palette size is {k}")
    else:
        pal = {as_colour(c) for c in palette}
        if len(pal) != k:
            raise PaletteMismatch(f"palette has {len(pal)} colours, expected {k}")
        stray = w.palette() - pal
        if stray:
            raise PaletteMismatch(f"colours {sorted_colours(stray)[:5]} are outside the palette")
    worst = 0
    for cnt in colour_counts(g, w):
        if not cnt:
            continue
        hi = max(cnt.values())
        lo = min(cnt.values()) if len(cnt) == k else 0
        worst = max(worst, hi - lo)
    return worst
