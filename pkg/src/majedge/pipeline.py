"""Constructive colourers built from the split/evenize/orient/bipartite route.

Every driver re-verifies its output with the exact checker and raises
``PostVerificationFailed`` rather than return a colouring that fails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .bipartite import galvin_list_color, konig_colour_ints, sentinel_colours
from .colouring import (
    Color,
    Colouring,
    ListAssignment,
    ToleranceFn,
    VerificationReport,
    Violation,
    as_colour,
    as_fraction,
    check_excessive,
    colour_counts,
    discrepancy_of,
    verify_majority,
)
from .errors import (
    DegreeTooSmall,
    InvalidTolerance,
    ListTooLong,
    ListTooShort,
    NotExcessive,
    NotRegular,
    PostVerificationFailed,
    PreconditionDegree,
    PreconditionError,
)
from .graph import Graph
from .transform import galvin_route, pull_back
from .vizing import vizing_color


@dataclass(frozen=True)
class PipelineConfig:
    k: int | None = None
    ell: int | None = None
    alpha_value: Fraction | None = None
    enforce_preconditions: bool = True
    seed: int = 0


DEFAULT = PipelineConfig()


def threshold_1k(k: int) -> int:
    return 2 * k * k - 2 * k


def threshold_alpha(alpha_value, ell: int) -> int:
    """``ceil((2ℓ-2)/(αℓ-1))`` in exact arithmetic."""
    a = as_fraction(alpha_value)
    if a * ell <= 1:
        raise InvalidTolerance(f"alpha*ell = {a * ell} must exceed 1")
    return math.ceil(Fraction(2 * ell - 2) / (a * ell - 1))


def discretization_k(ell: int, eps) -> int:
    return math.ceil(Fraction(ell) / as_fraction(eps))


def threshold_discretization(ell: int, eps) -> int:
    k = discretization_k(ell, eps)
    return 2 * k * k - 2 * k


def _galvin_colouring(g: Graph, lists: ListAssignment, band: int) -> Colouring:
    h, trace, labels = galvin_route(g, band)
    sentinel = tuple(sentinel_colours(band // 2 if band > 1 else 1))
    h_lists = {}
    for e in range(h.m):
        src = trace.source(e)
        h_lists[e] = lists[src] if src is not None else sentinel
    w_h = galvin_list_color(h, labels, ListAssignment(h_lists))
    return pull_back(w_h, trace)


def _require_min_degree(g: Graph, need: int) -> None:
    if g.min_degree < need:
        raise PreconditionDegree(f"minimum degree {g.min_degree} is below the required {need}")


def _checked(g: Graph, w: Colouring, alpha: ToleranceFn) -> Colouring:
    report = verify_majority(g, w, alpha)
    if not report.ok:
        raise PostVerificationFailed(report)
    return w


def color_majority_1k(g: Graph, lists: ListAssignment, k: int, cfg: PipelineConfig = DEFAULT) -> Colouring:
    """1/k-majority colouring from lists of size at least k+1.

    Route: split at band 2k+2, evenize, Euler-orient, bipartite incidence
    graph (Δ ≤ k+1), Galvin, pull back. Enforced mode requires δ ≥ 2k²-2k.
    """
    if k < 2:
        raise PreconditionError("k must be at least 2")
    lists.check_covers(g)
    if lists.min_size() < k + 1 and g.m:
        raise ListTooShort(f"lists must have at least {k + 1} colours")
    if cfg.enforce_preconditions:
        _require_min_degree(g, threshold_1k(k))
    w = _galvin_colouring(g, lists, 2 * k + 2)
    return _checked(g, w, ToleranceFn.uniform(Fraction(1, k)))


def color_majority_alpha(
    g: Graph, lists: ListAssignment, alpha_value, ell: int, cfg: PipelineConfig = DEFAULT
) -> Colouring:
    """α-majority colouring from lists of size ℓ via the band-2ℓ route."""
    a = as_fraction(alpha_value)
    if not 0 < a < 1:
        raise InvalidTolerance(f"alpha must lie in (0, 1), got {a}")
    if ell < 2:
        raise PreconditionError("ell must be at least 2")
    need = threshold_alpha(a, ell)
    lists.check_covers(g)
    if lists.min_size() < ell and g.m:
        raise ListTooShort(f"lists must have at least {ell} colours")
    if cfg.enforce_preconditions:
        _require_min_degree(g, need)
    w = _galvin_colouring(g, lists, 2 * ell)
    return _checked(g, w, ToleranceFn.uniform(a))


def expand_lists(lists: ListAssignment, alpha: ToleranceFn, k: int) -> tuple[ListAssignment, dict[Color, Color]]:
    """Replace each colour c by ``floor(k*alpha(c))`` copies of tolerance 1/k.

    Returns the expanded lists and the copy -> original colour map.
    """
    taken = lists.colours()
    sep = "#"
    while any(sep in c for c in taken):
        sep += "#"
    back: dict[Color, Color] = {}
    out = {}
    for e, lst in lists.items():
        new = []
        for c in lst:
            for i in range(1, math.floor(k * alpha(c)) + 1):
                cc = as_colour(f"{c}{sep}{i}")
                back[cc] = c
                new.append(cc)
        out[e] = new
    return ListAssignment(out), back


def color_via_discretization(
    g: Graph, lists: ListAssignment, alpha: ToleranceFn, eps, ell: int, cfg: PipelineConfig = DEFAULT
) -> Colouring:
    """α-majority colouring from ε-excessive lists of size at most ℓ.

    With k = ceil(ℓ/ε) each colour becomes ``floor(k·α(c))`` copies of
    tolerance 1/k; the expanded lists have at least k+1 entries and are
    coloured by the 1/k route, then copies collapse to their colour.
    """
    eps = as_fraction(eps)
    if eps <= 0:
        raise PreconditionError("eps must be positive")
    lists.check_covers(g)
    if lists.max_size() > ell:
        raise ListTooLong(f"lists must have at most {ell} colours")
    if not check_excessive(lists, alpha, eps):
        raise NotExcessive(f"some list has tolerance sum below 1 + {eps}")
    k = discretization_k(ell, eps)
    if cfg.enforce_preconditions:
        _require_min_degree(g, threshold_discretization(ell, eps))
    expanded, back = expand_lists(lists, alpha, k)
    assert g.m == 0 or expanded.min_size() >= k + 1
    w = _galvin_colouring(g, expanded, 2 * k + 2).relabel(back)
    return _checked(g, w, alpha)


def discrepancy_palette(k: int) -> list[Color]:
    return [as_colour(i) for i in range(1, k + 1)]


def color_discrepancy(g: Graph, k: int) -> Colouring:
    """k-colouring with every vertex's colour counts within 2 of each other.

    Split at band 2k, evenize, orient, and König-colour the bipartite
    incidence graph (Δ ≤ k) with colours 1..k, preferring among the colours
    free at both ends the one least used at the original endpoints.
    """
    if k < 1:
        raise PreconditionError("k must be at least 1")
    if k == 1:
        return Colouring(["1"] * g.m)
    h, trace, labels = galvin_route(g, 2 * k)
    # any proper k-colouring of h gives the bound; balancing per original vertex is a tie-break
    w = pull_back(Colouring(konig_colour_ints(h, labels, k, trace.vertex_origin)), trace)
    gap = discrepancy_of(g, w, k, discrepancy_palette(k))
    if gap > 2:
        raise PostVerificationFailed(_discrepancy_report(g, w), f"discrepancy {gap} exceeds 2")
    return w


def _discrepancy_report(g: Graph, w: Colouring) -> VerificationReport:
    bad = []
    for v, cnt in enumerate(colour_counts(g, w)):
        if cnt and max(cnt.values()) - min(cnt.values()) > 2:
            c = max(cnt, key=cnt.get)
            bad.append(Violation(v, c, cnt[c], Fraction(min(cnt.values()) + 2)))
    return VerificationReport(tuple(bad))


def frugal_bucket_sizes(colours: int, buckets: int) -> list[int]:
    """As-equal-as-possible sizes, larger buckets first."""
    q, r = divmod(colours, buckets)
    return [q + 1] * r + [q] * (buckets - r)


def color_frugal_regular(g: Graph, k: int) -> Colouring:
    """1/k-majority colouring of an r-regular graph (r ≥ k²) with k+1 colours.

    A (r+1)-edge-colouring from ``vizing_color`` is merged into k+1 buckets of
    at most ceil((r+1)/(k+1)) ≤ floor(r/k) colour classes each.
    """
    if k < 2:
        raise PreconditionError("k must be at least 2")
    if not g.is_regular():
        raise NotRegular("graph is not regular")
    r = g.max_degree
    if r < k * k:
        raise DegreeTooSmall(f"degree {r} is below k^2 = {k * k}")
    base = vizing_color(g)
    sizes = frugal_bucket_sizes(r + 1, k + 1)
    bucket_of: dict[Color, Color] = {}
    cls = 1
    for b, size in enumerate(sizes, start=1):
        for _ in range(size):
            bucket_of[as_colour(cls)] = as_colour(b)
            cls += 1
    w = base.relabel(bucket_of)
    return _checked(g, w, ToleranceFn.uniform(Fraction(1, k)))


def structural_bound_1k(d: int, k: int) -> int:
    """Per-colour count bound at a degree-d vertex left by the band-(2k+2) route."""
    band = 2 * k + 2
    s = -(-d // band)
    return 2 * s - 1 if d % band == 1 else 2 * s
