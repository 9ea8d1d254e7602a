"""Random colourers for diversified tolerances and their degree thresholds.

The existence proofs behind these samplers use the Lovász Local Lemma with
vertex-indexed bad events ("some colour exceeds its share at v"). Here that
argument is run as Moser-Tardos resampling: draw every edge, then while some
vertex is overloaded, redraw all edges at the lowest such vertex. A returned
colouring is always re-checked exactly; the LLL constants are not relied on.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from .colouring import (
    Color,
    Colouring,
    ListAssignment,
    ToleranceFn,
    as_fraction,
    colour_key,
    verify_majority,
)
from .errors import (
    EmptyDistribution,
    EpsilonOutOfRange,
    InvalidList,
    NotExcessive,
    ParamOutOfRange,
    PostVerificationFailed,
    RoundLimitExceeded,
    VectorNotExcessive,
)
from .graph import Graph

EPS_MAX = Fraction(9, 10)


@dataclass(frozen=True)
class EdgeDistribution:
    """Per edge: ``(colour, probability)`` pairs with positive probabilities."""

    entries: dict[int, tuple[tuple[Color, float], ...]]

    def __post_init__(self):
        for e, pairs in self.entries.items():
            if not pairs:
                raise EmptyDistribution(f"edge {e} has no colour with positive probability")
            if abs(math.fsum(p for _, p in pairs) - 1.0) > 1e-12:
                raise EmptyDistribution(f"probabilities on edge {e} do not sum to 1")

    def __getitem__(self, e: int):
        return self.entries[e]


def _check_eps(eps: Fraction) -> None:
    if not 0 < eps <= EPS_MAX:
        raise EpsilonOutOfRange(f"eps must lie in (0, 0.9], got {eps}")


def prune_lists(lists: ListAssignment, alpha: ToleranceFn, eps, a) -> ListAssignment:
    """Shortest tolerance-descending prefix of each list that is still ε-excessive.

    The kept size is at most ``ceil((1+eps)/a)`` when ``min(alpha) >= a``.
    """
    eps, a = as_fraction(eps), as_fraction(a)
    target = 1 + eps
    out = {}
    for e, lst in lists.items():
        ranked = sorted(lst, key=lambda c: (-alpha(c), colour_key(c)))
        if alpha(ranked[-1]) < a:
            raise ParamOutOfRange(f"colour {ranked[-1]!r} has tolerance below a = {a}")
        total = Fraction(0)
        keep = []
        for c in ranked:
            keep.append(c)
            total += alpha(c)
            if total >= target:
                break
        if total < target:
            raise NotExcessive(f"list of edge {e} sums to {total} < {target}")
        out[e] = keep
    return ListAssignment(out)


def proportional_weights(lists: ListAssignment, alpha: ToleranceFn) -> dict[int, dict[Color, Fraction]]:
    """Exact ``p_{e,c} = alpha(c) / sum_{c' in L(e)} alpha(c')``."""
    out = {}
    for e, lst in lists.items():
        vals = {c: alpha(c) for c in lst}
        total = sum(vals.values())
        out[e] = {c: v / total for c, v in vals.items()}
    return out


def sample_probabilities_general(lists: ListAssignment, alpha: ToleranceFn) -> EdgeDistribution:
    """Pick colours with probability proportional to tolerance (double precision)."""
    exact = proportional_weights(lists, alpha)
    return EdgeDistribution({e: tuple((c, float(p)) for c, p in row.items()) for e, row in exact.items()})


def h_function(x: float) -> float:
    return (math.sqrt(1 + 8 * x) - 1) / (4 * x)


LAMBDA = h_function(0.9)


@dataclass(frozen=True)
class UniformParams:
    """Sampling parameters for a tolerance vector, entries sorted by decreasing tolerance.

    ``order[i]`` is the position in the input vector of sorted entry ``i``.
    Entries past ``ell_prime`` are never drawn (``beta`` and ``p`` are 0).
    """

    lam: float
    mu: float
    ell_prime: int
    alphas: tuple[Fraction, ...]
    order: tuple[int, ...]
    beta: tuple[float, ...]
    B: float
    p: tuple[float, ...]

    def probability_by_input_index(self) -> list[float]:
        out = [0.0] * len(self.order)
        for i, j in enumerate(self.order):
            out[j] = self.p[i]
        return out


def uniform_vector_params(vector: Sequence, eps) -> UniformParams:
    """λ, μ, ℓ', β, B and p for an ε-excessive tolerance vector.

    μ = λ²ε²/(3ℓ) with λ = h(0.9); entries below 6μ are dropped; each kept
    α solves α = β + sqrt(3μ)·sqrt(β); p = β / Σβ.
    """
    eps = as_fraction(eps)
    _check_eps(eps)
    alphas = [as_fraction(x) for x in vector]
    if len(alphas) < 1 or any(not 0 < x < 1 for x in alphas):
        raise VectorNotExcessive("entries must lie in (0, 1)")
    if sum(alphas) != 1 + eps:
        raise VectorNotExcessive(f"entries sum to {sum(alphas)}, expected {1 + eps}")
    ell = len(alphas)
    order = sorted(range(ell), key=lambda i: -alphas[i])
    ranked = [alphas[i] for i in order]
    mu = LAMBDA**2 * float(eps) ** 2 / (3 * ell)
    six_mu = 6 * mu
    ell_prime = sum(1 for x in ranked if float(x) >= six_mu)
    s = math.sqrt(3 * mu)
    beta = []
    for i, x in enumerate(ranked):
        if i < ell_prime:
            # sqrt(β) = (-s + sqrt(s² + 4α))/2, written without cancellation
            r = 2 * float(x) / (s + math.sqrt(3 * mu + 4 * float(x)))
            beta.append(r * r)
        else:
            beta.append(0.0)
    B = math.fsum(beta)
    p = [b / B for b in beta]
    params = UniformParams(LAMBDA, mu, ell_prime, tuple(ranked), tuple(order), tuple(beta), B, tuple(p))
    _check_uniform_params(params)
    return params


def _check_uniform_params(u: UniformParams) -> None:
    assert u.B >= 1, f"B = {u.B} < 1"
    assert abs(math.fsum(u.p) - 1) <= 1e-12
    for i in range(u.ell_prime):
        assert 0 < u.p[i] < float(u.alphas[i])
        assert u.beta[i] >= 3 * u.mu * (1 - 1e-12)


def sample_probabilities_uniform(lists: ListAssignment, alpha: ToleranceFn, eps) -> EdgeDistribution:
    """Distribution for a Λ-list assignment: colour c gets the p of its tolerance class."""
    lists_iter = iter(lists.values())
    first = next(lists_iter, None)
    if first is None:
        return EdgeDistribution({})
    vector = sorted((alpha(c) for c in first), reverse=True)
    for e, lst in lists.items():
        if sorted((alpha(c) for c in lst), reverse=True) != vector:
            raise InvalidList(f"list of edge {e} does not carry the tolerance vector {vector}")
    params = uniform_vector_params(vector, eps)
    p_of = {}
    for a, p in zip(params.alphas, params.p):
        p_of[a] = p  # equal tolerances share one probability
    return EdgeDistribution(
        {e: tuple((c, p_of[alpha(c)]) for c in lst if p_of[alpha(c)] > 0) for e, lst in lists.items()}
    )


# private interval context so the working precision is not shared state
_IV = type(mpmath.iv)()
_IV.prec = 128


def _exact_iv(x: Fraction):
    return _IV.mpf(x.numerator) / _IV.mpf(x.denominator)


def _threshold_interval(coef: int, size: Fraction, eps: Fraction, log_arg: Fraction) -> int:
    val = coef * _exact_iv(size) / (_exact_iv(eps) ** 2) * _IV.log(_exact_iv(log_arg))
    return int(mpmath.ceil(val.b))


def min_degree_threshold_general(a, eps) -> int:
    """``ceil(626 a^-1 ε^-2 ln(1/(aε)))``, from the upper end of a 128-bit interval."""
    a, eps = as_fraction(a), as_fraction(eps)
    if not 0 < a < 1:
        raise ParamOutOfRange(f"a must lie in (0, 1), got {a}")
    if not 0 < eps <= EPS_MAX:
        raise ParamOutOfRange(f"eps must lie in (0, 0.9], got {eps}")
    return _threshold_interval(626, 1 / a, eps, 1 / (a * eps))


def min_degree_threshold_general_float(a, eps) -> int:
    """Same threshold in plain double arithmetic (cross-check only)."""
    a, eps = float(a), float(eps)
    return math.ceil(626 / a / eps**2 * math.log(1 / (a * eps)))


def min_degree_threshold_uniform(ell: int, eps) -> int:
    """``ceil(109 ℓ ε^-2 ln(ℓ/ε))``, outward-rounded."""
    eps = as_fraction(eps)
    if ell < 2:
        raise ParamOutOfRange("ell must be at least 2")
    if not 0 < eps <= EPS_MAX:
        raise ParamOutOfRange(f"eps must lie in (0, 0.9], got {eps}")
    return _threshold_interval(109, Fraction(ell), eps, ell / eps)


def min_degree_threshold_uniform_float(ell: int, eps) -> int:
    eps = float(eps)
    return math.ceil(109 * ell / eps**2 * math.log(ell / eps))


def default_max_rounds(m: int) -> int:
    return int(64 * m * (1 + math.log2(m + 1)))


@dataclass
class ResampleLog:
    rounds: int = 0
    resampled: list[int] = field(default_factory=list)
    final_state: tuple | None = None

    def lines(self) -> list[str]:
        return [f"round {i} vertex {v}" for i, v in enumerate(self.resampled, start=1)]


def moser_tardos_color(
    g: Graph,
    lists: ListAssignment,
    dist: EdgeDistribution,
    alpha: ToleranceFn,
    max_rounds: int | None = None,
    seed: int = 0,
) -> tuple[Colouring, ResampleLog]:
    """Sample from ``dist`` and resample overloaded vertices until none remain.

    A vertex v is overloaded when some colour c appears on more than
    ``alpha(c)·d(v)`` incident edges. Each round redraws every edge at the
    lowest-id overloaded vertex. Raises ``RoundLimitExceeded`` (carrying the
    log) if ``max_rounds`` rounds do not suffice.
    """
    lists.check_covers(g)
    for e in range(g.m):
        pairs = dist.entries.get(e)
        if not pairs:
            raise EmptyDistribution(f"edge {e} has no distribution")
        stray = [c for c, _ in pairs if c not in lists[e]]
        if stray:
            raise EmptyDistribution(f"edge {e} distribution uses colours {stray} outside its list")
    if max_rounds is None:
        max_rounds = default_max_rounds(g.m)
    rng = random.Random(seed)
    colours = [[c for c, _ in dist[e]] for e in range(g.m)]
    cum = []
    for e in range(g.m):
        acc, row = 0.0, []
        for _, p in dist[e]:
            acc += p
            row.append(acc)
        cum.append(row)

    # integer caps: count <= alpha(c)*d  <=>  count <= floor(alpha(c)*d)
    cap_cache: dict[tuple[Color, int], int] = {}

    def cap(c: Color, d: int) -> int:
        key = (c, d)
        x = cap_cache.get(key)
        if x is None:
            t = alpha(c)
            x = cap_cache[key] = (t.numerator * d) // t.denominator
        return x

    colour = [None] * g.m
    counts: list[dict[Color, int]] = [dict() for _ in range(g.n)]
    over = [0] * g.n  # number of overloaded colours at v
    deg = g.degrees

    def draw(e: int) -> Color:
        return rng.choices(colours[e], cum_weights=cum[e])[0]

    def bump(v: int, c: Color, delta: int) -> None:
        cnt = counts[v]
        before = cnt.get(c, 0)
        after = before + delta
        cnt[c] = after
        limit = cap(c, deg[v])
        was, now = before > limit, after > limit
        if was != now:
            over[v] += 1 if now else -1

    for e, (u, v) in enumerate(g.edges):
        c = draw(e)
        colour[e] = c
        bump(u, c, 1)
        bump(v, c, 1)

    bad = {v for v in range(g.n) if over[v]}
    log = ResampleLog()
    while bad:
        if log.rounds >= max_rounds:
            log.final_state = rng.getstate()
            raise RoundLimitExceeded(log)
        v = min(bad)
        log.rounds += 1
        log.resampled.append(v)
        for _, e in g.adjacency[v]:
            a, b = g.edges[e]
            old = colour[e]
            c = draw(e)
            if c == old:
                continue
            colour[e] = c
            for x in (a, b):
                bump(x, old, -1)
                bump(x, c, 1)
                if over[x]:
                    bad.add(x)
                else:
                    bad.discard(x)
    log.final_state = rng.getstate()
    w = Colouring(colour)
    report = verify_majority(g, w, alpha)
    if not report.ok:
        raise PostVerificationFailed(report)
    return w, log

