import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from majedge.graph import Graph


def complete(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def cycle(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def star(leaves: int) -> Graph:
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


def random_bipartite(rng: random.Random, a: int, b: int, p: float) -> Graph:
    return Graph(a + b, [(u, a + v) for u in range(a) for v in range(b) if rng.random() < p])


@st.composite
def graphs(draw, max_n: int = 9, min_edges: int = 0):
    n = draw(st.integers(2, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, min_size=min(min_edges, len(pairs))))
    return Graph(n, chosen)


fractions_01 = st.fractions(min_value=Fraction(1, 50), max_value=Fraction(49, 50), max_denominator=50)


@pytest.fixture
def rng():
    return random.Random(12345)


# criterion -> "PASS ..." / "FAIL ...", filled by the acceptance suite
ACCEPTANCE: dict[str, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE, key=lambda s: (int("".join(filter(str.isdigit, s))), s)):
        terminalreporter.write_line(f"{name}: {ACCEPTANCE[name]}")
