import random
import sys
from fractions import Fraction

import pytest

from recolor.instance import Instance


def make_instance(colors, edges, D=4, delta=None, **kw):
    n = len(colors)
    if delta is None:
        deg = [set() for _ in range(n)]
        for u, v in edges:
            deg[u].add(v)
            deg[v].add(u)
        delta = max([len(s) for s in deg] + [1])
    return Instance(n=n, initial_colors=list(colors), D=Fraction(D), delta=delta,
                    edges=list(edges), **kw)


def random_bipartite(rng: random.Random, n: int, p: float):
    """Random graph on n vertices whose edges only join the two halves of a random split."""
    side = [rng.randrange(2) for _ in range(n)]
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)
             if side[u] != side[v] and rng.random() < p]
    rng.shuffle(edges)
    return edges


@pytest.fixture
def rng():
    return random.Random(12345)


def heavy_halves(n: int):
    """All-1 coloring and edges that build two components of n/2 vertices by
    repeated doubling, each join monochromatic, so most vertices get recolored."""
    from recolor.sim import SimA

    sim = SimA(n, initial=[1] * n)
    edges = []
    size = 1
    while size < n // 2:
        for b in range(0, n, 2 * size):
            v = next(w for w in range(b + size, b + 2 * size) if sim.color[w] == sim.color[b])
            sim.feed(b, v)
            edges.append((b, v))
        size *= 2
    return [1] * n, edges


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for num in sorted(lines):
            terminalreporter.write_line(lines[num])
