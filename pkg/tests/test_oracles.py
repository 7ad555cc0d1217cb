import itertools
import random
from collections import deque

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from recolor.errors import InstanceError, NotBipartiteError
from recolor.oracles import (bond_size, is_forest, largest_bond_bruteforce, opt2_bruteforce,
                             opt2_exact, opt2_record)

from conftest import random_bipartite

STAR = ([1, 1, 1, 2], [(0, 1), (0, 2), (0, 3)])


@pytest.mark.parametrize("oracle", [opt2_exact, opt2_bruteforce])
def test_opt2_examples(oracle):
    assert oracle([1, 1], [(0, 1)]) == 1
    assert oracle([1, 2, 1, 2], [(0, 1), (1, 2), (2, 3)]) == 0
    assert oracle(*STAR) == 2
    assert oracle([1, 2, 1], []) == 0


@pytest.mark.parametrize("oracle", [opt2_exact, opt2_bruteforce])
def test_triangle_not_bipartite(oracle):
    with pytest.raises(NotBipartiteError):
        oracle([1, 2, 1], [(0, 1), (1, 2), (2, 0)])


def test_not_bipartite_names_an_edge():
    with pytest.raises(NotBipartiteError) as info:
        opt2_exact([1] * 5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
    assert info.value.edge is not None


def test_bruteforce_size_limit():
    with pytest.raises(InstanceError):
        opt2_bruteforce([1] * 13, [])


def test_record_per_prefix_and_choices():
    colors, edges = STAR
    rec = opt2_record(colors, edges, [0, 1, 2, 3])
    assert rec.values == {0: 0, 1: 1, 2: 1, 3: 2}
    assert set(rec.choices) == {0}


def test_bond_examples():
    assert largest_bond_bruteforce(5, [(0, 1), (1, 2), (1, 3), (3, 4)]).beta == 1
    assert largest_bond_bruteforce(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).beta == 2
    assert largest_bond_bruteforce(4, []).beta == 0
    ladder = [(0, 1), (1, 2), (2, 3), (4, 5), (5, 6), (6, 7), (0, 4), (1, 5), (2, 6), (3, 7)]
    assert largest_bond_bruteforce(8, ladder).beta == 4


def test_bond_witness_splits_one_component():
    c6 = [(i, (i + 1) % 6) for i in range(6)]
    rep = largest_bond_bruteforce(6, c6)
    assert rep.beta == 2
    a, b = rep.witness
    assert a and b and not (a & b)
    assert sum(1 for u, v in c6 if (u in a) != (v in a)) == 2


def test_bond_cap():
    cycle = [(i, (i + 1) % 18) for i in range(18)]
    with pytest.raises(InstanceError, match="beta_hint"):
        largest_bond_bruteforce(18, cycle)
    assert bond_size(18, cycle, hint=2) == (2, "hint")
    assert bond_size(18, cycle) == (None, "unknown")
    assert bond_size(18, cycle[:-1]) == (1, "forest")


def _naive_bond(n, edges):
    """Every vertex subset, connectivity by BFS; independent of the oracle's enumeration."""
    simple = {(min(u, v), max(u, v)) for u, v in edges}
    adj = {v: set() for v in range(n)}
    for u, v in simple:
        adj[u].add(v)
        adj[v].add(u)

    def connected(vs):
        vs = set(vs)
        start = next(iter(vs))
        seen, q = {start}, deque([start])
        while q:
            x = q.popleft()
            for y in adj[x] & vs - seen:
                seen.add(y)
                q.append(y)
        return seen == vs

    comps, left = [], set(range(n))
    while left:
        s = left.pop()
        comp = {s}
        q = deque([s])
        while q:
            x = q.popleft()
            for y in adj[x] - comp:
                comp.add(y)
                q.append(y)
        left -= comp
        comps.append(sorted(comp))
    best = 0
    for comp in comps:
        for r in range(1, len(comp)):
            for s in itertools.combinations(comp, r):
                rest = set(comp) - set(s)
                if connected(s) and connected(rest):
                    best = max(best, sum(1 for u, v in simple if (u in s) != (v in s)))
    return best


graphs = st.integers(1, 8).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(
        st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] != e[1]),
        max_size=14)))


@settings(max_examples=120, deadline=None)
@given(graphs)
def test_bond_matches_naive(data):
    n, edges = data
    assert largest_bond_bruteforce(n, edges).beta == _naive_bond(n, edges)


@settings(max_examples=60, deadline=None)
@given(graphs, st.data())
def test_bond_monotone_in_edges(data, draw):
    n, edges = data
    k = draw.draw(st.integers(0, len(edges)))
    assert largest_bond_bruteforce(n, edges[:k]).beta <= largest_bond_bruteforce(n, edges).beta


def test_forest_iff_bond_one():
    rng = random.Random(7)
    for _ in range(50):
        n = rng.randint(2, 9)
        edges = [(rng.randrange(i), i) for i in range(1, n)]
        extra = rng.random() < 0.5
        if extra:
            u, v = rng.sample(range(n), 2)
            if (u, v) not in edges and (v, u) not in edges:
                edges.append((u, v))
        beta = largest_bond_bruteforce(n, edges).beta
        assert (beta == 1) == is_forest(n, edges)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**31), st.integers(1, 10))
def test_opt2_exact_equals_bruteforce_and_is_monotone(seed, n):
    rng = random.Random(seed)
    edges = random_bipartite(rng, n, 0.4)
    colors = [rng.choice((1, 2)) for _ in range(n)]
    rec = opt2_record(colors, edges, range(len(edges) + 1))
    values = [rec.values[i] for i in range(len(edges) + 1)]
    assert values == sorted(values)
    assert values[-1] == opt2_bruteforce(colors, edges)
