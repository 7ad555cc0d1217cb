from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from recolor.errors import InstanceError, UnknownColorError
from recolor.graph import (ColoringState, ComponentIndex, Graph, Palette,
                           components_from_scratch, monochromatic_near, validate_coloring)


def test_two_singletons_merge():
    idx = ComponentIndex(2)
    rep = idx.apply_edge(0, 1)
    assert rep.merged and rep.size == 2
    assert sorted(idx.members(1)) == [0, 1]


def test_merge_sizes_and_r_counts_add():
    idx = ComponentIndex(8)
    for u, v in [(0, 1), (1, 2), (3, 4), (4, 5), (5, 6), (6, 7)]:
        idx.apply_edge(u, v)
    idx.mark(0)
    idx.mark(4)
    idx.mark(5)
    rep = idx.apply_edge(2, 3)
    assert (rep.size_u, rep.size_v) == (3, 5)
    assert rep.size == 8
    assert idx.rcount[rep.root] == rep.r_u + rep.r_v == 3


def test_self_edge_rejected():
    g = Graph(3)
    with pytest.raises(InstanceError):
        g.add(1, 1)
    with pytest.raises(InstanceError):
        g.add(0, 3)


def test_duplicate_edge_does_not_merge_again():
    idx = ComponentIndex(3)
    idx.apply_edge(0, 1)
    rep = idx.apply_edge(1, 0)
    assert not rep.merged
    assert rep.size == 2


def test_validate_coloring_examples():
    assert validate_coloring([1, 2], [(0, 1)]) == []
    assert validate_coloring([1, 1], [(0, 1)]) == [(0, 1)]
    cycle = [(0, 1), (1, 2), (2, 3), (3, 0)]
    assert validate_coloring([1, 2, 1, 2], cycle) == []


def test_recolor_costs():
    state = ColoringState([1, 1], Palette([8, 8]))
    assert state.recolor(0, 2) == 1
    assert state.recolor(1, 3) == 8
    assert state.recolor(1, 3) == 0
    assert state.cumulative_cost == 9
    assert state.basic_cost == 1 and state.special_cost == 8
    assert state.ever_special[1] and not state.ever_special[0]


def test_recolor_unknown_color():
    state = ColoringState([1], Palette([4]))
    with pytest.raises(UnknownColorError):
        state.recolor(0, 5)
    with pytest.raises(UnknownColorError):
        state.recolor(0, 0)


def test_palette_costs():
    p = Palette.uniform(3, Fraction(5, 2))
    assert list(p.specials) == [3, 4, 5]
    assert p.cost(1) == p.cost(2) == 1
    assert p.cost(4) == Fraction(5, 2)


def test_monochromatic_near_only_reports_touched():
    g = Graph(4)
    for u, v in [(0, 1), (2, 3)]:
        g.add(u, v)
    colors = [1, 1, 2, 2]
    assert monochromatic_near(colors, g, [0]) == [(0, 1)]
    assert monochromatic_near(colors, g, [0, 3]) == [(0, 1), (2, 3)]


edge_lists = st.integers(2, 12).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
                 .filter(lambda e: e[0] != e[1]), max_size=20),
        st.sets(st.integers(0, n - 1)),
    )
)


@settings(max_examples=150, deadline=None)
@given(edge_lists)
def test_index_matches_recomputation(data):
    n, edges, marks = data
    idx = ComponentIndex(n)
    for w in marks:
        idx.mark(w)
    for u, v in edges:
        idx.apply_edge(u, v)
    got = {frozenset(idx.members(r)): idx.rcount[r] for r in idx.roots()}
    assert got == components_from_scratch(n, edges, marks)
    assert sum(idx.size[r] for r in idx.roots()) == n
    for r in idx.roots():
        assert 1 <= idx.size[r] and 0 <= idx.rcount[r] <= idx.size[r]
        assert idx.min_vertex[r] == min(idx.members(r))
