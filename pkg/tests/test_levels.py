import random
from fractions import Fraction

import pytest

from recolor.errors import InstanceError
from recolor.levels import LeveledRecoloring, level_cap, level_parameters, max_level_bound
from recolor.runner import RunParams, run

from conftest import heavy_halves, make_instance, random_bipartite


def test_parameters():
    assert level_parameters(Fraction(1, 4), Fraction(1, 2), 1) == (16, Fraction(1, 4))
    tau, gamma = level_parameters(Fraction(1, 2), Fraction(1, 2), 2)
    assert tau == 32 and gamma == Fraction(1, 2)
    tau, _ = level_parameters(Fraction(2, 5), Fraction(1, 2), 1)   # 2^2.5 = 5.65...
    assert tau == 8
    tau, _ = level_parameters(Fraction(2, 11), Fraction(1, 2), 1)  # 2^5.5 = 45.25...
    assert tau == 45


def test_level_bounds():
    assert max_level_bound(1024, Fraction(1, 4)) == 7
    assert max_level_bound(1023, Fraction(1, 4)) == 6
    assert max_level_bound(8, Fraction(1)) is None
    assert level_cap(1024) == 12 and level_cap(1) == 2


def test_epsilon_and_beta_checked():
    inst = make_instance([1, 2], [])
    with pytest.raises(InstanceError):
        LeveledRecoloring(inst, Fraction(0))
    with pytest.raises(InstanceError):
        LeveledRecoloring(inst, beta=0)


def test_different_levels_skip():
    algo = LeveledRecoloring(make_instance([1, 1, 1], []))
    algo.promote(2, 2)
    assert algo.level[2] == 2 and algo.state.actual[2] == 4
    rec = algo.process(0, 2)
    assert rec.route == "skip" and rec.cost == 0


def test_promote_to_empty_level():
    algo = LeveledRecoloring(make_instance([1, 2], []))
    before = algo.state.cumulative_cost
    algo.promote(0, 2)
    assert algo.level[0] == 2 and algo.state.actual[0] == 4
    assert algo.state.cumulative_cost - before <= 1


def test_promote_replays_edges_to_new_level():
    algo = LeveledRecoloring(make_instance([1, 2], []))
    algo.promote(1, 2)
    algo.graph.add(0, 1)
    algo.promote(0, 2)
    lvl = algo.levels[1]
    assert (0, 1) in lvl.sim.edges
    assert lvl.sim.r_size == 1
    assert algo.state.actual[0] != algo.state.actual[1]
    assert {algo.state.actual[0], algo.state.actual[1]} == {3, 4}


def test_same_level_moderate_edge_mirrors():
    algo = LeveledRecoloring(make_instance([1, 1], []))
    rec = algo.process(0, 1)
    assert rec.route == "sim" and rec.cost == 1


def test_immoderate_edge_promotes():
    colors, edges = heavy_halves(64)
    edges.append((0, 32))
    inst = make_instance(colors, edges)
    algo = LeveledRecoloring(inst)
    for e in edges:
        algo.process(*e)
    assert algo.records[-1].route == "exc"
    assert algo.level[0] == 2
    assert algo.levels[0].excess == [(0, 32)]
    assert not algo.violations
    s = algo.summary()
    assert s["cost_bound_ok"] and s["promotions"] == 1


@pytest.mark.parametrize("seed", range(20))
def test_random_runs_keep_claim_and_validity(seed):
    rng = random.Random(seed)
    n = rng.randint(4, 24)
    edges = random_bipartite(rng, n, 0.35)
    inst = make_instance([rng.choice((1, 2)) for _ in range(n)], edges)
    res = run(inst, RunParams("C", epsilon=Fraction(1, 2)), keep_engine=True)
    assert res.violations == 0, res.violation_messages
    assert res.details["cost_bound_ok"]
    algo = res.engine
    assert res.colors_used == 2 * algo.max_level
    for u, v in edges:
        if algo.level[u] == algo.level[v]:
            assert (min(u, v), max(u, v), algo.level[u]) in algo.fed_pairs
