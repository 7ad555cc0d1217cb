import io
import json
from fractions import Fraction

import pytest

from recolor.adversaries import gen_path_doubling
from recolor.audit import (AuditPreconditionError, audit_bond_lemma, audit_charging,
                           audit_costs, audit_trace, charge_cap, moderate_cost_bound)
from recolor.graph import RecolorEvent
from recolor.runner import RunParams, run
from recolor.sim import SimA

from conftest import heavy_halves, make_instance

HALF = Fraction(1, 2)


def test_charge_cap():
    assert charge_cap(Fraction(16)) == 8
    assert charge_cap(Fraction(17)) == 9
    assert charge_cap(Fraction(1)) == 4
    assert charge_cap(Fraction(5, 2)) == 6


def test_small_flip_charges_whole_component():
    rep = audit_charging(2, [(0, 1, 0)], Fraction(4), HALF)
    assert rep.case_counts["small"] == 1 and rep.max_charge == 1
    assert rep.ok and rep.iplus_steps == 1 and rep.r_size == 1


def test_x_set_after_light_merge_excludes_r():
    # after the flip of {0}, X({0,1}) = {1}: ratio 1/2
    rep = audit_charging(2, [(0, 1, 0)], Fraction(4), HALF)
    assert rep.min_x_ratio == Fraction(1, 2)


def test_large_light_charges_fresh_vertices_once():
    # threshold 1: every component of size 2 is large
    feeds = [(0, 1, None), (2, 3, None), (1, 2, 0), (4, 5, None), (3, 4, 4)]
    rep = audit_charging(6, feeds, Fraction(1), HALF)
    assert rep.case_counts["large-light"] == 2
    assert rep.max_charge == 1
    assert rep.ok, rep.violations


def test_immoderate_feed_rejected():
    colors, edges = heavy_halves(8)
    sim = SimA(8, initial=colors)
    feeds = []
    for u, v in edges:
        sim.feed(u, v)
        feeds.append((u, v, sim.log[-1].flipped))
    feeds.append((0, 4, None))
    with pytest.raises(AuditPreconditionError, match="large heavy"):
        audit_charging(8, feeds, Fraction(2), HALF)


def test_enforced_flag_follows_policy():
    assert audit_charging(2, [], Fraction(4), HALF, "smaller-size").enforced
    assert not audit_charging(2, [], Fraction(4), HALF, "smaller-new").enforced


def test_moderate_cost_bound():
    assert moderate_cost_bound(280 * 8 * 3, 3, Fraction(16))
    assert not moderate_cost_bound(280 * 8 * 3 + 1, 3, Fraction(16))


def test_bond_tree_partition():
    edges = [(0, 1), (1, 2), (1, 3), (3, 4), (4, 5)]
    rep = audit_bond_lemma(6, edges, [{0, 1, 2}, {3}, {4, 5}], beta=1)
    assert rep.cross_edges == 2 and rep.bound == 2 and rep.ok


def test_bond_single_part():
    rep = audit_bond_lemma(3, [(0, 1), (1, 2)], [{0, 1, 2}], beta=1)
    assert rep.cross_edges == 0 and rep.bound == 0 and rep.ok


def test_bond_c4_halves():
    c4 = [(0, 1), (1, 2), (2, 3), (3, 0)]
    rep = audit_bond_lemma(4, c4, [{0, 1}, {2, 3}], beta=2)
    assert rep.cross_edges == 2 and rep.ok


def test_bond_preconditions():
    with pytest.raises(AuditPreconditionError, match="connected"):
        audit_bond_lemma(3, [(0, 1)], [{0, 2}, {1}], beta=1)
    with pytest.raises(AuditPreconditionError, match="cover"):
        audit_bond_lemma(3, [(0, 1)], [{0, 1}], beta=1)
    rep = audit_bond_lemma(3, [(0, 1)], [{0, 1}], beta=1, partition=False)
    assert rep.ok


def test_costs_empty():
    rep = audit_costs([], Fraction(0))
    assert rep.ok and rep.total == 0 and rep.buckets == {}


def test_costs_greedy_q_times_D():
    ev = [RecolorEvent(0, w, 1, 3 + w, Fraction(5, 2), "greedy") for w in range(4)]
    rep = audit_costs(ev, Fraction(10))
    assert rep.ok and rep.buckets == {"greedy": Fraction(10)}
    assert not audit_costs(ev, Fraction(9)).ok


def test_costs_without_excess_have_no_recx():
    inst = make_instance([1, 1, 2], [(0, 1), (1, 2)])
    res = run(inst, RunParams("B"), keep_engine=True)
    rep = audit_costs(res.engine.state.events, res.cost_total, inst.D,
                      res.details["specials_marked"], res.details["special_special_arrivals"])
    assert rep.ok and "recx" not in rep.buckets


@pytest.mark.parametrize("algo", ["A", "B", "Bhat", "C", "greedy"])
def test_trace_audit(algo):
    inst = gen_path_doubling(64, 16, 5, phases=6)
    buf = io.StringIO()
    run(inst, RunParams(algo), trace=buf)
    records = [json.loads(line) for line in buf.getvalue().splitlines()]
    out = audit_trace(records)
    assert out["checks"]["costs"]["ok"]
    assert out["beta"] == 1
    if algo in ("B", "Bhat", "C"):
        for level in out["checks"]["charging"].values():
            assert level["moderate_cost_ok"]
    if algo in ("B", "Bhat"):
        assert out["checks"]["witness"]["ok"]
    for level in out["checks"]["bond"].values():
        assert level["ok"]


def test_trace_audit_needs_header():
    with pytest.raises(AuditPreconditionError):
        audit_trace([{"type": "step"}])
    with pytest.raises(AuditPreconditionError):
        audit_trace([], ["nonsense"])
