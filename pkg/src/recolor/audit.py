"""Post-hoc verifiers for finished runs.

* :func:`audit_charging` replays a two-color simulation's feed log and runs
  the four-case charging scheme with the fresh-vertex sets ``X(C)``.
* :func:`audit_bond_lemma` counts edges between connected vertex sets and
  compares with ``(k - 1) * beta``.
* :func:`audit_costs` reconciles a run's recoloring events with its totals.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import AuditPreconditionError
from .graph import ComponentIndex
from .sim import get_policy

CASES = ("small", "large-light", "large-heavy-small", "large-heavy-X")


@dataclass
class ChargingReport:
    threshold: Fraction
    alpha: Fraction
    steps: int = 0
    flips: int = 0
    iplus_steps: int = 0
    cost_total: int = 0
    cost_iplus: int = 0
    r_size: int = 0
    case_counts: Counter = field(default_factory=Counter)
    max_charge: int = 0
    charge_cap: int = 0
    min_x_ratio: Fraction | None = None
    min_step_ratio: Fraction | None = None
    violations: list[str] = field(default_factory=list)
    enforced: bool = True

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "threshold": str(self.threshold),
            "alpha": str(self.alpha),
            "steps": self.steps,
            "flips": self.flips,
            "iplus_steps": self.iplus_steps,
            "cost_total": self.cost_total,
            "cost_iplus": self.cost_iplus,
            "iplus_share_ok": 7 * self.cost_iplus >= self.cost_total,
            "R": self.r_size,
            "cases": dict(self.case_counts),
            "max_charge": self.max_charge,
            "charge_cap": self.charge_cap,
            "min_x_ratio": None if self.min_x_ratio is None else float(self.min_x_ratio),
            "min_step_ratio": None if self.min_step_ratio is None else float(self.min_step_ratio),
            "enforced": self.enforced,
            "violations": self.violations[:20],
            "violation_count": len(self.violations),
        }


def charge_cap(threshold: Fraction) -> int:
    """``ceil(log2 threshold) + 4`` computed on integers."""
    t = math.ceil(Fraction(threshold))
    return max(0, (t - 1).bit_length()) + 4


def audit_charging(n: int, feeds: Iterable[tuple[int, int, int | None]], threshold: Fraction,
                   alpha: Fraction, policy: str | None = None) -> ChargingReport:
    """Replay ``feeds`` (edge plus the flipped endpoint, or None) and check:

    * every live component keeps ``|X(C)| >= |C| (1 - alpha) / 5``;
    * each I+ step charges at least ``|C| (1 - alpha) / 20`` vertices;
    * no vertex is charged more than ``ceil(log2 threshold) + 4`` times.

    Raises :class:`AuditPreconditionError` if a fed edge joins two distinct
    components that are both large and heavy.
    """
    threshold, alpha = Fraction(threshold), Fraction(alpha)
    rep = ChargingReport(threshold, alpha)
    if policy is not None:
        rep.enforced = get_policy(policy).growth_guarantee is not None
    rep.charge_cap = charge_cap(threshold)
    index = ComponentIndex(n)
    xs: list[set[int] | None] = [{v} for v in range(n)]
    charges = [0] * n
    size, rcount = index.size, index.rcount
    fifth = (1 - alpha) / 5
    twentieth = (1 - alpha) / 20

    def small(root):
        return size[root] <= threshold

    def light(root):
        return rcount[root] <= alpha * size[root]

    for step, (u, v, flipped) in enumerate(feeds):
        rep.steps += 1
        ru, rv = index.find(u), index.find(v)
        if ru == rv:
            if flipped is not None:
                raise AuditPreconditionError(f"step {step}: flip inside a single component")
            continue
        if not (small(ru) or light(ru) or small(rv) or light(rv)):
            raise AuditPreconditionError(
                f"step {step}: edge ({u}, {v}) joins two large heavy components"
            )
        x_new = None
        if flipped is not None:
            rc, ro = (ru, rv) if flipped == u else (rv, ru)
            sc, so = size[rc], size[ro]
            rep.flips += 1
            rep.cost_total += sc
            members = index.members(rc)
            if 4 * (sc + so) >= 5 * sc:
                rep.iplus_steps += 1
                rep.cost_iplus += sc
                if small(rc):
                    case, charged = "small", members
                elif light(rc):
                    case, charged = "large-light", [w for w in members if not index.marked[w]]
                elif not light(ro):
                    case, charged = "large-heavy-small", [w for w in index.members(ro) if index.marked[w]]
                else:
                    case, charged = "large-heavy-X", list(xs[rc])
                rep.case_counts[case] += 1
                for w in charged:
                    charges[w] += 1
                ratio = Fraction(len(charged), sc)
                if rep.min_step_ratio is None or ratio < rep.min_step_ratio:
                    rep.min_step_ratio = ratio
                if len(charged) < twentieth * sc:
                    rep.violations.append(
                        f"step {step}: case {case} charged {len(charged)} < |C|(1-a)/20 with |C|={sc}"
                    )
            other_light = light(ro)
            for w in members:
                index.mark(w)
            if other_light:
                x_new = {w for w in index.members(ro) if not index.marked[w]}
        report = index.apply_edge(u, v)
        root = report.root
        if x_new is None:
            a, b = xs[ru], xs[rv]
            if len(a) < len(b):
                a, b = b, a
            a |= b
            x_new = a
        xs[ru] = xs[rv] = None
        xs[root] = x_new
        ratio = Fraction(len(x_new), size[root])
        if rep.min_x_ratio is None or ratio < rep.min_x_ratio:
            rep.min_x_ratio = ratio
        if len(x_new) < fifth * size[root]:
            rep.violations.append(
                f"step {step}: |X(C)|={len(x_new)} < |C|(1-a)/5 with |C|={size[root]}"
            )
    rep.r_size = sum(index.marked)
    rep.max_charge = max(charges, default=0)
    for w, c in enumerate(charges):
        if c and not index.marked[w]:
            rep.violations.append(f"vertex {w} charged but never recolored")
        if c > rep.charge_cap:
            rep.violations.append(f"vertex {w} charged {c} > {rep.charge_cap} times")
    return rep


def moderate_cost_bound(cost: int, r_size: int, threshold: Fraction, constant: int = 280) -> bool:
    """``cost <= constant * (log2 threshold + 4) * |R|``."""
    return cost <= constant * (math.log2(threshold) + 4) * r_size


# -- bond inequalities -------------------------------------------------------------

@dataclass
class BondAudit:
    k: int
    beta: int
    cross_edges: int
    bound: int

    @property
    def ok(self) -> bool:
        return self.cross_edges <= self.bound

    def to_json(self) -> dict:
        return {"k": self.k, "beta": self.beta, "cross_edges": self.cross_edges,
                "bound": self.bound, "ok": self.ok}


def _induced_connected(part: set[int], adj: list[set[int]]) -> bool:
    if not part:
        return False
    start = next(iter(part))
    seen, stack = {start}, [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y in part and y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(part)


def audit_bond_lemma(n: int, edges: Sequence[tuple[int, int]], parts: Sequence[Iterable[int]],
                     beta: int, partition: bool = True) -> BondAudit:
    """Count edges with endpoints in two different parts; the bound is ``(k-1) beta``.

    With ``partition=True`` the parts must cover every vertex; otherwise they
    only need to be disjoint. Every part must induce a connected subgraph.
    """
    adj: list[set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    owner = [-1] * n
    sets = [set(p) for p in parts]
    for i, p in enumerate(sets):
        for w in p:
            if owner[w] != -1:
                raise AuditPreconditionError(f"vertex {w} appears in two parts")
            owner[w] = i
        if not _induced_connected(p, adj):
            raise AuditPreconditionError(f"part {i} does not induce a connected subgraph")
    if partition and any(o == -1 for o in owner):
        raise AuditPreconditionError("parts do not cover every vertex")
    simple = {(min(u, v), max(u, v)) for u, v in edges}
    cross = sum(1 for u, v in simple if owner[u] != -1 and owner[v] != -1 and owner[u] != owner[v])
    k = len(sets)
    return BondAudit(k, beta, cross, max(0, k - 1) * beta)


def sim_components_audit(n: int, edges: Sequence[tuple[int, int]],
                         sim_edges: Sequence[tuple[int, int]], beta: int) -> BondAudit:
    """Bond check on a finished run: the components of the simulated
    edge set are disjoint connected sets, so the arrived edges running
    between two of them number at most ``beta`` times (sets touched - 1)."""
    index = ComponentIndex(n)
    for u, v in sim_edges:
        index.apply_edge(u, v)
    touched = {index.find(w) for e in edges for w in e}
    cross = {(min(u, v), max(u, v)) for u, v in edges if index.find(u) != index.find(v)}
    k = len(touched)
    return BondAudit(k, beta, len(cross), max(0, k - 1) * beta)


# -- cost reconciliation -----------------------------------------------------------

@dataclass
class CostAudit:
    total: Fraction
    reported: Fraction
    buckets: dict[str, Fraction]
    checks: dict[str, bool]

    @property
    def ok(self) -> bool:
        return self.total == self.reported and all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "total": str(self.total),
            "reported": str(self.reported),
            "buckets": {k: str(v) for k, v in sorted(self.buckets.items())},
            "checks": self.checks,
            "ok": self.ok,
        }


def audit_costs(events: Iterable[dict | object], reported_total: Fraction,
                D: Fraction | None = None, specials_marked: int | None = None,
                special_special_arrivals: int | None = None) -> CostAudit:
    """Recompute the total from recoloring events and split it by bucket.

    When ``D`` and the special counts are given, also checks that the
    special-color repair cost is at most ``(specials + special-special
    arrivals) * D``.
    """
    buckets: dict[str, Fraction] = {}
    total = Fraction(0)
    for ev in events:
        if isinstance(ev, dict):
            cost, bucket = Fraction(ev["cost"]), ev["bucket"]
        else:
            cost, bucket = Fraction(ev.cost), ev.bucket
        total += cost
        buckets[bucket] = buckets.get(bucket, Fraction(0)) + cost
    checks = {"reconciled": total == Fraction(reported_total)}
    if D is not None and specials_marked is not None and special_special_arrivals is not None:
        checks["recx_bound"] = buckets.get("recx", Fraction(0)) <= (
            specials_marked + special_special_arrivals) * Fraction(D)
    return CostAudit(total, Fraction(reported_total), buckets, checks)


# -- whole-trace audit ---------------------------------------------------------------

TRACE_CHECKS = ("charging", "bond", "witness", "costs")


def audit_trace(records: Sequence[dict], checks: Sequence[str] = TRACE_CHECKS) -> dict:
    """Run the requested checks on a parsed JSONL trace (header, steps, summary)."""
    from .instance import parse_fraction
    from .levels import level_parameters
    from .oracles import bond_size

    unknown = set(checks) - set(TRACE_CHECKS)
    if unknown:
        raise AuditPreconditionError(f"unknown checks {sorted(unknown)}")
    header = next((r for r in records if r.get("type") == "header"), None)
    summary = next((r for r in records if r.get("type") == "summary"), None)
    if header is None or summary is None:
        raise AuditPreconditionError("trace needs a header and a summary record")
    steps = [r for r in records if r.get("type") == "step"]
    inst = header["instance"]
    params = header["params"]
    algo = header["algorithm"]
    n = int(inst.get("n", inst.get("params", {}).get("n", 0)))
    D = parse_fraction(inst.get("D", inst.get("params", {}).get("D", 1)))
    alpha = parse_fraction(params["alpha"])
    edges = [tuple(s["edge"]) for s in steps]
    feeds: dict[int, list[tuple[int, int, int | None]]] = {}
    for s in steps:
        for level, u, v, flipped in s["feeds"]:
            feeds.setdefault(level, []).append((u, v, flipped))
    beta, beta_src = bond_size(n, edges, hint=params.get("beta"))
    out: dict = {"run_id": header.get("run_id"), "algorithm": algo,
                 "beta": beta, "beta_source": beta_src, "checks": {}}

    thresholds: dict[int, Fraction] = {}
    if algo in ("B", "Bhat"):
        thresholds = {1: D}
    elif algo == "C":
        tau, _ = level_parameters(parse_fraction(params["epsilon"]), alpha, int(params["beta"]))
        thresholds = {j: tau for j in feeds}

    if "costs" in checks:
        events = [{"cost": e[3], "bucket": e[4]} for s in steps for e in s["events"]]
        out["checks"]["costs"] = audit_costs(events, Fraction(summary["cost_exact"])).to_json()
    if "charging" in checks:
        if not thresholds:
            out["checks"]["charging"] = {"skipped": f"algorithm {algo} runs no moderated simulation"}
        else:
            levels = {}
            for j, thr in sorted(thresholds.items()):
                rep = audit_charging(n, feeds.get(j, []), thr, alpha, params.get("policy"))
                levels[str(j)] = rep.to_json() | {
                    "moderate_cost_ok": moderate_cost_bound(rep.cost_total, rep.r_size, thr)}
            out["checks"]["charging"] = levels
    if "witness" in checks:
        if algo in ("B", "Bhat") and beta is not None:
            r = len(_flipped_vertices(n, feeds.get(1, [])))
            excess = sum(1 for s in steps if s["route"] == "exc")
            out["checks"]["witness"] = {
                "excess": excess, "R": r, "beta": beta,
                "ok": excess * alpha * D <= beta * r,
            }
        else:
            out["checks"]["witness"] = {"skipped": "needs algorithm B or Bhat and a known beta"}
    if "bond" in checks:
        if beta is None:
            out["checks"]["bond"] = {"skipped": "beta unknown"}
        else:
            out["checks"]["bond"] = {
                str(j): sim_components_audit(n, edges, [(u, v) for u, v, _ in fs], beta).to_json()
                for j, fs in sorted(feeds.items())
            }
    return out


def _flipped_vertices(n: int, feeds: Sequence[tuple[int, int, int | None]]) -> set[int]:
    """Vertices recolored by a simulation, recovered from its feed log."""
    index = ComponentIndex(n)
    seen: set[int] = set()
    for u, v, flipped in feeds:
        if flipped is not None:
            seen.update(index.members(flipped))
        index.apply_edge(u, v)
    return seen
