"""Run one algorithm on one instance and collect a :class:`RunResult`."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import IO

from .adversaries import make_adversary
from .augment import AugmentedRecoloring
from .base import OnlineAlgorithm, TwoColorAlgorithm
from .errors import InstanceError
from .greedy import GreedyCover
from .instance import FORMAT_VERSION, Instance, format_number
from .levels import LeveledRecoloring
from .oracles import bond_size, opt2_exact
from .sim import DEFAULT_POLICY

ALGORITHMS = ("A", "B", "Bhat", "C", "greedy")

CSV_COLUMNS = [
    "run_id", "algorithm", "n", "m", "D", "alpha", "epsilon", "beta", "seed", "policy",
    "cost_total", "cost_basic", "cost_special", "opt2_final", "ratio", "colors_used",
    "specials_marked", "excess_edges", "max_level", "violations",
]


@dataclass
class RunParams:
    algorithm: str
    alpha: Fraction = Fraction(1, 2)
    epsilon: Fraction = Fraction(1, 4)
    beta: int | None = None
    policy: str = DEFAULT_POLICY
    seed: int = 0
    track_witnesses: bool = True

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise InstanceError(f"unknown algorithm {self.algorithm!r}; choose from {ALGORITHMS}")
        self.alpha = Fraction(self.alpha)
        self.epsilon = Fraction(self.epsilon)


@dataclass
class RunResult:
    run_id: str
    algorithm: str
    n: int
    m: int
    D: Fraction
    alpha: Fraction | None
    epsilon: Fraction | None
    beta: int | None
    seed: int
    policy: str | None
    cost_total: Fraction
    cost_basic: Fraction
    cost_special: Fraction
    opt2_final: int
    ratio: Fraction | None
    colors_used: int
    specials_marked: int
    excess_edges: int
    max_level: int | None
    violations: int
    beta_source: str = ""
    details: dict = field(default_factory=dict)
    violation_messages: list[str] = field(default_factory=list)

    def csv_row(self) -> list[str]:
        return [
            self.run_id, self.algorithm, str(self.n), str(self.m), format_number(self.D),
            format_number(self.alpha), format_number(self.epsilon),
            "" if self.beta is None else str(self.beta), str(self.seed), self.policy or "",
            format_number(self.cost_total), format_number(self.cost_basic),
            format_number(self.cost_special), str(self.opt2_final), format_number(self.ratio),
            str(self.colors_used), str(self.specials_marked), str(self.excess_edges),
            "" if self.max_level is None else str(self.max_level), str(self.violations),
        ]

    def to_json(self) -> dict:
        row = {k: (v if v != "" else None) for k, v in zip(CSV_COLUMNS, self.csv_row())}
        return row | {
            "beta_source": self.beta_source,
            "details": _jsonable(self.details),
            "violation_messages": self.violation_messages[:50],
        }


def _jsonable(x):
    if isinstance(x, Fraction):
        return format_number(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def build_algorithm(instance: Instance, params: RunParams, beta: int) -> OnlineAlgorithm:
    a = params.algorithm
    if a == "A":
        return TwoColorAlgorithm(instance, params.policy)
    if a in ("B", "Bhat"):
        return AugmentedRecoloring(instance, a, params.alpha, params.policy, params.track_witnesses)
    if a == "C":
        return LeveledRecoloring(instance, params.epsilon, params.alpha, beta, params.policy)
    return GreedyCover(instance)


def resolve_beta(instance: Instance, params: RunParams) -> tuple[int, str]:
    """Bond bound for the run: explicit, exact, hinted, or assumed to be 1."""
    if params.beta is not None:
        return params.beta, "param"
    if instance.edges is not None:
        beta, src = bond_size(instance.n, instance.edges, hint=instance.beta_hint)
        if beta is not None:
            return max(1, beta), src
    if instance.beta_hint is not None:
        return instance.beta_hint, "hint"
    return 1, "assumed"


class TraceWriter:
    """JSON lines: one header, one record per step, one summary."""

    def __init__(self, fh: IO[str]):
        self.fh = fh

    def write(self, obj: dict) -> None:
        self.fh.write(json.dumps(obj, separators=(",", ":"), sort_keys=True) + "\n")


def _step_json(rec) -> dict:
    return {
        "type": "step",
        "i": rec.index,
        "edge": list(rec.edge),
        "route": rec.route,
        "cost": format_number(rec.cost) if rec.cost.denominator != 1 else rec.cost.numerator,
        "events": [[e.vertex, e.old, e.new, str(e.cost), e.bucket] for e in rec.events],
        "feeds": [list(f) for f in rec.feeds],
    }


def drive(algo: OnlineAlgorithm, instance: Instance, on_step=None) -> list[tuple[int, int]]:
    """Feed the instance's edges (or the adaptive adversary's) to ``algo``."""
    edges: list[tuple[int, int]] = []
    if instance.edges is not None:
        for u, v in instance.edges:
            rec = algo.process(u, v)
            edges.append((u, v))
            if on_step:
                on_step(rec)
    else:
        adversary = make_adversary(instance)
        algo.adversary = adversary
        while True:
            batch = adversary.next_batch(algo)
            if batch is None:
                break
            for u, v in batch:
                rec = algo.process(u, v)
                edges.append((u, v))
                if on_step:
                    on_step(rec)
    return edges


def _distinct_colors(algo: OnlineAlgorithm) -> int:
    seen = set(algo.instance.initial_colors)
    seen.update(e.new for e in algo.state.events)
    return len(seen)


def run(instance: Instance, params: RunParams, run_id: str = "run",
        trace: IO[str] | None = None, keep_engine: bool = False) -> RunResult:
    """Deterministic in (instance, params). With ``keep_engine`` the finished
    algorithm object is attached as ``result.engine`` for further auditing."""
    beta, beta_src = resolve_beta(instance, params)
    algo = build_algorithm(instance, params, beta)
    writer = TraceWriter(trace) if trace is not None else None
    if writer:
        writer.write({
            "type": "header",
            "format": FORMAT_VERSION,
            "run_id": run_id,
            "algorithm": params.algorithm,
            "params": {
                "alpha": str(params.alpha), "epsilon": str(params.epsilon), "beta": beta,
                "beta_source": beta_src, "policy": params.policy, "seed": params.seed,
            },
            "instance": instance.to_json(),
        })
    edges = drive(algo, instance, (lambda rec: writer.write(_step_json(rec))) if writer else None)
    if instance.edges is None:
        # adaptive run: beta of the graph actually produced
        b, src = bond_size(instance.n, edges, hint=None)
        if b is not None and params.algorithm != "C":
            beta, beta_src = max(1, b), src
    violations = list(algo.violations) + algo.final_violations()
    details = algo.summary()
    result = _result(algo, instance, params, run_id, edges, beta, beta_src, details, violations)
    if writer:
        writer.write({"type": "summary", "cost_exact": str(result.cost_total), **result.to_json()})
    if keep_engine:
        result.engine = algo
        result.edges = edges
    return result


def _result(algo, instance, params, run_id, edges, beta, beta_src, details, violations) -> RunResult:
    a = params.algorithm
    state = algo.state
    mod = getattr(algo, "moderation", None)
    if mod is not None:
        violations += mod.violations
        wc = mod.witness_checks(beta)
        details["witness"] = wc
    if a in ("B", "Bhat") and not details.get("recx_bound_ok", True):
        violations.append("recx cost exceeds (specials + special-special arrivals) * D")
    opt2 = opt2_exact(instance.initial_colors, edges)
    total = state.cumulative_cost
    ratio = Fraction(total, opt2) if opt2 else None
    if a == "C":
        colors_used = algo.colors_used()
        specials = sum(1 for lv in algo.level if lv > 1)
        excess = details["excess_edges"]
        max_level = algo.max_level
    else:
        colors_used = _distinct_colors(algo)
        specials = sum(state.special_mark)
        excess = len(mod.exc_seq) if mod is not None else 0
        max_level = None
    uses_alpha = a in ("B", "Bhat", "C")
    return RunResult(
        run_id=run_id, algorithm=a, n=instance.n, m=len(edges), D=instance.D,
        alpha=params.alpha if uses_alpha else None,
        epsilon=params.epsilon if a == "C" else None,
        beta=beta, seed=params.seed,
        policy=params.policy if a != "greedy" else None,
        cost_total=total, cost_basic=state.basic_cost, cost_special=state.special_cost,
        opt2_final=opt2, ratio=ratio, colors_used=colors_used, specials_marked=specials,
        excess_edges=excess, max_level=max_level, violations=len(violations),
        beta_source=beta_src, details=details, violation_messages=violations,
    )
