"""Moderation filter: decide which arriving edges the two-color simulation sees.

A component is *small* if it has at most ``threshold`` vertices and *light* if
at most an ``alpha`` fraction of its vertices have ever been recolored by the
simulation (the set R). An edge between two distinct components that are
both large and heavy would break moderation; it is routed to the excess
sequence instead of the simulation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .graph import ComponentIndex
from .errors import InvariantViolation
from .sim import FeedReport, SimA

SIM = "sim"
EXCESS = "exc"


class Size(str, Enum):
    SMALL = "small"
    LARGE = "large"


class Weight(str, Enum):
    LIGHT = "light"
    HEAVY = "heavy"


def classify_component(size: int, recolored: int, threshold: Fraction,
                       alpha: Fraction) -> tuple[Size, Weight]:
    """Small iff ``size <= threshold``; light iff ``recolored / size <= alpha``."""
    small = Size.SMALL if size <= threshold else Size.LARGE
    light = Weight.LIGHT if recolored * alpha.denominator <= alpha.numerator * size else Weight.HEAVY
    return small, light


class WitnessLedger:
    """Disjoint vertex sets over the components of every routed edge.

    A set is created from a whole component once that component holds more
    than ``alpha * threshold`` vertices of R and neither endpoint is covered;
    an uncovered component that touches a covered vertex joins its set.
    """

    def __init__(self, n: int, threshold: Fraction, alpha: Fraction):
        self.full = ComponentIndex(n)
        self.critical = alpha * threshold
        self.owner = [-1] * n
        self.sets: list[list[int]] = []
        self.created_with_r: list[int] = []

    def _assign(self, vertices: list[int], set_id: int) -> None:
        owner = self.owner
        for w in vertices:
            if owner[w] != -1:
                raise InvariantViolation(
                    f"vertex {w} already in witness set {owner[w]}, cannot join {set_id}"
                )
            owner[w] = set_id
        self.sets[set_id].extend(vertices)

    def mark_r(self, vertices) -> None:
        for w in vertices:
            self.full.mark(w)

    def observe(self, u: int, v: int) -> None:
        """Update the witness sets for edge (u, v); R must already include this step."""
        owner = self.owner
        wu, wv = owner[u], owner[v]
        if wu < 0 and wv < 0:
            report = self.full.apply_edge(u, v)
            rcount = self.full.rcount[report.root]
            if rcount > self.critical:
                self.sets.append([])
                self.created_with_r.append(rcount)
                self._assign(self.full.members(report.root), len(self.sets) - 1)
        elif wu >= 0 and wv >= 0:
            self.full.apply_edge(u, v)
        else:
            covered, loose = (u, v) if wu >= 0 else (v, u)
            self._assign(self.full.members(loose), owner[covered])
            self.full.apply_edge(u, v)

    @property
    def count(self) -> int:
        return len(self.sets)


@dataclass
class ModerationState:
    """Routes edges for one simulation; tracks the sim/excess split."""

    sim: SimA
    threshold: Fraction
    alpha: Fraction
    track_witnesses: bool = True
    sim_seq: list[tuple[int, int]] = field(default_factory=list)
    exc_seq: list[tuple[int, int]] = field(default_factory=list)
    violations: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.threshold = Fraction(self.threshold)
        self.alpha = Fraction(self.alpha)
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        self._size_cap = math.floor(self.threshold)
        self._a_num = self.alpha.numerator
        self._a_den = self.alpha.denominator
        self.witness = WitnessLedger(self.sim.n, self.threshold, self.alpha) if self.track_witnesses else None

    def _small_or_light(self, root: int) -> bool:
        index = self.sim.index
        size = index.size[root]
        return size <= self._size_cap or index.rcount[root] * self._a_den <= self._a_num * size

    def admit(self, u: int, v: int) -> str:
        """``SIM`` if appending (u, v) keeps the simulated sequence moderate."""
        index = self.sim.index
        ru, rv = index.find(u), index.find(v)
        if ru == rv or self._small_or_light(ru) or self._small_or_light(rv):
            return SIM
        return EXCESS

    def route(self, u: int, v: int) -> tuple[str, FeedReport | None]:
        decision = self.admit(u, v)
        report = None
        if decision == SIM:
            self.sim_seq.append((u, v))
            report = self.sim.feed(u, v)
        else:
            self.exc_seq.append((u, v))
        if self.witness is not None:
            if decision == EXCESS:
                self._check_excess_witnessed(u, v)
            else:
                self.witness.mark_r(report.recolored)
            self.witness.observe(u, v)
        return decision, report

    def _check_excess_witnessed(self, u: int, v: int) -> None:
        owner = self.witness.owner
        if owner[u] < 0 or owner[v] < 0 or owner[u] == owner[v]:
            self.violations.append(
                f"excess edge ({u}, {v}) not across two distinct witness sets "
                f"(sets {owner[u]}, {owner[v]})"
            )

    def witness_checks(self, beta: int | None) -> dict:
        """End-of-run checks on the witness sets and the excess count."""
        r = self.sim.r_size
        out = {
            "excess": len(self.exc_seq),
            "R": r,
            "witness_sets": self.witness.count if self.witness else None,
            "excess_witness_violations": len(self.violations),
        }
        crit = self.alpha * self.threshold
        if self.witness is not None:
            out["sets_bound_ok"] = self.witness.count * crit <= r
            out["dense_components_covered"] = self._dense_covered()
        if beta is not None:
            out["beta"] = beta
            out["excess_bound"] = float(beta * r / crit)
            out["excess_bound_ok"] = len(self.exc_seq) * crit <= beta * r
        return out

    def _dense_covered(self) -> bool:
        index = self.sim.index
        crit = self.alpha * self.threshold
        owner = self.witness.owner
        for root in index.roots():
            if index.rcount[root] > crit and any(owner[w] < 0 for w in index.members(root)):
                return False
        return True

    def dump(self) -> dict:
        return {
            "threshold": str(self.threshold),
            "alpha": str(self.alpha),
            "sim": [list(e) for e in self.sim_seq],
            "exc": [list(e) for e in self.exc_seq],
            "witness_sets": [sorted(s) for s in self.witness.sets] if self.witness else None,
        }
