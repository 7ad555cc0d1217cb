"""Moderated simulation with special colors of cost up to D.

Variant ``B`` keeps ``delta + 1`` special colors and always recolors a
special vertex with a special color. Variant ``Bhat`` keeps only ``delta``
special colors; when a special vertex sees ``delta`` special neighbours and
none of the special colors is free, it falls back to a free basic color.
"""

from __future__ import annotations

from fractions import Fraction

from .base import OnlineAlgorithm
from .errors import InstanceError, InvariantViolation, NoFreeColorError
from .graph import Palette, is_basic
from .instance import Instance
from .moderation import SIM, ModerationState
from .sim import DEFAULT_POLICY, SimA

VARIANTS = ("B", "Bhat")


class AugmentedRecoloring(OnlineAlgorithm):

    def __init__(self, instance: Instance, variant: str = "B", alpha: Fraction = Fraction(1, 2),
                 policy: str = DEFAULT_POLICY, track_witnesses: bool = True):
        if variant not in VARIANTS:
            raise InstanceError(f"unknown variant {variant!r}")
        self.variant = variant
        self.name = variant
        self.delta = instance.delta
        size = instance.delta + 1 if variant == "B" else instance.delta
        palette = Palette([instance.special_cost(k) for k in range(size)])
        super().__init__(instance, palette)
        self.alpha = Fraction(alpha)
        self.D = instance.D
        self.sim = SimA(instance.n, (1, 2), instance.initial_colors, policy)
        self.moderation = ModerationState(self.sim, self.D, self.alpha, track_witnesses)
        self.special = self.state.special_mark
        self.marked_order: list[int] = []
        self.special_special_arrivals = 0
        self.case3_hits = 0
        self.recolor_calls = 0
        self._dense = self.alpha * self.D

    # -- colour choices ----------------------------------------------------
    def _used_by_neighbors(self, w: int) -> set[int]:
        actual = self.state.actual
        return {actual[x] for x in self.graph.adj[w]}

    def free_special(self, w: int) -> int | None:
        used = self._used_by_neighbors(w)
        for c in self.state.palette.specials:
            if c not in used:
                return c
        return None

    def free_basic(self, w: int) -> int | None:
        used = self._used_by_neighbors(w)
        for c in (1, 2):
            if c not in used:
                return c
        return None

    def _diagnostic(self, w: int) -> dict:
        actual = self.state.actual
        return {
            "vertex": w,
            "step": self.state.step,
            "degree": self.graph.degree(w),
            "neighbors": {x: actual[x] for x in self.graph.adj[w]},
            "special_neighbors": sum(1 for x in self.graph.adj[w] if self.special[x]),
            "palette_specials": list(self.state.palette.specials),
        }

    def _to_free_special(self, w: int) -> None:
        c = self.free_special(w)
        if c is None:
            raise NoFreeColorError(f"no free special color for vertex {w}", self._diagnostic(w))
        self.state.recolor(w, c, "recx")

    def _recolor_hat(self, w: int) -> None:
        self.recolor_calls += 1
        dstar = sum(1 for x in self.graph.adj[w] if self.special[x])
        if dstar > self.delta:
            raise InvariantViolation(f"vertex {w} has {dstar} special neighbours > delta")
        c = self.free_special(w)
        if c is None and dstar == self.delta:
            c = self.free_basic(w)
        if c is None:
            raise NoFreeColorError(f"no free color for special vertex {w}", self._diagnostic(w))
        self.state.recolor(w, c, "recx")

    # -- the step ------------------------------------------------------------
    def _step(self, u: int, v: int) -> None:
        special = self.special
        if special[u] and special[v]:
            self.special_special_arrivals += 1
        decision, report = self.moderation.route(u, v)
        self._route = decision
        if decision == SIM:
            self._record_feed(1, u, v, self.sim)
            color = self.sim.color
            for w in report.recolored:
                if not special[w]:
                    self.state.recolor(w, color[w], "sim")
        elif not special[u] and not special[v]:
            special[u] = 1
            self.marked_order.append(u)
        self.recx(u, v)

    def recx(self, u: int, v: int) -> None:
        special, actual = self.special, self.state.actual
        fix = self._to_free_special if self.variant == "B" else self._recolor_hat
        if special[u] and special[v]:
            if actual[u] == actual[v]:
                fix(u)
        elif special[u]:
            if is_basic(actual[u]):
                fix(u)
        elif special[v]:
            if is_basic(actual[v]):
                self.case3_hits += 1
                fix(v)

    # -- invariants ----------------------------------------------------------
    def _check_step(self, u: int, v: int) -> None:
        actual = self.state.actual
        index = self.sim.index
        for w in self.marked_order:
            c = actual[w]
            if is_basic(c):
                if self.variant == "B":
                    self.violations.append(f"step {self.state.step}: special vertex {w} has basic color")
                elif self.graph.degree(w) != self.delta or any(
                    is_basic(actual[x]) for x in self.graph.adj[w]
                ):
                    self.violations.append(
                        f"step {self.state.step}: basic-colored special vertex {w} "
                        "lacks full degree or has a basic neighbour"
                    )
            elif index.rcount[index.find(w)] <= self._dense:
                self.violations.append(
                    f"step {self.state.step}: special-colored vertex {w} lies in a simulated "
                    "component without enough recolored vertices"
                )
        for w in (u, v):
            if not is_basic(actual[w]) and not self.special[w]:
                self.violations.append(f"step {self.state.step}: unmarked vertex {w} has special color")

    def summary(self) -> dict:
        recx_cost = self.state.bucket_costs.get("recx", Fraction(0))
        v_prime = len(self.marked_order)
        e_prime = self.special_special_arrivals
        return {
            "R": self.sim.r_size,
            "sim_cost": self.sim.total_cost,
            "mirror_cost": self.state.bucket_costs.get("sim", Fraction(0)),
            "recx_cost": recx_cost,
            "excess_edges": len(self.moderation.exc_seq),
            "specials_marked": v_prime,
            "special_special_arrivals": e_prime,
            "recx_bound_ok": recx_cost <= (v_prime + e_prime) * self.D,
            "specials_le_excess": v_prime <= len(self.moderation.exc_seq),
            "case3_hits": self.case3_hits,
        }
