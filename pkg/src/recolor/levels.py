"""Hierarchy of two-color simulations on disjoint color pairs.

Level ``j`` runs its own simulation on colors ``{2j-1, 2j}`` behind a
moderation filter with size threshold ``tau``. An edge whose endpoints share
a level goes to that level's simulation when moderation admits it;
otherwise its first endpoint is promoted to the next level. Promotion
replays the vertex's edges to the target level and climbs again on the
first rejected one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .base import OnlineAlgorithm
from .errors import InstanceError, LevelCapError
from .graph import Palette
from .instance import Instance
from .moderation import SIM, ModerationState
from .sim import DEFAULT_POLICY, SimA


def _floor_pow2(exponent: Fraction) -> int:
    """Exact floor of 2**exponent for a non-negative rational exponent."""
    p, q = exponent.numerator, exponent.denominator
    target = 1 << p  # floor(2^(p/q)) = largest m with m^q <= 2^p
    m = int(round(2 ** float(exponent)))
    while m ** q > target:
        m -= 1
    while (m + 1) ** q <= target:
        m += 1
    return m


def level_parameters(epsilon: Fraction, alpha: Fraction, beta: int) -> tuple[Fraction, Fraction]:
    """``(tau, gamma)`` with ``tau = max(2^(1/eps), 4 beta^2 / alpha)``.

    When ``1/eps`` is not an integer the power of two is rounded down to an
    integer, which leaves the size test ``|C| <= tau`` unchanged.
    """
    inv = 1 / Fraction(epsilon)
    power = Fraction(1 << inv.numerator) if inv.denominator == 1 else Fraction(_floor_pow2(inv))
    tau = max(power, Fraction(4 * beta * beta) / alpha)
    gamma = Fraction(2 * beta * beta) / (alpha * tau)
    return tau, gamma


def level_cap(n: int) -> int:
    return max(1, math.ceil(math.log2(n))) + 2 if n > 1 else 2


def max_level_bound(n: int, gamma: Fraction) -> int | None:
    """``floor(log_{1/gamma} n) + 2``, computed exactly; None unless gamma < 1."""
    if not 0 < gamma < 1:
        return None
    base, t = 1 / gamma, 0
    while base ** (t + 1) <= n:
        t += 1
    return t + 2


@dataclass
class Level:
    index: int
    sim: SimA
    moderation: ModerationState
    excess: list[tuple[int, int]] = field(default_factory=list)
    promoted: list[int] = field(default_factory=list)

    @property
    def colors(self) -> tuple[int, int]:
        return self.sim.lo, self.sim.hi


class LeveledRecoloring(OnlineAlgorithm):

    name = "C"

    def __init__(self, instance: Instance, epsilon: Fraction = Fraction(1, 4),
                 alpha: Fraction = Fraction(1, 2), beta: int = 1,
                 policy: str = DEFAULT_POLICY, track_witnesses: bool = False):
        epsilon = Fraction(epsilon)
        if not 0 < epsilon <= 1:
            raise InstanceError("epsilon must lie in (0, 1]")
        if beta < 1:
            raise InstanceError("beta must be >= 1")
        self.cap = level_cap(instance.n)
        super().__init__(instance, Palette([1] * (2 * self.cap - 2)))
        self.epsilon = epsilon
        self.alpha = Fraction(alpha)
        self.beta = beta
        self.tau, self.gamma = level_parameters(epsilon, self.alpha, beta)
        self.policy = policy
        self.track_witnesses = track_witnesses
        self.level = [1] * instance.n
        self.levels: list[Level] = []
        self._add_level(instance.initial_colors)
        # (min, max, level) for every edge fed to a level's simulation
        self.fed_pairs: set[tuple[int, int, int]] = set()
        self.promotions = 0
        self._promoted_step: list[int] = []

    def _add_level(self, initial=None) -> Level:
        j = len(self.levels) + 1
        if j > self.cap:
            raise LevelCapError(f"level {j} exceeds cap {self.cap} (n={self.n})")
        sim = SimA(self.n, (2 * j - 1, 2 * j), initial, self.policy)
        mod = ModerationState(sim, self.tau, self.alpha, self.track_witnesses)
        lvl = Level(j, sim, mod)
        self.levels.append(lvl)
        return lvl

    def get_level(self, j: int) -> Level:
        while len(self.levels) < j:
            self._add_level()
        return self.levels[j - 1]

    @property
    def max_level(self) -> int:
        return max(self.level, default=1)

    def _feed(self, lvl: Level, u: int, v: int) -> bool:
        decision, report = lvl.moderation.route(u, v)
        if decision != SIM:
            return False
        j = lvl.index
        self._record_feed(j, u, v, lvl.sim)
        self.fed_pairs.add((min(u, v), max(u, v), j))
        color, level = lvl.sim.color, self.level
        for w in report.recolored:
            if level[w] == j:
                self.state.recolor(w, color[w], "sim")
        return True

    def _step(self, u: int, v: int) -> None:
        self._promoted_step = []
        j = self.level[u]
        if j != self.level[v]:
            self._route = "skip"
            return
        if self._feed(self.levels[j - 1], u, v):
            self._route = "sim"
            return
        self._route = "exc"
        self.levels[j - 1].excess.append((u, v))
        self.promote(u, j + 1)

    def promote(self, u: int, k: int) -> None:
        """Move ``u`` up to the first level from ``k`` on that accepts all its edges."""
        adj, level = self.graph.adj, self.level
        while True:
            lvl = self.get_level(k)
            lvl.promoted.append(u)
            rejected = None
            for v in adj[u]:
                if level[v] == k and not self._feed(lvl, u, v):
                    rejected = (u, v)
                    break
            if rejected is None:
                break
            lvl.excess.append(rejected)
            k += 1
        level[u] = k
        self.promotions += 1
        self._promoted_step.append(u)
        self.state.recolor(u, lvl.sim.color[u], "promote")

    def _check_step(self, u: int, v: int) -> None:
        level, fed = self.level, self.fed_pairs
        for w in {u, v, *self._promoted_step}:
            k = level[w]
            for x in self.graph.adj[w]:
                if level[x] == k and (min(w, x), max(w, x), k) not in fed:
                    self.violations.append(
                        f"step {self.state.step}: edge ({w}, {x}) at level {k} was never fed to that level"
                    )

    def level_report(self) -> list[dict]:
        rows = []
        prev_r = None
        for lvl in self.levels:
            r = lvl.sim.r_size
            f = len(lvl.excess)
            row = {
                "level": lvl.index,
                "R": r,
                "F": f,
                "E": len(lvl.sim.edges),
                "S": len(lvl.promoted),
                "sim_cost": lvl.sim.total_cost,
                "F_bound_ok": f * self.alpha * self.tau <= self.beta * r,
            }
            if prev_r is not None:
                row["E_bound_ok"] = row["E"] * self.alpha * self.tau <= self.beta ** 2 * prev_r
                row["R_bound_ok"] = r <= self.gamma * prev_r
            rows.append(row)
            prev_r = r
        return rows

    def colors_used(self) -> int:
        return 2 * self.max_level

    def summary(self) -> dict:
        levels = self.level_report()
        f_total = sum(row["F"] for row in levels)
        sim_total = sum(row["sim_cost"] for row in levels)
        total = self.state.cumulative_cost
        return {
            "tau": self.tau,
            "gamma": self.gamma,
            "beta": self.beta,
            "levels": levels,
            "max_level": self.max_level,
            "levels_opened": len(self.levels),
            "max_level_bound": max_level_bound(self.n, self.gamma),
            "excess_edges": f_total,
            "promotions": self.promotions,
            "cost_bound_ok": total <= f_total + sim_total,
        }
