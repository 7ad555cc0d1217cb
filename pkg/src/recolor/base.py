"""Common driver for all online recoloring algorithms in the package."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .graph import ColoringState, Graph, Palette, monochromatic_near, validate_coloring
from .instance import Instance
from .sim import SimA


@dataclass
class StepRecord:
    index: int
    edge: tuple[int, int]
    route: str
    cost: Fraction
    events: list = field(default_factory=list)
    # (level, u, v, flipped endpoint or None) for every edge fed to a simulation
    feeds: list = field(default_factory=list)


class OnlineAlgorithm:
    """Feed edges one at a time with :meth:`process`; the coloring is checked
    for monochromatic edges after every step (incrementally, around the
    vertices that changed color)."""

    name = "abstract"

    def __init__(self, instance: Instance, palette: Palette):
        self.instance = instance
        self.n = instance.n
        self.graph = Graph(instance.n)
        self.state = ColoringState(instance.initial_colors, palette)
        self.records: list[StepRecord] = []
        self.violations: list[str] = []
        self._feeds: list = []
        self._route = ""

    def process(self, u: int, v: int) -> StepRecord:
        i = self.graph.add(u, v)
        state = self.state
        state.step = i
        state.touched = []
        n_events = len(state.events)
        cost_before = state.cumulative_cost
        self._feeds = []
        self._route = ""
        self._step(u, v)
        touched = state.touched + [u, v]
        for e in monochromatic_near(state.actual, self.graph, touched):
            self.violations.append(f"step {i}: monochromatic edge {e}")
        self._check_step(u, v)
        rec = StepRecord(i, (u, v), self._route, state.cumulative_cost - cost_before,
                         state.events[n_events:], self._feeds)
        self.records.append(rec)
        return rec

    def _step(self, u: int, v: int) -> None:
        raise NotImplementedError

    def _check_step(self, u: int, v: int) -> None:
        pass

    def _record_feed(self, level: int, u: int, v: int, sim: SimA) -> None:
        self._feeds.append((level, u, v, sim.log[-1].flipped))

    def final_violations(self) -> list[str]:
        return [f"final: monochromatic edge {e}"
                for e in validate_coloring(self.state.actual, self.graph.edges)]

    def summary(self) -> dict:
        return {}

    # Adversary view -------------------------------------------------------
    def colors(self) -> list[int]:
        return self.state.actual

    def is_special(self, v: int) -> bool:
        return bool(self.state.ever_special[v])


class TwoColorAlgorithm(OnlineAlgorithm):
    """The two-color simulation run directly on the whole stream (no augmentation)."""

    name = "A"

    def __init__(self, instance: Instance, policy: str | None = None):
        super().__init__(instance, Palette([]))
        kw = {"policy": policy} if policy else {}
        self.sim = SimA(instance.n, (1, 2), instance.initial_colors, **kw)

    def _step(self, u: int, v: int) -> None:
        report = self.sim.feed(u, v)
        self._record_feed(1, u, v, self.sim)
        self._route = "sim"
        color = self.sim.color
        for w in report.recolored:
            self.state.recolor(w, color[w], "sim")

    def summary(self) -> dict:
        return {"R": self.sim.r_size, "sim_cost": self.sim.total_cost}
