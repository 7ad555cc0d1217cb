"""Cover-based baseline: every vertex that enters an online vertex cover is
recolored once, with its own fresh special color."""

from __future__ import annotations

from .base import OnlineAlgorithm
from .errors import InvariantViolation, NoFreeColorError
from .graph import Palette
from .instance import Instance


class GreedyCover(OnlineAlgorithm):
    """Maximal-matching cover of the edges that are monochromatic on arrival."""

    name = "greedy"

    def __init__(self, instance: Instance):
        palette = Palette([instance.special_cost(k) for k in range(instance.n)])
        super().__init__(instance, palette)
        self.cover = bytearray(instance.n)
        self.cover_order: list[int] = []
        self._next = 3

    def _fresh(self, w: int) -> int:
        c = self._next
        if c - 3 >= self.state.palette.special_size:
            raise NoFreeColorError("fresh special colors exhausted", {"vertex": w})
        self._next += 1
        return c

    def _step(self, u: int, v: int) -> None:
        actual = self.state.actual
        if actual[u] != actual[v]:
            self._route = "ok"
            return
        if self.cover[u] or self.cover[v]:
            raise InvariantViolation(f"edge ({u}, {v}) is monochromatic at a covered vertex")
        self._route = "cover"
        for w in (u, v):
            self.cover[w] = 1
            self.cover_order.append(w)
            self.state.special_mark[w] = 1
            self.state.recolor(w, self._fresh(w), "greedy")

    def summary(self) -> dict:
        return {"cover": len(self.cover_order)}
