"""Two-color online recoloring for bipartite inputs, with pluggable flip policy.

When an arriving edge is monochromatic its endpoints lie in two different
components (the input is bipartite and each component is properly colored),
and one of the two components is flipped wholesale. The policy picks which.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import InstanceError, NotBipartiteError
from .graph import ComponentIndex, check_edge


@dataclass(frozen=True)
class FlipPolicy:
    name: str
    key: Callable[[ComponentIndex, int], tuple]
    # Lower bound on |C u C'| / |C| for every flip, if the policy guarantees one.
    growth_guarantee: float | None


def _smaller_new(index: ComponentIndex, root: int) -> tuple:
    return (index.size[root] - index.rcount[root], index.size[root], index.min_vertex[root])


def _smaller_size(index: ComponentIndex, root: int) -> tuple:
    return (index.size[root], index.min_vertex[root])


POLICIES: dict[str, FlipPolicy] = {
    "smaller-new": FlipPolicy("smaller-new", _smaller_new, None),
    "smaller-size": FlipPolicy("smaller-size", _smaller_size, 2.0),
}
DEFAULT_POLICY = "smaller-new"


def get_policy(name: str) -> FlipPolicy:
    try:
        return POLICIES[name]
    except KeyError:
        raise InstanceError(f"unknown flip policy {name!r}; choose from {sorted(POLICIES)}") from None


@dataclass(frozen=True)
class FeedRecord:
    """One fed edge. ``flipped`` is the endpoint whose component was flipped."""

    edge: tuple[int, int]
    flipped: int | None
    size_flipped: int
    size_other: int

    @property
    def merged_size(self) -> int:
        return self.size_flipped + self.size_other

    @property
    def cost(self) -> int:
        return self.size_flipped if self.flipped is not None else 0


@dataclass(frozen=True)
class FeedReport:
    recolored: list[int]

    @property
    def cost(self) -> int:
        return len(self.recolored)


class SimA:
    """Two-color recoloring over its own edge set, on colors ``{lo, hi}``."""

    def __init__(self, n: int, colors: tuple[int, int] = (1, 2),
                 initial: Sequence[int] | None = None, policy: str = DEFAULT_POLICY):
        self.n = n
        self.lo, self.hi = colors
        if initial is None:
            self.color = [self.hi] * n
        else:
            self.color = [self.lo if c == 1 else self.hi for c in initial]
        self.index = ComponentIndex(n)
        self.policy = get_policy(policy)
        self.log: list[FeedRecord] = []
        self.edges: list[tuple[int, int]] = []
        self.r_size = 0

    def in_r(self, v: int) -> bool:
        return bool(self.index.marked[v])

    @property
    def total_cost(self) -> int:
        return sum(rec.cost for rec in self.log)

    def feed(self, u: int, v: int) -> FeedReport:
        check_edge(self.n, u, v)
        index = self.index
        ru, rv = index.find(u), index.find(v)
        recolored: list[int] = []
        if self.color[u] == self.color[v]:
            if ru == rv:
                raise NotBipartiteError(
                    f"edge ({u}, {v}) is monochromatic inside one component: odd cycle", (u, v)
                )
            key = self.policy.key
            flip_u = key(index, ru) <= key(index, rv)
            root, endpoint, other = (ru, u, rv) if flip_u else (rv, v, ru)
            lo, hi, color = self.lo, self.hi, self.color
            recolored = index.members(root)
            for w in recolored:
                color[w] = hi if color[w] == lo else lo
                if index.mark(w):
                    self.r_size += 1
            self.log.append(FeedRecord((u, v), endpoint, index.size[root], index.size[other]))
        else:
            other_size = index.size[rv] if ru != rv else 0
            self.log.append(FeedRecord((u, v), None, index.size[ru], other_size))
        index.apply_edge(u, v)
        self.edges.append((u, v))
        return FeedReport(recolored)


def classify_iplus(log: Sequence[FeedRecord]) -> set[int]:
    """Indices of flips whose merged component is at least 5/4 of the flipped one."""
    return {
        i for i, rec in enumerate(log)
        if rec.flipped is not None and 4 * rec.merged_size >= 5 * rec.size_flipped
    }


def iplus_share(log: Sequence[FeedRecord]) -> tuple[int, int]:
    """(cost on I+ steps, total cost)."""
    iplus = classify_iplus(log)
    total = sum(rec.cost for rec in log)
    return sum(log[i].cost for i in iplus), total
