"""Dynamic graph state: components, adjacency, colorings and cost accounting.

Vertices are dense ids ``0..n-1``. Colors are integers: ``1`` and ``2`` are
the basic colors, ``3..2+s`` are special colors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import InstanceError, UnknownColorError

BASIC_COLORS = (1, 2)


def is_basic(color: int) -> bool:
    return color == 1 or color == 2


def check_edge(n: int, u: int, v: int) -> None:
    if u == v:
        raise InstanceError(f"self-edge ({u}, {v}) is not allowed")
    if not (0 <= u < n and 0 <= v < n):
        raise InstanceError(f"edge ({u}, {v}) has an endpoint outside [0, {n})")


@dataclass(frozen=True)
class MergeReport:
    """What happened to the two endpoint components when an edge was applied."""

    root_u: int
    root_v: int
    size_u: int
    size_v: int
    r_u: int
    r_v: int
    root: int

    @property
    def merged(self) -> bool:
        return self.root_u != self.root_v

    @property
    def size(self) -> int:
        return self.size_u + self.size_v if self.merged else self.size_u


class ComponentIndex:
    """Union-find over a chosen edge subset with member lists and R-counts.

    Union by size, no path compression: roots stay stable between unions so
    per-root bookkeeping (size, marked count, minimum id, member ring) can be
    read at any checkpoint. Members of a component form a circular linked
    list; two rings are spliced in O(1) on union.
    """

    def __init__(self, n: int):
        self.n = n
        self.parent = list(range(n))
        self.size = [1] * n
        self.rcount = [0] * n
        self.min_vertex = list(range(n))
        self.marked = bytearray(n)
        self._next = list(range(n))

    def find(self, v: int) -> int:
        parent = self.parent
        while parent[v] != v:
            v = parent[v]
        return v

    def same(self, u: int, v: int) -> bool:
        return self.find(u) == self.find(v)

    def members(self, v: int) -> list[int]:
        root = self.find(v)
        out = [root]
        nxt = self._next
        w = nxt[root]
        while w != root:
            out.append(w)
            w = nxt[w]
        return out

    def mark(self, v: int) -> bool:
        """Put ``v`` in R. Returns True if it was not marked before."""
        if self.marked[v]:
            return False
        self.marked[v] = 1
        self.rcount[self.find(v)] += 1
        return True

    def apply_edge(self, u: int, v: int) -> MergeReport:
        check_edge(self.n, u, v)
        ru, rv = self.find(u), self.find(v)
        size, rcount = self.size, self.rcount
        report_args = (ru, rv, size[ru], size[rv], rcount[ru], rcount[rv])
        if ru == rv:
            return MergeReport(*report_args, root=ru)
        big, small = (ru, rv) if size[ru] >= size[rv] else (rv, ru)
        self.parent[small] = big
        size[big] += size[small]
        rcount[big] += rcount[small]
        if self.min_vertex[small] < self.min_vertex[big]:
            self.min_vertex[big] = self.min_vertex[small]
        nxt = self._next
        nxt[big], nxt[small] = nxt[small], nxt[big]
        return MergeReport(*report_args, root=big)

    def roots(self) -> Iterator[int]:
        return (v for v in range(self.n) if self.parent[v] == v)

    def snapshot(self) -> dict[int, tuple[int, int]]:
        """Map of root -> (size, R-count)."""
        return {r: (self.size[r], self.rcount[r]) for r in self.roots()}


def components_from_scratch(
    n: int, edges: Iterable[tuple[int, int]], marked: Iterable[int] = ()
) -> dict[frozenset, int]:
    """Independent recomputation: component vertex set -> number of marked members."""
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    marks = set(marked)
    seen = [False] * n
    out = {}
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        stack, comp = [s], [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    stack.append(y)
                    comp.append(y)
        out[frozenset(comp)] = sum(1 for x in comp if x in marks)
    return out


class Graph:
    """Arrived edges with adjacency kept in first-arrival order."""

    def __init__(self, n: int):
        self.n = n
        self.edges: list[tuple[int, int]] = []
        self.adj: list[dict[int, int]] = [{} for _ in range(n)]

    def add(self, u: int, v: int) -> int:
        check_edge(self.n, u, v)
        i = len(self.edges)
        self.edges.append((u, v))
        self.adj[u].setdefault(v, i)
        self.adj[v].setdefault(u, i)
        return i

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def neighbors(self, v: int) -> Iterable[int]:
        return self.adj[v].keys()


class Palette:
    """Cost of each color. Basic colors cost 1; special color ``3+k`` costs
    ``special_costs[k]``."""

    def __init__(self, special_costs: Sequence[Fraction | int]):
        self.special_costs = [Fraction(c) for c in special_costs]

    @classmethod
    def uniform(cls, size: int, cost: Fraction | int) -> "Palette":
        return cls([Fraction(cost)] * size)

    @property
    def special_size(self) -> int:
        return len(self.special_costs)

    @property
    def specials(self) -> range:
        return range(3, 3 + len(self.special_costs))

    def cost(self, color: int) -> Fraction:
        if color == 1 or color == 2:
            return Fraction(1)
        k = color - 3
        if 0 <= k < len(self.special_costs):
            return self.special_costs[k]
        raise UnknownColorError(f"color {color} is not in the palette")


@dataclass(frozen=True)
class RecolorEvent:
    step: int
    vertex: int
    old: int
    new: int
    cost: Fraction
    bucket: str


class ColoringState:
    """Actual colors of all vertices plus the cost ledger.

    ``special_mark`` is the algorithm-level "special" flag; ``ever_special``
    records vertices that have at some point held a non-basic color (the
    notion the adaptive adversary inspects).
    """

    def __init__(self, initial_colors: Sequence[int], palette: Palette):
        self.n = len(initial_colors)
        self.actual = list(initial_colors)
        self.palette = palette
        self.special_mark = bytearray(self.n)
        self.ever_special = bytearray(self.n)
        self.basic_cost = Fraction(0)
        self.special_cost = Fraction(0)
        self.events: list[RecolorEvent] = []
        self.bucket_costs: dict[str, Fraction] = {}
        self.step = 0
        self.touched: list[int] = []

    @property
    def cumulative_cost(self) -> Fraction:
        return self.basic_cost + self.special_cost

    def recolor(self, v: int, new_color: int, bucket: str = "other") -> Fraction:
        """Set ``v`` to ``new_color``; pays ``cost(new_color)`` iff the color changes."""
        cost = self.palette.cost(new_color)
        old = self.actual[v]
        if old == new_color:
            return Fraction(0)
        self.actual[v] = new_color
        if is_basic(new_color):
            self.basic_cost += cost
        else:
            self.special_cost += cost
            self.ever_special[v] = 1
        self.bucket_costs[bucket] = self.bucket_costs.get(bucket, Fraction(0)) + cost
        self.events.append(RecolorEvent(self.step, v, old, new_color, cost, bucket))
        self.touched.append(v)
        return cost


def validate_coloring(
    colors: Sequence[int], edges: Iterable[tuple[int, int]]
) -> list[tuple[int, int]]:
    """All edges whose endpoints share a color."""
    return [(u, v) for u, v in edges if colors[u] == colors[v]]


def monochromatic_near(
    colors: Sequence[int], graph: Graph, vertices: Iterable[int]
) -> list[tuple[int, int]]:
    """Monochromatic edges incident to ``vertices`` (incremental validity check)."""
    bad = []
    seen = set()
    for v in vertices:
        if v in seen:
            continue
        seen.add(v)
        cv = colors[v]
        for w in graph.adj[v]:
            if colors[w] == cv:
                bad.append((min(v, w), max(v, w)))
    return sorted(set(bad))
