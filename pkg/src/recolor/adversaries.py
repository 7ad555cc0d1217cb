"""Instance generators: randomized path doubling, the adaptive dominating-color
matching adversary, and bounded-bond random families."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Protocol

from .errors import InstanceError
from .graph import ComponentIndex
from .instance import AdversarySpec, Instance, parse_fraction

FAMILIES = ("path_doubling", "dominating", "forest", "cycles", "ladders")
ADAPTIVE = ("dominating",)


def doubling_phases(D: Fraction | int) -> int:
    """``ceil(log2 D - log2 log2 D)`` for ``D >= 2``."""
    D = Fraction(D)
    if D < 2:
        raise InstanceError("path doubling needs D >= 2")
    x = math.log2(D) - math.log2(math.log2(D))
    r = round(x)
    return max(1, r if abs(x - r) < 1e-9 else math.ceil(x))


def _proper_sides(n: int, edges: list[tuple[int, int]]) -> list[int]:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    side = [-1] * n
    for s in range(n):
        if side[s] >= 0:
            continue
        side[s] = 0
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if side[y] < 0:
                    side[y] = 1 - side[x]
                    stack.append(y)
    return side


def _max_degree(n: int, edges) -> int:
    deg = [set() for _ in range(n)]
    for u, v in edges:
        deg[u].add(v)
        deg[v].add(u)
    return max((len(s) for s in deg), default=0)


# -- path doubling -------------------------------------------------------------

def gen_path_doubling(n: int, D: Fraction | int, seed: int, phases: int | None = None) -> Instance:
    """Paths doubled ``phases`` times (default ``ceil(log D - log log D)``).

    Phase ``h`` joins the ``(2j-1)``-th and ``2j``-th leftmost paths by an
    edge between a random endpoint of each. Initial colors are i.i.d. uniform.
    """
    D = parse_fraction(D)
    H = doubling_phases(D) if phases is None else phases
    if H < 1:
        raise InstanceError("need at least one phase")
    block = 1 << H
    if n <= 0 or n % block:
        raise InstanceError(f"n={n} is not a positive multiple of 2^H={block}")
    rng = random.Random(seed)
    colors = [rng.choice((1, 2)) for _ in range(n)]
    paths = [[v] for v in range(n)]
    edges: list[tuple[int, int]] = []
    for _ in range(H):
        merged = []
        for j in range(0, len(paths), 2):
            left, right = paths[j], paths[j + 1]
            a = left[0] if rng.random() < 0.5 else left[-1]
            b = right[0] if rng.random() < 0.5 else right[-1]
            edges.append((a, b))
            if left[-1] != a:
                left = left[::-1]
            if right[0] != b:
                right = right[::-1]
            merged.append(left + right)
        paths = merged
    return Instance(n=n, initial_colors=colors, D=D, delta=2 if H > 1 else 1, beta_hint=1,
                    special_palette_size=3, edges=edges)


# -- bounded-bond families -----------------------------------------------------

def _random_tree(n: int, rng: random.Random) -> list[tuple[int, int]]:
    if n == 2:
        return [(0, 1)]
    seq = [rng.randrange(n) for _ in range(n - 2)]
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    # Pruefer decoding with a pointer (O(n))
    ptr = next(i for i in range(n) if degree[i] == 1)
    leaf = ptr
    for x in seq:
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1 and x < ptr:
            leaf = x
        else:
            ptr += 1
            while degree[ptr] != 1:
                ptr += 1
            leaf = ptr
    edges.append((leaf, n - 1))
    return edges


def _cycles(n: int, rng: random.Random) -> list[tuple[int, int]]:
    order = list(range(n))
    rng.shuffle(order)
    edges, pos = [], 0
    while n - pos >= 4:
        choices = [k for k in range(4, 17, 2) if k <= n - pos]
        k = rng.choice(choices)
        cyc = order[pos:pos + k]
        edges.extend((cyc[i], cyc[(i + 1) % k]) for i in range(k))
        pos += k
    return edges


LADDER_RUNGS = 4


def _ladders(n: int, rng: random.Random) -> list[tuple[int, int]]:
    order = list(range(n))
    rng.shuffle(order)
    edges, pos, m = [], 0, LADDER_RUNGS
    while n - pos >= 2 * m:
        top, bot = order[pos:pos + m], order[pos + m:pos + 2 * m]
        edges.extend((top[i], bot[i]) for i in range(m))
        edges.extend((top[i], top[i + 1]) for i in range(m - 1))
        edges.extend((bot[i], bot[i + 1]) for i in range(m - 1))
        pos += 2 * m
    return edges


BOUNDED_BETA = {"forest": 1, "cycles": 2, "ladders": None}


def gen_bounded_bond(family: str, n: int, seed: int, D: Fraction | int = 4,
                     flip_prob: Fraction = Fraction(1, 4)) -> Instance:
    """Random tree, disjoint even cycles (4..16) or disjoint 2x4 ladders.

    Initial colors: a proper 2-coloring of the final graph with each vertex
    flipped independently with probability ``flip_prob``. Arrival order and
    endpoint order are shuffled.
    """
    if n < 2:
        raise InstanceError("bounded-bond families need n >= 2")
    rng = random.Random(seed)
    if family == "forest":
        edges = _random_tree(n, rng)
    elif family == "cycles":
        edges = _cycles(n, rng)
    elif family == "ladders":
        edges = _ladders(n, rng)
    else:
        raise InstanceError(f"unknown bounded-bond family {family!r}")
    side = _proper_sides(n, edges)
    p = float(flip_prob)
    colors = [(1 + s) if rng.random() >= p else (2 - s) for s in side]
    rng.shuffle(edges)
    edges = [(u, v) if rng.random() < 0.5 else (v, u) for u, v in edges]
    return Instance(n=n, initial_colors=colors, D=parse_fraction(D),
                    delta=max(1, _max_degree(n, edges)), beta_hint=BOUNDED_BETA[family],
                    special_palette_size=max(1, _max_degree(n, edges)) + 1, edges=edges)


# -- adaptive dominating-color adversary -----------------------------------------

class AlgorithmView(Protocol):
    def colors(self) -> list[int]: ...

    def is_special(self, v: int) -> bool: ...


@dataclass
class PhaseStats:
    phase: int
    eligible: int
    pairs: int
    planned_mono: int
    required_mono: int


@dataclass
class DominatingColor:
    """Phase ``h`` pairs active components with ``2^(h-1)`` vertices that are
    dominated by the same basic color and joins each pair by a perfect
    matching. The matching respects both components' bipartitions so the
    graph stays bipartite; within that constraint it lines up equal colors.
    """

    n: int
    seed: int = 0
    index: ComponentIndex = field(init=False)
    phase: int = field(init=False, default=0)
    stats: list[PhaseStats] = field(init=False, default_factory=list)
    side: list[int] = field(init=False)

    def __post_init__(self):
        self.index = ComponentIndex(self.n)
        self.rng = random.Random(self.seed ^ 0x5EED)
        self.side = [0] * self.n
        self.done = False

    def _classify(self, view: AlgorithmView, size: int) -> dict[int, list[int]]:
        colors = view.colors()
        groups: dict[int, list[int]] = {1: [], 2: [], 3: []}
        index = self.index
        for root in index.roots():
            if index.size[root] != size:
                continue
            members = index.members(root)
            basic = sum(1 for w in members if not view.is_special(w))
            if 2 * basic < size:
                continue
            dom = 0
            for c in (1, 2):
                if 4 * sum(1 for w in members if colors[w] == c) >= size:
                    dom |= c
            if dom:
                groups[dom].append(root)
        return groups

    def _pair(self, groups: dict[int, list[int]]) -> list[tuple[int, int]]:
        a, b, both = groups[1], groups[2], groups[3]
        for g in (a, b, both):
            self.rng.shuffle(g)
        # doubly dominated components first fill whichever group is odd
        for g in (a, b):
            if len(g) % 2 and both:
                g.append(both.pop())
        pool = [a, b, both] if len(both) >= 2 else [a, b]
        pairs = []
        for g in pool:
            pairs.extend((g[i], g[i + 1]) for i in range(0, len(g) - 1, 2))
        return pairs

    def _matching(self, ra: int, rb: int, colors: list[int]) -> tuple[list[tuple[int, int]], int]:
        index, side = self.index, self.side
        ma, mb = index.members(ra), index.members(rb)
        xa = sorted((w for w in ma if side[w] == 0), key=lambda w: (colors[w], w))
        ya = sorted((w for w in ma if side[w] == 1), key=lambda w: (colors[w], w))
        xb = sorted((w for w in mb if side[w] == 0), key=lambda w: (colors[w], w))
        yb = sorted((w for w in mb if side[w] == 1), key=lambda w: (colors[w], w))
        best = None
        for left, right in (((xa, ya), (xb, yb)), ((xa, ya), (yb, xb))):
            if len(left[0]) != len(right[0]) or len(left[1]) != len(right[1]):
                continue
            edges = list(zip(left[0], right[0])) + list(zip(left[1], right[1]))
            mono = sum(1 for u, v in edges if colors[u] == colors[v])
            if best is None or mono > best[1]:
                best = (edges, mono)
        if best is None:
            raise InstanceError("components have unbalanced sides; cannot match")
        return best

    def next_batch(self, view: AlgorithmView) -> list[tuple[int, int]] | None:
        """Edges of the next phase, or None once no pair of equal-dominated
        active components of the current size remains."""
        if self.done:
            return None
        self.phase += 1
        h = self.phase
        size = 1 << (h - 1)
        groups = self._classify(view, size)
        eligible = sum(len(g) for g in groups.values())
        pairs = self._pair(groups)
        if not pairs:
            self.done = True
            return None
        colors = list(view.colors())
        batch, planned = [], 0
        for ra, rb in pairs:
            edges, mono = self._matching(ra, rb, colors)
            planned += mono
            batch.extend(edges)
        for u, v in batch:
            if self.index.find(u) != self.index.find(v):
                flip = self.side[u] == self.side[v]
                rv = self.index.find(v)
                if flip:
                    for w in self.index.members(rv):
                        self.side[w] ^= 1
                self.index.apply_edge(u, v)
        required = len(pairs) * (size // 4) if h >= 3 else 0
        self.stats.append(PhaseStats(h, eligible, len(pairs), planned, required))
        return batch


def dominating_delta(n: int) -> int:
    return max(1, math.ceil(math.log2(n))) if n > 1 else 1


def materialize_adaptive(spec: AdversarySpec) -> Instance:
    """Instance shell (vertices, initial colors, palette bounds) for an adaptive spec."""
    if spec.name not in ADAPTIVE:
        raise InstanceError(f"unknown adaptive adversary {spec.name!r}")
    params = dict(spec.params)
    n = int(params.get("n", 0))
    if n < 1:
        raise InstanceError("adaptive adversary needs params.n >= 1")
    D = parse_fraction(params.get("D", 4))
    rng = random.Random(spec.seed)
    colors = [rng.choice((1, 2)) for _ in range(n)]
    delta = dominating_delta(n)
    return Instance(n=n, initial_colors=colors, D=D, delta=delta,
                    special_palette_size=delta + 1, adversary=spec)


def make_adversary(instance: Instance) -> DominatingColor:
    spec = instance.adversary
    if spec is None or spec.name != "dominating":
        raise InstanceError("instance has no adaptive adversary")
    return DominatingColor(instance.n, spec.seed)


def generate(family: str, n: int, seed: int, D: Fraction | int = 4,
             phases: int | None = None) -> Instance:
    """Uniform entry point used by the CLI and the sweep."""
    if family == "path_doubling":
        return gen_path_doubling(n, D, seed, phases)
    if family == "dominating":
        return materialize_adaptive(AdversarySpec("dominating", {"n": n, "D": str(Fraction(D))}, seed))
    if family in BOUNDED_BETA:
        return gen_bounded_bond(family, n, seed, D)
    raise InstanceError(f"unknown family {family!r}; choose from {FAMILIES}")
