"""Ground truth: exact two-color offline optimum and exact largest bond.

Nothing in here is used inside the online algorithms; these functions feed
reports, audits and tests only.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InstanceError, NotBipartiteError

BRUTEFORCE_MAX_N = 12
BOND_CAP = 16


@dataclass
class Opt2Record:
    """OPT2 per requested prefix length, plus the per-component choice at the
    last prefix: for each component (keyed by its minimum vertex), ``0`` means
    the coloring that puts that vertex on side 1 was cheaper, ``1`` the other."""

    values: dict[int, int] = field(default_factory=dict)
    choices: dict[int, int] = field(default_factory=dict)


def _two_color(n: int, edges: Iterable[tuple[int, int]]) -> tuple[list[int], list[list[int]]]:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        if u == v:
            raise NotBipartiteError(f"self-loop at {u}", (u, v))
        adj[u].append(v)
        adj[v].append(u)
    side = [-1] * n
    comps = []
    for s in range(n):
        if side[s] >= 0:
            continue
        side[s] = 0
        comp = [s]
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if side[y] < 0:
                    side[y] = 1 - side[x]
                    comp.append(y)
                    queue.append(y)
                elif side[y] == side[x]:
                    raise NotBipartiteError(
                        f"graph is not bipartite: edge ({x}, {y}) closes an odd cycle", (x, y)
                    )
        comps.append(comp)
    return side, comps


def opt2_exact(initial_colors: Sequence[int], edges: Sequence[tuple[int, int]],
               prefix_len: int | None = None) -> int:
    """Least number of vertices to recolor, with colors {1,2} only, so that the
    first ``prefix_len`` edges are properly colored."""
    return opt2_record(initial_colors, edges, [prefix_len]).values[
        len(edges) if prefix_len is None else prefix_len
    ]


def opt2_record(initial_colors: Sequence[int], edges: Sequence[tuple[int, int]],
                checkpoints: Iterable[int | None]) -> Opt2Record:
    """OPT2 recomputed from scratch at each checkpoint."""
    n = len(initial_colors)
    rec = Opt2Record()
    for cp in checkpoints:
        i = len(edges) if cp is None else cp
        if not 0 <= i <= len(edges):
            raise InstanceError(f"prefix length {i} out of range")
        side, comps = _two_color(n, edges[:i])
        total = 0
        choices = {}
        for comp in comps:
            # side 0 -> color 1 disagreements vs the flipped assignment
            a = sum(1 for v in comp if initial_colors[v] != 1 + side[v])
            b = len(comp) - a
            total += min(a, b)
            choices[min(comp)] = 0 if a <= b else 1
        rec.values[i] = total
        rec.choices = choices
    return rec


def opt2_bruteforce(initial_colors: Sequence[int], edges: Sequence[tuple[int, int]],
                    prefix_len: int | None = None) -> int:
    """Enumerate all 2^n basic colorings; keep proper ones; minimum disagreement."""
    n = len(initial_colors)
    if n > BRUTEFORCE_MAX_N:
        raise InstanceError(f"brute force limited to n <= {BRUTEFORCE_MAX_N}, got {n}")
    es = list(edges if prefix_len is None else edges[:prefix_len])
    masks = np.arange(1 << n, dtype=np.int64)
    bits = (masks[:, None] >> np.arange(n)) & 1  # bit 0 -> color 1
    proper = np.ones(len(masks), dtype=bool)
    for u, v in es:
        if u == v:
            raise NotBipartiteError(f"self-loop at {u}", (u, v))
        proper &= bits[:, u] != bits[:, v]
    if not proper.any():
        raise NotBipartiteError("graph is not bipartite: no proper 2-coloring exists")
    init = np.asarray(initial_colors, dtype=np.int64) - 1
    disagree = (bits != init).sum(axis=1)
    return int(disagree[proper].min())


@dataclass(frozen=True)
class BondReport:
    beta: int
    witness: tuple[frozenset, frozenset] | None = None


def connected_components(n: int, edges: Iterable[tuple[int, int]]) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = [False] * n
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        comp, stack = [s], [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    comp.append(y)
                    stack.append(y)
        comps.append(sorted(comp))
    return comps


def is_forest(n: int, edges: Iterable[tuple[int, int]]) -> bool:
    simple = {(min(u, v), max(u, v)) for u, v in edges}
    return len(simple) == n - len(connected_components(n, simple))


def _mask_connected(mask: int, adj: list[int]) -> bool:
    reach = mask & -mask
    stack = reach
    while stack:
        b = stack & -stack
        stack ^= b
        nb = adj[b.bit_length() - 1] & mask & ~reach
        reach |= nb
        stack |= nb
    return reach == mask


def connected_subsets(root: int, adj: list[int], allowed: int):
    """Yield every connected vertex set (as a bitmask) that contains ``root``
    and lies inside ``allowed``. Each set is produced exactly once."""
    start = 1 << root

    def grow(chosen: int, cand: int, excluded: int):
        yield chosen
        while cand:
            b = cand & -cand
            cand ^= b
            nxt = chosen | b
            ext = (cand | adj[b.bit_length() - 1]) & allowed & ~nxt & ~excluded
            yield from grow(nxt, ext, excluded)
            excluded |= b

    yield from grow(start, adj[root] & allowed & ~start, 0)


def _component_bond(comp: list[int], adj: list[int]) -> tuple[int, int]:
    full = 0
    for v in comp:
        full |= 1 << v
    root = comp[0]
    best, best_set = 0, 0
    for s in connected_subsets(root, adj, full):
        if s == full:
            continue
        rest = full & ~s
        if not _mask_connected(rest, adj):
            continue
        cut = 0
        t = s
        while t:
            b = t & -t
            t ^= b
            cut += (adj[b.bit_length() - 1] & rest).bit_count()
        if cut > best:
            best, best_set = cut, s
    return best, best_set


def largest_bond_bruteforce(n: int, edges: Iterable[tuple[int, int]],
                            cap: int = BOND_CAP) -> BondReport:
    """Largest bond: the maximum number of edges between two connected halves
    of a component, over all components. Parallel edges collapse."""
    simple = {(min(u, v), max(u, v)) for u, v in edges if u != v}
    adj = [0] * n
    for u, v in simple:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    best = BondReport(0)
    for comp in connected_components(n, simple):
        if len(comp) < 2:
            continue
        if len(comp) > cap:
            raise InstanceError(
                f"component with {len(comp)} vertices exceeds brute-force cap {cap}; "
                "supply beta_hint instead"
            )
        beta, s = _component_bond(comp, adj)
        if beta > best.beta:
            side = frozenset(v for v in comp if s >> v & 1)
            best = BondReport(beta, (side, frozenset(comp) - side))
    return best


def bond_size(n: int, edges: Iterable[tuple[int, int]], cap: int = BOND_CAP,
              hint: int | None = None) -> tuple[int | None, str]:
    """Best-effort largest bond with its provenance: ``forest``, ``bruteforce``,
    ``hint`` or ``unknown``."""
    edges = list(edges)
    if not edges:
        return 0, "forest"
    if is_forest(n, edges):
        return 1, "forest"
    try:
        return largest_bond_bruteforce(n, edges, cap).beta, "bruteforce"
    except InstanceError:
        return (hint, "hint") if hint is not None else (None, "unknown")
