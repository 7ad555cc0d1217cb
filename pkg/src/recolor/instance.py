"""Problem instances and their JSON file format."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .errors import InstanceError
from .graph import check_edge

FORMAT_VERSION = 1

_STATIC_FIELDS = {
    "version", "n", "D", "delta", "beta_hint", "special_palette_size",
    "special_costs", "initial_colors", "edges",
}
_ADAPTIVE_FIELDS = {"version", "adversary", "params", "seed"}


def parse_fraction(value: Any) -> Fraction:
    """Exact rational from an int, a decimal string, a ``"p/q"`` string or a float."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


def format_number(x: Fraction | int | None) -> str:
    """Stable text form: integers as-is, other rationals with six decimals."""
    if x is None:
        return ""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{float(x):.6f}"


def json_number(x: Fraction | int) -> int | float:
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else float(x)


@dataclass(frozen=True)
class AdversarySpec:
    """A named adaptive edge source. The edges depend on the algorithm under test."""

    name: str
    params: dict = field(default_factory=dict)
    seed: int = 0


@dataclass
class Instance:
    n: int
    initial_colors: list[int]
    D: Fraction = Fraction(1)
    delta: int = 1
    beta_hint: int | None = None
    special_palette_size: int = 0
    special_costs: list[Fraction] | None = None
    edges: list[tuple[int, int]] | None = None
    adversary: AdversarySpec | None = None

    def __post_init__(self):
        self.D = parse_fraction(self.D)
        if self.special_costs is not None:
            self.special_costs = [parse_fraction(c) for c in self.special_costs]
        if self.edges is not None:
            self.edges = [(int(u), int(v)) for u, v in self.edges]
        self.validate()

    @property
    def is_adaptive(self) -> bool:
        return self.adversary is not None

    def validate(self) -> None:
        if self.n < 0:
            raise InstanceError("n must be non-negative")
        if len(self.initial_colors) != self.n:
            raise InstanceError(
                f"initial_colors has {len(self.initial_colors)} entries, expected {self.n}"
            )
        if any(c not in (1, 2) for c in self.initial_colors):
            raise InstanceError("initial colors must be basic (1 or 2)")
        if self.D < 1:
            raise InstanceError("D must be >= 1")
        if self.delta < 1:
            raise InstanceError("delta must be >= 1")
        if self.beta_hint is not None and self.beta_hint < 1:
            raise InstanceError("beta_hint must be >= 1")
        if self.special_costs is not None:
            for c in self.special_costs:
                if not (1 <= c <= self.D):
                    raise InstanceError(f"special cost {c} outside [1, D={self.D}]")
        if (self.edges is None) == (self.adversary is None):
            raise InstanceError("exactly one of edges / adversary must be given")
        if self.edges is not None:
            self.check_degrees()

    def check_degrees(self) -> None:
        nbrs: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            check_edge(self.n, u, v)
            nbrs[u].add(v)
            nbrs[v].add(u)
        worst = max((len(s) for s in nbrs), default=0)
        if worst > self.delta:
            raise InstanceError(f"a vertex has degree {worst} > delta={self.delta}")

    def special_cost(self, k: int) -> Fraction:
        """Cost of the k-th special color (0-based); defaults to D."""
        if self.special_costs and k < len(self.special_costs):
            return self.special_costs[k]
        return self.D

    def to_json(self) -> dict:
        if self.adversary is not None:
            return {
                "version": FORMAT_VERSION,
                "adversary": self.adversary.name,
                "params": self.adversary.params,
                "seed": self.adversary.seed,
            }
        out = {
            "version": FORMAT_VERSION,
            "n": self.n,
            "D": json_number(self.D),
            "delta": self.delta,
            "special_palette_size": self.special_palette_size,
            "initial_colors": list(self.initial_colors),
            "edges": [list(e) for e in self.edges],
        }
        if self.beta_hint is not None:
            out["beta_hint"] = self.beta_hint
        if self.special_costs is not None:
            out["special_costs"] = [json_number(c) for c in self.special_costs]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Instance":
        if "adversary" in data:
            unknown = set(data) - _ADAPTIVE_FIELDS
            if unknown:
                raise InstanceError(f"unknown fields: {sorted(unknown)}")
            from .adversaries import materialize_adaptive

            spec = AdversarySpec(data["adversary"], dict(data.get("params", {})),
                                 int(data.get("seed", 0)))
            return materialize_adaptive(spec)
        unknown = set(data) - _STATIC_FIELDS
        if unknown:
            raise InstanceError(f"unknown fields: {sorted(unknown)}")
        try:
            n = int(data["n"])
            colors = [int(c) for c in data["initial_colors"]]
            edges = [tuple(e) for e in data["edges"]]
        except KeyError as exc:
            raise InstanceError(f"missing field {exc}") from None
        for e in edges:
            if len(e) != 2:
                raise InstanceError(f"edge {list(e)} does not have two endpoints")
        return cls(
            n=n,
            initial_colors=colors,
            D=parse_fraction(data.get("D", 1)),
            delta=int(data.get("delta", max(1, _max_degree(n, edges)))),
            beta_hint=data.get("beta_hint"),
            special_palette_size=int(data.get("special_palette_size", 0)),
            special_costs=data.get("special_costs"),
            edges=edges,
        )

    def dump(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), separators=(",", ":")) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "Instance":
        return cls.from_json(json.loads(Path(path).read_text()))


def _max_degree(n: int, edges) -> int:
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        if 0 <= u < n and 0 <= v < n:
            nbrs[u].add(v)
            nbrs[v].add(u)
    return max((len(s) for s in nbrs), default=0)
