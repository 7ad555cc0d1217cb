"""Parameter sweeps: a grid of (family, algorithm, n, D, epsilon) cells times seeds."""

from __future__ import annotations

import csv
import io
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .adversaries import gen_path_doubling, generate
from .errors import RecolorError
from .instance import format_number
from .runner import CSV_COLUMNS, RunParams, RunResult, run
from .sim import DEFAULT_POLICY


@dataclass
class Grid:
    families: list[str] = field(default_factory=lambda: ["path_doubling"])
    algorithms: list[str] = field(default_factory=lambda: ["B"])
    ns: list[int] = field(default_factory=lambda: [256])
    Ds: list[Fraction] = field(default_factory=lambda: [Fraction(16)])
    epsilons: list[Fraction] = field(default_factory=lambda: [Fraction(1, 4)])
    seeds: list[int] = field(default_factory=lambda: list(range(5)))
    alpha: Fraction = Fraction(1, 2)
    policy: str = DEFAULT_POLICY
    # path doubling depth: None for the default H(D), "full" for log2 n, or an int
    phases: int | str | None = None

    def cells(self) -> list[tuple]:
        out = []
        for fam, algo, n, D in itertools.product(self.families, self.algorithms, self.ns, self.Ds):
            eps_list = self.epsilons if algo == "C" else [None]
            for eps in eps_list:
                out.append((fam, algo, n, D, eps))
        return out

    def jobs(self) -> list[tuple]:
        return [cell + (seed,) for cell in self.cells() for seed in self.seeds]


def _phases(grid: Grid, n: int) -> int | None:
    if grid.phases is None:
        return None
    if grid.phases == "full":
        return int(math.log2(n))
    return int(grid.phases)


def run_id_for(fam: str, algo: str, n: int, D: Fraction, eps: Fraction | None, seed: int) -> str:
    parts = [fam, algo, f"n{n}", f"D{format_number(D)}"]
    if eps is not None:
        parts.append(f"eps{eps}")
    parts.append(f"s{seed}")
    return ":".join(parts)


def run_job(grid: Grid, job: tuple) -> RunResult | tuple[str, str]:
    fam, algo, n, D, eps, seed = job
    rid = run_id_for(fam, algo, n, D, eps, seed)
    try:
        if fam == "path_doubling":
            inst = gen_path_doubling(n, D, seed, _phases(grid, n))
        else:
            inst = generate(fam, n, seed, D)
        params = RunParams(algo, grid.alpha, eps if eps is not None else Fraction(1, 4),
                           policy=grid.policy, seed=seed)
        return run(inst, params, rid)
    except RecolorError as exc:
        return rid, f"{type(exc).__name__}: {exc}"


def _failed_row(rid: str, job: tuple) -> list[str]:
    fam, algo, n, D, eps, seed = job
    row = dict.fromkeys(CSV_COLUMNS, "")
    row.update(run_id=rid, algorithm=algo, n=str(n), D=format_number(D),
               epsilon=format_number(eps), seed=str(seed), violations="1")
    return [row[c] for c in CSV_COLUMNS]


def _job_star(args):
    return run_job(*args)


def execute(grid: Grid, workers: int = 1) -> list[RunResult | tuple[str, str]]:
    """Results in grid order, whatever order the workers finish in."""
    jobs = grid.jobs()
    if workers <= 1 or len(jobs) <= 1:
        return [run_job(grid, j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_job_star, [(grid, j) for j in jobs]))


def aggregate_row(key: str, results: Sequence[RunResult]) -> list[str] | None:
    ratios = [r.ratio for r in results if r.ratio is not None]
    if not results:
        return None
    first = results[0]
    row = dict.fromkeys(CSV_COLUMNS, "")
    mean = sum(ratios, Fraction(0)) / len(ratios) if ratios else None
    top = max(ratios) if ratios else None
    row.update(
        run_id=f"agg:{key};max_ratio={format_number(top)}",
        algorithm=first.algorithm, n=str(first.n), D=format_number(first.D),
        alpha=format_number(first.alpha), epsilon=format_number(first.epsilon),
        policy=first.policy or "", ratio=format_number(mean),
        violations=str(sum(r.violations for r in results)),
    )
    return [row[c] for c in CSV_COLUMNS]


def to_csv(grid: Grid, results: list) -> tuple[str, int]:
    """CSV text (rows, then one aggregate row per cell) and the violation total."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    jobs = grid.jobs()
    violations = 0
    by_cell: dict[tuple, list[RunResult]] = {}
    for job, res in zip(jobs, results):
        if isinstance(res, RunResult):
            w.writerow(res.csv_row())
            violations += res.violations
            by_cell.setdefault(job[:5], []).append(res)
        else:
            w.writerow(_failed_row(res[0], job))
            violations += 1
    for cell in grid.cells():
        fam, algo, n, D, eps = cell
        key = run_id_for(fam, algo, n, D, eps, 0).rsplit(":", 1)[0]
        row = aggregate_row(key, by_cell.get(cell, []))
        if row is not None:
            w.writerow(row)
    return buf.getvalue(), violations


def sweep(grid: Grid, workers: int = 1) -> tuple[str, int]:
    return to_csv(grid, execute(grid, workers))
