"""Command-line entry point: ``recolor {gen,run,sweep,audit,oracle,plotdata}``."""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path

from .adversaries import FAMILIES, gen_path_doubling, generate
from .audit import TRACE_CHECKS, audit_trace
from .errors import RecolorError
from .instance import Instance, format_number, parse_fraction
from .oracles import bond_size, opt2_record
from .runner import ALGORITHMS, RunParams, run
from .sim import DEFAULT_POLICY, POLICIES
from .sweep import Grid, sweep


def default_seed() -> int:
    return int(os.environ.get("RECOLOR_SEED", "0"))


def _fractions(text: str) -> list[Fraction]:
    return [parse_fraction(x) for x in text.split(",") if x]


def _ints(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def _names(text: str) -> list[str]:
    return [x for x in text.split(",") if x]


def _phases(text: str | None):
    if text is None or text == "full":
        return text
    return int(text)


def _instance_from_args(args) -> Instance:
    if getattr(args, "instance", None):
        return Instance.load(args.instance)
    if args.family == "path_doubling" and args.phases is not None:
        phases = int(math.log2(args.n)) if args.phases == "full" else args.phases
        return gen_path_doubling(args.n, args.D, args.seed, phases)
    return generate(args.family, args.n, args.seed, args.D)


def _add_family_args(p: argparse.ArgumentParser, required: bool) -> None:
    p.add_argument("--family", choices=FAMILIES, required=required)
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--D", type=parse_fraction, default=Fraction(16))
    p.add_argument("--seed", type=int, default=None, help="defaults to $RECOLOR_SEED or 0")
    p.add_argument("--phases", type=_phases, default=None,
                   help="path doubling depth: an integer or 'full' (log2 n)")


def cmd_gen(args) -> int:
    inst = _instance_from_args(args)
    text = json.dumps(inst.to_json(), separators=(",", ":")) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_run(args) -> int:
    if not args.instance and not args.family:
        raise SystemExit("run: give --instance FILE or --family")
    inst = _instance_from_args(args)
    params = RunParams(args.algo, args.alpha, args.epsilon, args.beta, args.flip_policy,
                       seed=args.seed)
    trace = open(args.trace, "w") if args.trace else None
    try:
        result = run(inst, params, args.run_id, trace, keep_engine=bool(args.dump_moderation))
    finally:
        if trace:
            trace.close()
    if args.dump_moderation:
        mod = getattr(result.engine, "moderation", None)
        if mod is None and hasattr(result.engine, "levels"):
            dump = {str(lv.index): lv.moderation.dump() for lv in result.engine.levels}
        else:
            dump = mod.dump() if mod is not None else {}
        Path(args.dump_moderation).write_text(json.dumps(dump, sort_keys=True) + "\n")
    print(json.dumps(result.to_json(), sort_keys=True, indent=2))
    return 0 if result.violations == 0 else 1


def cmd_sweep(args) -> int:
    base = default_seed()
    seeds = _ints(args.seeds) if args.seeds else list(range(base, base + args.num_seeds))
    grid = Grid(
        families=_names(args.families), algorithms=_names(args.algos),
        ns=_ints(args.n), Ds=_fractions(args.D), epsilons=_fractions(args.epsilon),
        seeds=seeds, alpha=args.alpha, policy=args.flip_policy, phases=args.phases,
    )
    text, violations = sweep(grid, args.workers)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if violations == 0 else 1


def cmd_audit(args) -> int:
    records = [json.loads(line) for line in Path(args.trace).read_text().splitlines() if line]
    report = audit_trace(records, _names(args.checks))
    print(json.dumps(report, sort_keys=True, indent=2))
    return 0


def cmd_oracle(args) -> int:
    inst = Instance.load(args.instance)
    if inst.edges is None:
        raise SystemExit("oracle: adaptive instances have no fixed edge list")
    cps = _ints(args.checkpoints) if args.checkpoints else [len(inst.edges)]
    rec = opt2_record(inst.initial_colors, inst.edges, cps)
    beta, src = bond_size(inst.n, inst.edges, args.cap, inst.beta_hint)
    print(json.dumps({"opt2": {str(k): v for k, v in rec.values.items()},
                      "beta": beta, "beta_source": src}, sort_keys=True))
    return 0


def cmd_plotdata(args) -> int:
    """Mean ratio per (algorithm, n) series against log2 D, epsilon or n."""
    with open(args.csv, newline="") as fh:
        rows = [r for r in csv.DictReader(fh) if not r["run_id"].startswith("agg:")]
    series: dict[tuple, dict[str, list[Fraction]]] = {}
    for r in rows:
        if not r["ratio"]:
            continue
        if args.x == "logD":
            lg = math.log2(parse_fraction(r["D"]))
            x = str(int(lg)) if lg.is_integer() else f"{lg:.6f}"
            key = (r["algorithm"], r["n"], r["epsilon"])
        elif args.x == "epsilon":
            x, key = r["epsilon"], (r["algorithm"], r["n"], r["D"])
        else:
            x, key = r["n"], (r["algorithm"], r["D"], r["epsilon"])
        series.setdefault(key, {}).setdefault(x, []).append(parse_fraction(r["ratio"]))
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["series", "x", "y"])
    for key in sorted(series):
        for x in sorted(series[key], key=lambda s: float(s)):
            ys = series[key][x]
            out.writerow(["/".join(k for k in key if k), x, format_number(sum(ys) / len(ys))])
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="recolor", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write an instance file")
    _add_family_args(p, required=True)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("run", help="run one algorithm on one instance")
    p.add_argument("--instance")
    _add_family_args(p, required=False)
    p.add_argument("--algo", choices=ALGORITHMS, default="B")
    p.add_argument("--alpha", type=parse_fraction, default=Fraction(1, 2))
    p.add_argument("--epsilon", type=parse_fraction, default=Fraction(1, 4))
    p.add_argument("--beta", type=int)
    p.add_argument("--flip-policy", choices=sorted(POLICIES), default=DEFAULT_POLICY)
    p.add_argument("--trace", help="write a JSONL step trace here")
    p.add_argument("--dump-moderation", help="write the sim/excess split and witness sets here")
    p.add_argument("--run-id", default="run")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="grid of runs to CSV")
    p.add_argument("--families", default="path_doubling")
    p.add_argument("--algos", default="B")
    p.add_argument("--n", default="256")
    p.add_argument("--D", default="16")
    p.add_argument("--epsilon", default="1/4")
    p.add_argument("--seeds", help="comma list or ranges, e.g. 0-19")
    p.add_argument("--num-seeds", type=int, default=5)
    p.add_argument("--alpha", type=parse_fraction, default=Fraction(1, 2))
    p.add_argument("--flip-policy", choices=sorted(POLICIES), default=DEFAULT_POLICY)
    p.add_argument("--phases", type=_phases, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("audit", help="check a run trace")
    p.add_argument("--trace", required=True)
    p.add_argument("--checks", default=",".join(TRACE_CHECKS))
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("oracle", help="OPT2 per checkpoint and the largest bond")
    p.add_argument("--instance", required=True)
    p.add_argument("--checkpoints", help="comma list of prefix lengths")
    p.add_argument("--cap", type=int, default=16)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("plotdata", help="reshape a sweep CSV into (x, mean ratio) series")
    p.add_argument("--csv", required=True)
    p.add_argument("--x", choices=("logD", "epsilon", "n"), default="logD")
    p.set_defaults(func=cmd_plotdata)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "seed", 0) is None:
        args.seed = default_seed()
    try:
        return args.func(args)
    except RecolorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
