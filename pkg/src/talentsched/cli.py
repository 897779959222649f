"""Command-line front end.

Subcommands: ``solve`` one instance, ``bench`` a sweep over many instances,
``gen`` a random instance, ``export-ilp`` the MILP text, ``oracle`` the
exhaustive minimum for small instances.  Exit codes: 0 success/optimal,
1 usage or input error, 2 time limit hit (incumbent still printed).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .ilp import export_milp
from .instance import Instance, InstanceFormatError, generate_instance, parse_instance, write_instance
from .solver import SolveConfig, SolveResult, brute_force, solve

ENV_CACHE_BITS = "TALENTSCHED_CACHE_BITS"

BENCH_FIELDS = [
    "instance",
    "n",
    "m",
    "cache_bits",
    "strategy",
    "preprocess",
    "rule1",
    "rule2",
    "lower",
    "status",
    "holding_cost",
    "total_cost",
    "subproblems",
    "seconds",
    "cache_hits",
    "cache_collisions",
    "cache_replacements",
]

SUMMARY_FIELDS = [
    "n",
    "m",
    "cache_bits",
    "strategy",
    "preprocess",
    "rule1",
    "rule2",
    "lower",
    "instances",
    "solved",
    "avg_seconds",
    "avg_subproblems",
]


def _read_instance(path: str) -> Instance:
    if path == "-":
        return parse_instance(sys.stdin.read(), name="stdin")
    text = Path(path).read_text(encoding="utf-8")
    return parse_instance(text, name=Path(path).stem)


def _default_cache_bits() -> int:
    raw = os.environ.get(ENV_CACHE_BITS)
    if raw is None:
        return 25
    try:
        bits = int(raw)
    except ValueError:
        print(f"{ENV_CACHE_BITS} must be an integer, got {raw!r}", file=sys.stderr)
        raise SystemExit(1)
    if not 0 <= bits <= 30:
        print(f"{ENV_CACHE_BITS} must be in 0..30, got {bits}", file=sys.stderr)
        raise SystemExit(1)
    return bits


def _check_cache_bits(bits: int) -> int:
    if not 0 <= bits <= 30:
        print(f"cache bits must be in 0..30, got {bits}", file=sys.stderr)
        raise SystemExit(1)
    return bits


def _config_from_args(args) -> SolveConfig:
    _check_cache_bits(args.cache_bits)
    return SolveConfig(
        cache_capacity=(1 << args.cache_bits) if args.cache_bits else 0,
        cache_strategy=args.cache_strategy,
        enable_preprocess=not args.no_preprocess,
        enable_rule1=not args.no_rule1,
        enable_rule2=not args.no_rule2,
        enable_lower=not args.no_lower,
        time_limit=args.time_limit,
        branch_order=args.branch_order,
    )


def result_to_json(
    inst: Instance,
    cfg: SolveConfig,
    result: SolveResult,
    include_elapsed: bool = True,
    include_trace: bool = False,
) -> dict:
    """Schema-stable JSON payload for one solve."""
    cap = cfg.cache_capacity
    cache_bits = "unbounded" if cap is None else (cap.bit_length() - 1 if cap else 0)
    out = {
        "instance": inst.name,
        "n": inst.num_scenes,
        "m": inst.num_actors,
        "status": result.status,
        "holding_cost": result.holding_cost,
        "total_cost": result.total_cost,
        "schedule": list(result.schedule.order),
        "subproblems": result.subproblems,
        "cache": {
            "bits": cache_bits,
            "strategy": cfg.cache_strategy,
            "probes": result.cache_stats.probes,
            "hits": result.cache_stats.hits,
            "misses": result.cache_stats.misses,
            "collisions": result.cache_stats.collisions,
            "replacements": result.cache_stats.replacements,
        },
        "config": {
            "preprocess": cfg.enable_preprocess,
            "rule1": cfg.enable_rule1,
            "rule2": cfg.enable_rule2,
            "lower": cfg.enable_lower,
            "branch_order": cfg.branch_order,
            "time_limit": cfg.time_limit,
        },
    }
    if include_elapsed:
        out["elapsed"] = result.elapsed
    if include_trace:
        out["trace"] = [[t.subproblems, t.holding_cost] for t in result.ub_trace]
    return out


def cmd_solve(args) -> int:
    cfg = _config_from_args(args)
    try:
        inst = _read_instance(args.instance)
    except (OSError, InstanceFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    result = solve(inst, cfg)
    if args.json:
        payload = result_to_json(inst, cfg, result, include_trace=args.trace)
        print(json.dumps(payload, indent=2))
    else:
        print(f"instance      {inst.name or '-'} ({inst.num_scenes} scenes, {inst.num_actors} actors)")
        print(f"status        {result.status}")
        print(f"holding cost  {result.holding_cost}")
        print(f"total cost    {result.total_cost}")
        print(f"schedule      {' '.join(str(s) for s in result.schedule.order)}")
        print(f"subproblems   {result.subproblems}")
        print(f"elapsed       {result.elapsed:.3f}s")
        st = result.cache_stats
        print(
            f"cache         hits={st.hits} misses={st.misses} "
            f"collisions={st.collisions} replacements={st.replacements}"
        )
    return 0 if result.status == "optimal" else 2


def _bench_combos(args) -> list[dict]:
    bit_values = [_check_cache_bits(int(b)) for b in str(args.cache_bits).split(",")]
    strategies = [s.strip() for s in args.strategies.split(",")]
    if args.ablate:
        feature_grid = [
            {"preprocess": p, "rule1": r1, "rule2": r2, "lower": lo}
            for p in (True, False)
            for r1 in (True, False)
            for r2 in (True, False)
            for lo in (True, False)
        ]
    else:
        feature_grid = [
            {"preprocess": True, "rule1": True, "rule2": True, "lower": True}
        ]
    combos = []
    for bits in bit_values:
        for strat in strategies:
            for feats in feature_grid:
                combos.append({"cache_bits": bits, "strategy": strat, **feats})
    return combos


def _bench_one(task):
    text, name, combo, time_limit = task
    inst = parse_instance(text, name=name)
    cfg = SolveConfig(
        cache_capacity=(1 << combo["cache_bits"]) if combo["cache_bits"] else 0,
        cache_strategy=combo["strategy"],
        enable_preprocess=combo["preprocess"],
        enable_rule1=combo["rule1"],
        enable_rule2=combo["rule2"],
        enable_lower=combo["lower"],
        time_limit=time_limit,
    )
    result = solve(inst, cfg)
    return {
        "instance": name,
        "n": inst.num_scenes,
        "m": inst.num_actors,
        "cache_bits": combo["cache_bits"],
        "strategy": combo["strategy"],
        "preprocess": int(combo["preprocess"]),
        "rule1": int(combo["rule1"]),
        "rule2": int(combo["rule2"]),
        "lower": int(combo["lower"]),
        "status": result.status,
        "holding_cost": result.holding_cost,
        "total_cost": result.total_cost,
        "subproblems": result.subproblems,
        "seconds": f"{result.elapsed:.6f}",
        "cache_hits": result.cache_stats.hits,
        "cache_collisions": result.cache_stats.collisions,
        "cache_replacements": result.cache_stats.replacements,
    }


def _collect_instance_files(paths: list[str]) -> list[Path]:
    files: list[Path] = []
    for raw in paths:
        p = Path(raw)
        if p.is_dir():
            files.extend(sorted(p.glob("*.txt")))
        else:
            files.append(p)
    return files


def cmd_bench(args) -> int:
    files = _collect_instance_files(args.paths)
    combos = _bench_combos(args)
    tasks = []
    skipped = 0
    for path in files:
        try:
            text = path.read_text(encoding="utf-8")
            parse_instance(text, name=path.stem)  # fail early, once per file
        except (OSError, InstanceFormatError) as exc:
            print(f"warning: skipping {path}: {exc}", file=sys.stderr)
            skipped += 1
            continue
        for combo in combos:
            tasks.append((text, path.stem, combo, args.time_limit))
    if not tasks:
        print("error: no solvable instances", file=sys.stderr)
        return 1

    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_bench_one, tasks, chunksize=1))
    else:
        rows = [_bench_one(t) for t in tasks]

    out = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=BENCH_FIELDS)
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if args.output:
            out.close()

    if args.summary:
        _write_summary(rows, args.summary)
    return 0


def _write_summary(rows: list[dict], path: str) -> None:
    groups: dict[tuple, list[dict]] = {}
    for row in rows:
        key = (
            row["n"],
            row["m"],
            row["cache_bits"],
            row["strategy"],
            row["preprocess"],
            row["rule1"],
            row["rule2"],
            row["lower"],
        )
        groups.setdefault(key, []).append(row)
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=SUMMARY_FIELDS)
        writer.writeheader()
        for key in sorted(groups, key=str):
            members = groups[key]
            solved = [r for r in members if r["status"] == "optimal"]
            writer.writerow(
                {
                    "n": key[0],
                    "m": key[1],
                    "cache_bits": key[2],
                    "strategy": key[3],
                    "preprocess": key[4],
                    "rule1": key[5],
                    "rule2": key[6],
                    "lower": key[7],
                    "instances": len(members),
                    "solved": len(solved),
                    "avg_seconds": (
                        f"{sum(float(r['seconds']) for r in solved) / len(solved):.6f}"
                        if solved
                        else ""
                    ),
                    "avg_subproblems": (
                        f"{sum(r['subproblems'] for r in solved) / len(solved):.1f}"
                        if solved
                        else ""
                    ),
                }
            )


def cmd_gen(args) -> int:
    try:
        inst = generate_instance(
            args.scenes,
            args.actors,
            args.seed,
            density=args.density,
            max_duration=args.max_duration,
            max_wage=args.max_wage,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = write_instance(inst)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_export_ilp(args) -> int:
    try:
        inst = _read_instance(args.instance)
    except (OSError, InstanceFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = export_milp(inst)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_oracle(args) -> int:
    try:
        inst = _read_instance(args.instance)
    except (OSError, InstanceFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if inst.num_scenes > 10:
        print("error: oracle refuses instances with more than 10 scenes", file=sys.stderr)
        return 1
    holding, sched = brute_force(inst)
    if args.json:
        print(json.dumps({"holding_cost": holding, "schedule": list(sched.order)}))
    else:
        print(f"holding cost  {holding}")
        print(f"schedule      {' '.join(str(s) for s in sched.order)}")
    return 0


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--cache-bits",
        type=int,
        default=_default_cache_bits(),
        help="state cache capacity exponent (capacity 2^K, 0 disables)",
    )
    p.add_argument(
        "--cache-strategy", choices=["latest", "greedy"], default="greedy"
    )
    p.add_argument("--no-preprocess", action="store_true")
    p.add_argument("--no-rule1", action="store_true")
    p.add_argument("--no-rule2", action="store_true")
    p.add_argument("--no-lower", action="store_true")
    p.add_argument("--time-limit", type=float, default=600.0, metavar="SECONDS")
    p.add_argument("--branch-order", choices=["id", "cheapest"], default="id")


class _Parser(argparse.ArgumentParser):
    # exit code 2 is reserved for the time limit; usage problems are code 1
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="talentsched",
        description="Exact talent scheduling: minimize actor wages over scene orders.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one instance to optimality")
    p.add_argument("instance", help="instance file path, or - for stdin")
    _add_solver_flags(p)
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--trace", action="store_true", help="include incumbent trace in JSON")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="CSV sweep over instances and parameters")
    p.add_argument("paths", nargs="+", help="instance files or directories of *.txt")
    p.add_argument("--cache-bits", default=str(_default_cache_bits()),
                   help="comma-separated capacity exponents, 0 disables (e.g. 0,10,25)")
    p.add_argument("--strategies", default="greedy",
                   help="comma-separated replacement strategies")
    p.add_argument("--ablate", action="store_true",
                   help="sweep all 16 on/off combinations of the search features")
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    p.add_argument("--time-limit", type=float, default=600.0, metavar="SECONDS")
    p.add_argument("--output", "-o", default=None, help="CSV output path (default stdout)")
    p.add_argument("--summary", default=None,
                   help="also write per-(n,m,parameters) averages to this CSV")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--scenes", "-n", type=int, required=True)
    p.add_argument("--actors", "-m", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--density", type=float, default=0.3)
    p.add_argument("--max-duration", type=int, default=5)
    p.add_argument("--max-wage", type=int, default=50)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("export-ilp", help="write the LP-format sequencing model")
    p.add_argument("instance")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_export_ilp)

    p = sub.add_parser("oracle", help="exhaustive minimum for small instances (n <= 10)")
    p.add_argument("instance")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_oracle)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
