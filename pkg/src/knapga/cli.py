"""Command line entry point: ``knapga {solve,bench,dump-eff,verify}``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import bench
from .ga import GaConfig, Operator
from .instance import Solution, generate_instance, is_feasible
from .io import ParseError, read_instance, read_instances
from .lp import LpStatus, dual_efficiencies, solve_lp_relaxation
from .oracle import MAX_ENUM_ITEMS, enumerate_optimum, lp_bound_check
from .ordering import dual_ordering
from .repair import heuristic_repair

OPERATOR_FLAGS = {"none": Operator.NONE, "swap": Operator.RG_SWAP, "shuffle": Operator.RG_SHUFFLE}


def _int(text: str) -> int:
    """Integer flag that also accepts ``1e6`` style values."""
    value = float(text)
    if value != int(value):
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    return int(value)


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_solve(args: argparse.Namespace) -> int:
    inst = read_instance(args.instance, args.index)
    cfg = GaConfig(
        population_size=args.pop_size,
        max_evaluations=args.max_evals,
        operator=OPERATOR_FLAGS[args.operator],
        decimals=args.decimals,
        seed=args.seed,
        target_value=args.target,
    )
    progress = None
    if args.trace:
        def progress(gen: int, best: int, improvements: int) -> None:
            print(f"gen {gen} best {best} improvements {improvements}", file=sys.stderr)
    record = bench.solve_record(inst, cfg, progress=progress)
    _write(bench.raw_csv([record]), args.out)
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    if args.plan:
        plan = bench.parse_plan(Path(args.plan).read_text())
        if args.jobs is not None:
            plan.jobs = args.jobs
    else:
        if not args.instances:
            raise ValueError("give instance files or --plan")
        plan = bench.ExperimentPlan(
            instances=args.instances,
            algorithms=args.algorithms.split(",") if args.algorithms else list(bench.ALGORITHMS),
            runs_per_instance=args.runs,
            max_evaluations=args.max_evals,
            base_seed=args.seed,
            population_size=args.pop_size,
            jobs=args.jobs or 1,
        )
    report, records = bench.run_experiment(plan)
    paths = bench.write_outputs(report, records, args.out)
    sys.stdout.write(bench.summary_markdown(report))
    print(f"wrote {', '.join(str(p) for p in paths.values())}", file=sys.stderr)
    return 0


def cmd_dump_eff(args: argparse.Namespace) -> int:
    rows = bench.dump_efficiencies_file(args.instance, args.decimals, args.index)
    _write(bench.efficiency_csv(rows, args.decimals), args.out)
    return 0


def _audit(inst, rng: np.random.Generator, repair_trials: int) -> list[str]:
    """Oracle checks on one small instance; returns failure messages."""
    failures = []
    opt, opt_bits = enumerate_optimum(inst)
    lp = solve_lp_relaxation(inst)
    if lp.status is not LpStatus.OPTIMAL:
        failures.append("LP relaxation failed")
    elif not lp_bound_check(inst, lp, opt):
        failures.append(f"LP objective {lp.primal_objective} below integer optimum {opt}")
    ordering = dual_ordering(dual_efficiencies(inst, lp)[0])
    for _ in range(repair_trials):
        sol = heuristic_repair(Solution.from_bits(inst, rng.integers(0, 2, inst.n)), ordering, inst)
        if not is_feasible(inst, sol):
            failures.append("repair produced an infeasible solution")
            break
        if sol.profit > opt:
            failures.append(f"repair profit {sol.profit} exceeds optimum {opt}")
            break
    print(f"{inst.name}: n={inst.n} m={inst.m} optimum={opt} lp={lp.primal_objective:.6f} "
          f"{'OK' if not failures else 'FAIL: ' + '; '.join(failures)}")
    return failures


def cmd_verify(args: argparse.Namespace) -> int:
    rng = np.random.default_rng(args.seed)
    instances = []
    for path in args.instances:
        instances.extend(read_instances(path))
    for k in range(args.random):
        instances.append(generate_instance(args.n, args.m, rng, name=f"random-{k:03d}"))
    failed = 0
    for inst in instances:
        if inst.n > MAX_ENUM_ITEMS:
            print(f"{inst.name}: skipped, n={inst.n} exceeds the enumeration limit {MAX_ENUM_ITEMS}")
            continue
        failed += bool(_audit(inst, rng, args.repair_trials))
    print(f"{len(instances) - failed}/{len(instances)} instances passed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="knapga", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run one GA variant on one instance")
    p.add_argument("instance")
    p.add_argument("--index", type=int, help="instance index within a multi-instance file")
    p.add_argument("--operator", choices=list(OPERATOR_FLAGS), default="none")
    p.add_argument("--decimals", type=int, default=1)
    p.add_argument("--pop-size", type=int, default=100)
    p.add_argument("--max-evals", type=_int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--target", type=int, help="stop once this objective value is reached")
    p.add_argument("--trace", action="store_true", help="print per-generation progress to stderr")
    p.add_argument("--out", help="write the raw record CSV here instead of stdout")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="compare algorithms over instances and seeds")
    p.add_argument("instances", nargs="*")
    p.add_argument("--plan", help="key = value plan file (overrides the other flags)")
    p.add_argument("--algorithms", help=f"comma separated subset of {','.join(bench.ALGORITHMS)}")
    p.add_argument("--runs", type=int, default=30)
    p.add_argument("--max-evals", type=_int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0, help="base seed; run k uses seed + k")
    p.add_argument("--pop-size", type=int, default=100)
    p.add_argument("--jobs", type=int, help="worker processes")
    p.add_argument("--out", default="bench-out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("dump-eff", help="write scaled efficiencies and groups as CSV")
    p.add_argument("instance")
    p.add_argument("--index", type=int)
    p.add_argument("--decimals", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_dump_eff)

    p = sub.add_parser("verify", help="audit LP and repair against exhaustive enumeration")
    p.add_argument("instances", nargs="*")
    p.add_argument("--random", type=int, default=0, help="also audit this many generated instances")
    p.add_argument("--n", type=int, default=15)
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repair-trials", type=int, default=100)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ParseError, ValueError, OSError) as exc:
        print(f"knapga {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
