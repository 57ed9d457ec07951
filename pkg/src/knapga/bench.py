"""Experiment orchestration, gap/time reports and efficiency dumps.

Gaps are percentages: ``100 * (best_known - found) / best_known``.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from .ga import GaConfig, Operator, run, warm_up
from .instance import Instance
from .io import read_instance, read_instances
from .lp import dual_efficiencies
from .ordering import dual_ordering, get_efficiency_groups, round_levels

ALGORITHMS: dict[str, tuple[Operator, int]] = {
    "CBGA": (Operator.NONE, 1),
    "Sw_d1": (Operator.RG_SWAP, 1),
    "Sw_d2": (Operator.RG_SWAP, 2),
    "Sh_d1": (Operator.RG_SHUFFLE, 1),
    "Sh_d2": (Operator.RG_SHUFFLE, 2),
}

RAW_COLUMNS = [
    "instance", "algorithm", "seed", "best_value", "gap", "evaluations",
    "generations", "randomizations", "seconds", "stop_reason", "weight_source",
]


def algorithm_name(operator: Operator, decimals: int) -> str:
    for name, (op, d) in ALGORITHMS.items():
        if op is Operator(operator) and (op is Operator.NONE or d == decimals):
            return name
    return f"{Operator(operator).value}_d{decimals}"


def gap_percent(best_known: int | None, found: int) -> float | None:
    if not best_known:
        return None
    return 100.0 * (best_known - found) / best_known


def _fmt_gap(gap: float | None) -> str:
    return "n/a" if gap is None else f"{gap:.6f}"


@dataclass
class ExperimentPlan:
    instances: list[str]
    algorithms: list[str] = field(default_factory=lambda: list(ALGORITHMS))
    runs_per_instance: int = 30
    max_evaluations: int = 1_000_000
    base_seed: int = 0
    population_size: int = 100
    best_known_overrides: dict[str, int] = field(default_factory=dict)
    jobs: int = 1

    def __post_init__(self) -> None:
        if self.runs_per_instance < 1:
            raise ValueError("runs_per_instance must be >= 1")
        if not self.algorithms:
            raise ValueError("at least one algorithm is required")
        unknown = [a for a in self.algorithms if a not in ALGORITHMS]
        if unknown:
            raise ValueError(f"unknown algorithm(s) {unknown}; choose from {list(ALGORITHMS)}")


def parse_plan(text: str) -> ExperimentPlan:
    """Plan from ``key = value`` lines; ``#`` starts a comment.

    Keys: ``instances`` and ``algorithms`` (comma separated), ``runs``,
    ``max_evaluations``, ``base_seed``, ``population_size``, ``jobs`` and
    ``best_known.<instance name>``.
    """
    kwargs: dict = {}
    overrides: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"plan line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key == "instances":
            kwargs["instances"] = [v.strip() for v in value.split(",") if v.strip()]
        elif key == "algorithms":
            kwargs["algorithms"] = [v.strip() for v in value.split(",") if v.strip()]
        elif key in ("runs", "runs_per_instance"):
            kwargs["runs_per_instance"] = int(value)
        elif key in ("max_evaluations", "base_seed", "population_size", "jobs"):
            kwargs[key] = int(float(value)) if key == "max_evaluations" else int(value)
        elif key.startswith("best_known."):
            overrides[key[len("best_known."):]] = int(value)
        else:
            raise ValueError(f"plan line {lineno}: unknown key {key!r}")
    if "instances" not in kwargs:
        raise ValueError("plan has no instances")
    return ExperimentPlan(best_known_overrides=overrides, **kwargs)


@dataclass
class RunRecord:
    instance: str
    algorithm: str
    seed: int
    best_value: int
    gap: float | None
    evaluations: int
    generations: int
    randomizations: int
    seconds: float
    stop_reason: str
    weight_source: str

    def sort_key(self) -> tuple:
        return (self.instance, self.algorithm, self.seed)

    def row(self) -> list[str]:
        return [
            self.instance, self.algorithm, str(self.seed), str(self.best_value),
            _fmt_gap(self.gap), str(self.evaluations), str(self.generations),
            str(self.randomizations), f"{self.seconds:.4f}", self.stop_reason,
            self.weight_source,
        ]


def solve_record(inst: Instance, cfg: GaConfig, algorithm: str | None = None, progress=None) -> RunRecord:
    stats = run(inst, cfg, progress)
    return RunRecord(
        instance=inst.name,
        algorithm=algorithm or algorithm_name(cfg.operator, cfg.decimals),
        seed=cfg.seed,
        best_value=stats.best_value,
        gap=gap_percent(inst.best_known, stats.best_value),
        evaluations=stats.evaluations,
        generations=stats.generations,
        randomizations=stats.randomizations,
        seconds=stats.wall_time,
        stop_reason=stats.stop_reason.value,
        weight_source=stats.weight_source.value,
    )


def write_raw_csv(records: Iterable[RunRecord], out) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(RAW_COLUMNS)
    for rec in records:
        writer.writerow(rec.row())


def raw_csv(records: Iterable[RunRecord]) -> str:
    buf = io.StringIO()
    write_raw_csv(records, buf)
    return buf.getvalue()


def read_raw_csv(text: str) -> list[RunRecord]:
    records = []
    for row in csv.DictReader(io.StringIO(text)):
        records.append(RunRecord(
            instance=row["instance"],
            algorithm=row["algorithm"],
            seed=int(row["seed"]),
            best_value=int(row["best_value"]),
            gap=None if row["gap"] == "n/a" else float(row["gap"]),
            evaluations=int(row["evaluations"]),
            generations=int(row["generations"]),
            randomizations=int(row["randomizations"]),
            seconds=float(row["seconds"]),
            stop_reason=row["stop_reason"],
            weight_source=row["weight_source"],
        ))
    return records


@dataclass
class AlgorithmSummary:
    mean_gap: float | None
    star: bool
    mean_time: float
    mean_evaluations: float


@dataclass
class ReportRow:
    instance: str
    best_known: int | None
    results: dict[str, AlgorithmSummary]


@dataclass
class Report:
    algorithms: list[str]
    rows: list[ReportRow]
    quality_wins: dict[str, int]
    time_wins: dict[str, int]


def _run_task(task: tuple[Instance, str, int, int, int, int | None]) -> RunRecord:
    inst, algorithm, seed, pop_size, max_evals, target = task
    op, d = ALGORITHMS[algorithm]
    cfg = GaConfig(
        population_size=pop_size, max_evaluations=max_evals, operator=op,
        decimals=d, seed=seed, target_value=target,
    )
    return solve_record(inst, cfg, algorithm)


def run_experiment(plan: ExperimentPlan) -> tuple[Report, list[RunRecord]]:
    """Run every instance x algorithm x seed; each run stops at the best known value or the budget.

    Run ``k`` uses seed ``base_seed + k`` for every algorithm.  Records are
    sorted by (instance, algorithm, seed), so the worker count never changes
    the output.
    """
    instances: list[Instance] = []
    for path in plan.instances:
        instances.extend(read_instances(path))
    tasks = []
    best_known: dict[str, int | None] = {}
    for inst in instances:
        bk = plan.best_known_overrides.get(inst.name, inst.best_known)
        if bk != inst.best_known:
            inst = Instance(inst.profits, inst.weights, inst.capacities, name=inst.name, best_known=bk)
        best_known[inst.name] = bk
        for algorithm in plan.algorithms:
            for k in range(plan.runs_per_instance):
                tasks.append((inst, algorithm, plan.base_seed + k,
                              plan.population_size, plan.max_evaluations, bk))
    if plan.jobs > 1:
        with ProcessPoolExecutor(max_workers=plan.jobs, initializer=warm_up) as pool:
            records = list(pool.map(_run_task, tasks))
    else:
        warm_up()
        records = [_run_task(t) for t in tasks]
    records.sort(key=RunRecord.sort_key)
    order = [inst.name for inst in instances]
    return aggregate(records, plan.algorithms, best_known, order), records


def aggregate(
    records: list[RunRecord],
    algorithms: list[str],
    best_known: dict[str, int | None],
    instance_order: list[str] | None = None,
) -> Report:
    """Summary rows and win tallies; a pure function of the raw records."""
    names = instance_order or sorted({r.instance for r in records})
    quality_wins = dict.fromkeys(algorithms, 0)
    time_wins = dict.fromkeys(algorithms, 0)
    rows = []
    for name in names:
        bk = best_known.get(name)
        results: dict[str, AlgorithmSummary] = {}
        for alg in algorithms:
            recs = [r for r in records if r.instance == name and r.algorithm == alg]
            if not recs:
                continue
            gaps = [r.gap for r in recs]
            results[alg] = AlgorithmSummary(
                mean_gap=None if bk is None or any(g is None for g in gaps) else float(np.mean(gaps)),
                star=bk is not None and any(r.best_value >= bk for r in recs),
                mean_time=float(np.mean([r.seconds for r in recs])),
                mean_evaluations=float(np.mean([r.evaluations for r in recs])),
            )
        rows.append(ReportRow(name, bk, results))
        if not results:
            continue
        known = {a: s.mean_gap for a, s in results.items() if s.mean_gap is not None}
        if known:
            best_gap = min(known.values())
            for a, g in known.items():
                if math.isclose(g, best_gap, rel_tol=0.0, abs_tol=1e-12):
                    quality_wins[a] += 1
        fastest = min(s.mean_time for s in results.values())
        for a, s in results.items():
            if s.mean_time == fastest:
                time_wins[a] += 1
    return Report(algorithms, rows, quality_wins, time_wins)


def summary_csv(report: Report) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["instance", "best_known"]
    for alg in report.algorithms:
        header += [f"{alg}_gap_pct", f"{alg}_star", f"{alg}_time_s", f"{alg}_evaluations"]
    writer.writerow(header)
    for row in report.rows:
        out = [row.instance, row.best_known if row.best_known is not None else "n/a"]
        for alg in report.algorithms:
            s = row.results.get(alg)
            if s is None:
                out += ["", "", "", ""]
            else:
                out += [_fmt_gap(s.mean_gap), int(s.star), f"{s.mean_time:.4f}", f"{s.mean_evaluations:.1f}"]
        writer.writerow(out)
    wins = ["wins", ""]
    for alg in report.algorithms:
        wins += [report.quality_wins[alg], "", report.time_wins[alg], ""]
    writer.writerow(wins)
    return buf.getvalue()


def summary_markdown(report: Report) -> str:
    """Aligned table: Instance | Best known | gap per algorithm | time per algorithm."""
    header = ["Instance", "Best known"]
    header += [f"Gap {a}" for a in report.algorithms]
    header += [f"Time {a}" for a in report.algorithms]
    body = []
    for row in report.rows:
        cells = [row.instance, str(row.best_known) if row.best_known is not None else "n/a"]
        for alg in report.algorithms:
            s = row.results.get(alg)
            if s is None or s.mean_gap is None:
                cells.append("n/a")
            else:
                cells.append(f"{s.mean_gap:.3f}{'*' if s.star else ''}")
        for alg in report.algorithms:
            s = row.results.get(alg)
            cells.append("n/a" if s is None else f"{s.mean_time:.2f}")
        body.append(cells)
    body.append(
        ["Wins", ""]
        + [str(report.quality_wins[a]) for a in report.algorithms]
        + [str(report.time_wins[a]) for a in report.algorithms]
    )
    widths = [max(len(r[c]) for r in [header] + body) for c in range(len(header))]

    def fmt(cells: list[str]) -> str:
        return "| " + " | ".join(c.ljust(w) for c, w in zip(cells, widths)) + " |"

    lines = [fmt(header), "|" + "|".join("-" * (w + 2) for w in widths) + "|"]
    lines += [fmt(r) for r in body]
    lines.append("")
    lines.append("Gap = 100 * (best known - found) / best known, averaged over runs; "
                 "* = best known reached in at least one run. Times in seconds.")
    return "\n".join(lines) + "\n"


def write_outputs(report: Report, records: list[RunRecord], out_dir: str | Path) -> dict[str, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {"raw": out / "raw.csv", "summary": out / "summary.csv", "markdown": out / "summary.md"}
    paths["raw"].write_text(raw_csv(records))
    paths["summary"].write_text(summary_csv(report))
    paths["markdown"].write_text(summary_markdown(report))
    return paths


DUMP_COLUMNS = ["item_rank", "scaled_efficiency", "rounded_efficiency", "group_id"]


def dump_efficiencies(inst: Instance, d: int | None = None) -> list[tuple]:
    """Scaled dual efficiencies in non-decreasing order, with groups at ``d`` decimals.

    ``group_id`` numbers groups from the most efficient one (0) and is
    ``None`` for items outside any group or when ``d`` is not given.
    """
    eff, _ = dual_efficiencies(inst)
    ordering = dual_ordering(eff)
    scaled = eff.scaled[ordering.perm]
    group_of = [None] * inst.n
    rounded: list[float | None] = [None] * inst.n
    if d is not None:
        groups = get_efficiency_groups(ordering, d)
        for gid, (lo, hi) in enumerate(groups.groups):
            for pos in range(lo, hi):
                group_of[pos] = gid
        levels = round_levels(scaled, d)
        rounded = [int(v) / 10**d for v in levels]
    rows = []
    for rank, pos in enumerate(range(inst.n - 1, -1, -1)):
        rows.append((rank, float(scaled[pos]), rounded[pos], group_of[pos]))
    return rows


def efficiency_csv(rows: list[tuple], d: int | None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(DUMP_COLUMNS)
    for rank, scaled, rounded, gid in rows:
        writer.writerow([
            rank,
            f"{scaled:.6f}",
            "" if rounded is None else f"{rounded:.{d}f}",
            "" if gid is None else gid,
        ])
    return buf.getvalue()


def dump_efficiencies_file(path: str | Path, d: int | None = None, index: int | None = None) -> list[tuple]:
    return dump_efficiencies(read_instance(path, index), d)
