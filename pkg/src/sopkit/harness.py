"""Experiment harness: replication management, CSV/JSON export, summaries.

Raw CSV schema: instance,algorithm,local_search,seed,best_cost,iterations,wall_ms
Trace CSV schema: iteration,best_cost,active_cost,temperature

Per-replication seeds are derived as seed + replication index. Replications
may run concurrently up to a jobs bound; records are ordered by (instance,
replication index) regardless of completion order.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict, replace
from pathlib import Path
from statistics import mean, stdev

from .driver import RunConfig, RunReport, run
from .instance import Instance, InstanceFormatError, load_instance, validate

RAW_FIELDS = ("instance", "algorithm", "local_search", "seed", "best_cost",
              "iterations", "wall_ms")


class InstanceError(ValueError):
    """An instance file could not be read, parsed, or validated."""


@dataclass
class ExperimentSpec:
    instances: list[str]  # file paths
    config: RunConfig
    runs: int = 1
    output_dir: str | None = None
    fmt: str = "csv"  # "csv" or "json"
    jobs: int = 1
    trace: bool = False

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("replication count must be at least 1")
        if self.fmt not in ("csv", "json"):
            raise ValueError(f"unknown export format {self.fmt!r}")


@dataclass
class RawRecord:
    instance: str
    algorithm: str
    local_search: str
    seed: int
    best_cost: int
    iterations: int
    wall_ms: float
    trace_path: str = ""  # not part of the raw CSV schema
    best_order: list[int] = field(default_factory=list)


@dataclass
class SummaryRow:
    instance: str
    algorithm: str  # label, e.g. "eacs+sop3"
    mean_cost: float
    std_cost: float
    best_cost: int
    mean_iterations: float
    mean_wall_ms: float
    runs: int
    single_sample: bool = False


def algorithm_label(algorithm: str, local_search: str) -> str:
    return algorithm if local_search == "none" else f"{algorithm}+{local_search}"


def summarize(records: list[RawRecord]) -> list[SummaryRow]:
    """Aggregate raw records by (instance, algorithm, local_search): mean,
    sample standard deviation (n-1 denominator; 0 with a flag for a single
    record), and the best (minimum) cost."""
    if not records:
        raise ValueError("no records to summarize")
    groups: dict[tuple[str, str, str], list[RawRecord]] = {}
    for rec in records:
        groups.setdefault((rec.instance, rec.algorithm, rec.local_search), []).append(rec)
    rows = []
    for (inst, algo, ls), recs in sorted(groups.items()):
        costs = [r.best_cost for r in recs]
        single = len(costs) < 2
        rows.append(SummaryRow(
            instance=inst,
            algorithm=algorithm_label(algo, ls),
            mean_cost=mean(costs),
            std_cost=0.0 if single else stdev(costs),
            best_cost=min(costs),
            mean_iterations=mean(r.iterations for r in recs),
            mean_wall_ms=mean(r.wall_ms for r in recs),
            runs=len(recs),
            single_sample=single,
        ))
    return rows


def _load_and_check(path: str) -> Instance:
    try:
        instance = load_instance(path)
    except OSError as exc:
        raise InstanceError(f"{path}: {exc}") from exc
    except InstanceFormatError as exc:
        raise InstanceError(f"{path}: {exc}") from exc
    report = validate(instance)
    if report.violations:
        raise InstanceError(f"{path}: {'; '.join(report.violations)}")
    return instance


_worker_cache: dict[str, Instance] = {}


def _execute(task: tuple[str, RunConfig]) -> RunReport:
    path, config = task
    instance = _worker_cache.get(path)
    if instance is None:
        instance = _load_and_check(path)
        _worker_cache[path] = instance
    return run(config, instance)


def run_experiment(spec: ExperimentSpec) -> tuple[list[SummaryRow], list[RawRecord]]:
    """Execute runs x instances replications, write raw records, traces, and
    summary rows to the output directory, and return both."""
    paths = list(spec.instances)
    if not paths:
        raise InstanceError("no instance files given")
    for path in paths:  # fail fast before spending compute
        _load_and_check(path)
    tasks = []
    for path in paths:
        for rep in range(spec.runs):
            tasks.append((path, replace(spec.config, seed=spec.config.seed + rep)))
    if spec.jobs > 1:
        with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
            reports = list(pool.map(_execute, tasks))
    else:
        reports = [_execute(task) for task in tasks]

    out_dir = Path(spec.output_dir) if spec.output_dir else None
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
    records = []
    for (path, config), report in zip(tasks, reports):
        trace_path = ""
        if spec.trace and out_dir is not None:
            trace_dir = out_dir / "traces"
            trace_dir.mkdir(exist_ok=True)
            name = f"{report.instance}_{report.algorithm}_{report.local_search}_{report.seed}.trace.csv"
            trace_path = str(trace_dir / name)
            write_trace(trace_path, report.trace)
        records.append(RawRecord(
            instance=report.instance, algorithm=report.algorithm,
            local_search=report.local_search, seed=report.seed,
            best_cost=report.best.cost, iterations=report.iterations,
            wall_ms=report.wall_time * 1000.0, trace_path=trace_path,
            best_order=list(report.best.order)))
    rows = summarize(records)
    if out_dir is not None:
        if spec.fmt == "csv":
            write_raw_csv(out_dir / "raw.csv", records)
            write_summary_csv(out_dir / "summary.csv", rows)
        else:
            (out_dir / "raw.json").write_text(json.dumps([asdict(r) for r in records], indent=1))
            (out_dir / "summary.json").write_text(json.dumps([asdict(r) for r in rows], indent=1))
    return rows, records


def write_trace(path, trace) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("iteration", "best_cost", "active_cost", "temperature"))
        writer.writerows(trace)


def write_raw_csv(path, records: list[RawRecord]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RAW_FIELDS)
        for r in records:
            writer.writerow((r.instance, r.algorithm, r.local_search, r.seed,
                             r.best_cost, r.iterations, repr(r.wall_ms)))


def read_raw_csv(path) -> list[RawRecord]:
    """Parse a raw CSV back into records (round-trips what was written)."""
    records = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != RAW_FIELDS:
            raise ValueError(f"unexpected raw CSV header in {path}")
        for row in reader:
            records.append(RawRecord(
                instance=row["instance"], algorithm=row["algorithm"],
                local_search=row["local_search"], seed=int(row["seed"]),
                best_cost=int(row["best_cost"]), iterations=int(row["iterations"]),
                wall_ms=float(row["wall_ms"])))
    return records


def write_summary_csv(path, rows: list[SummaryRow]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("instance", "algorithm", "mean_cost", "std_cost",
                         "best_cost", "mean_iterations", "mean_wall_ms",
                         "runs", "single_sample"))
        for r in rows:
            writer.writerow((r.instance, r.algorithm, r.mean_cost, r.std_cost,
                             r.best_cost, r.mean_iterations, r.mean_wall_ms,
                             r.runs, int(r.single_sample)))
