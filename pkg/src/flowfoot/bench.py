"""Timing footprint methods over generated suites and writing CSV reports."""

from __future__ import annotations

import csv
import dataclasses
import random
import statistics
import time
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import BadParams, MethodUnsupported, OracleInfeasible
from .footprint import Method, compute_footprint, verify_footprint
from .generate import KINDS, gen_cyclic_update, gen_list_update
from .serialize import Instance

CSV_COLUMNS = ("instance", "method", "footprint_size", "micros", "status")
SUITES = ("list-updates", "cyclic")
DEFAULT_REPS = 100


@dataclass(frozen=True)
class BenchRow:
    instance: str
    method: str
    footprint_size: int | None
    micros: int
    status: str  # ok | top | refused:<error> | verify-failed

    def as_csv(self) -> list:
        size = "" if self.footprint_size is None else self.footprint_size
        return [self.instance, self.method, size, self.micros, self.status]


def suite_instances(suite: str, count: int, seed: int) -> list:
    """``count`` instances of ``suite``, each seeded from ``(seed, index)``."""
    if count < 0:
        raise BadParams("count must be non-negative")
    out = []
    for i in range(count):
        rng = random.Random(f"{seed}:{i}")
        if suite == "list-updates":
            kind = KINDS[i % len(KINDS)]
            length = rng.randint(2, 8)
            inst = gen_list_update(kind, length, rng)
            out.append(dataclasses.replace(inst, label=f"{kind}-{length}-{i}"))
        elif suite == "cyclic":
            n = rng.randint(3, 6)
            inst = gen_cyclic_update(rng, n)
            out.append(dataclasses.replace(inst, label=f"ring-{n}-{i}"))
        else:
            raise BadParams(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    return out


def time_footprint(inst: Instance, method: Method, reps: int = DEFAULT_REPS):
    """Run ``reps`` times; return the result (or the refusal) and the median in µs."""
    samples = []
    result = None
    for _ in range(max(reps, 1)):
        t0 = time.perf_counter_ns()
        try:
            result = compute_footprint(inst.before, inst.after, method)
        except MethodUnsupported as e:
            samples.append(time.perf_counter_ns() - t0)
            return e, round(statistics.median(samples) / 1000)
        samples.append(time.perf_counter_ns() - t0)
    micros = round(statistics.median(samples) / 1000)
    return dataclasses.replace(result, micros=micros), micros


def run_bench(instances: Iterable[Instance], methods: Sequence[Method | str],
              reps: int = DEFAULT_REPS, verify: str | None = None) -> list:
    rows = []
    for inst in instances:
        for m in methods:
            m = Method(m)
            res, micros = time_footprint(inst, m, reps)
            if isinstance(res, MethodUnsupported):
                rows.append(BenchRow(inst.label, m.value, None, micros,
                                     f"refused:{type(res).__name__}"))
                continue
            if res.is_top:
                rows.append(BenchRow(inst.label, m.value, None, micros, "top"))
                continue
            status = "ok"
            if verify:
                try:
                    if not verify_footprint(inst.before, inst.after, res.footprint, mode=verify):
                        status = "verify-failed"
                except (OracleInfeasible, MethodUnsupported):
                    pass
            rows.append(BenchRow(inst.label, m.value, len(res.footprint), micros, status))
    return rows


def write_csv(rows: Iterable[BenchRow], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for r in rows:
            w.writerow(r.as_csv())


def totals(rows: Iterable[BenchRow]) -> dict:
    """Per method: summed median µs over rows that produced a result."""
    out: dict = {}
    for r in rows:
        if not r.status.startswith("refused"):
            out[r.method] = out.get(r.method, 0) + r.micros
    return out
