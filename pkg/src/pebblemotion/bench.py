"""Scaling benchmark and compiled-vs-interpreted kernel comparison."""

from __future__ import annotations

import csv
import time
from dataclasses import asdict, dataclass
from typing import IO, Callable, Iterable, Sequence

import numpy as np

from . import _kernels
from ._jit import JIT_ENABLED
from .decision import decide
from .generate import generate_instance
from .graph import ErrorCode, PebbleError

CSV_FIELDS = (
    "n",
    "m",
    "p",
    "rule",
    "feasible",
    "total_us",
    "phase_decompose_us",
    "phase_reduce_us",
    "phase_decide_us",
)


@dataclass(frozen=True)
class BenchRecord:
    n: int
    m: int
    p: int
    rule: str
    feasible: bool
    total_us: float
    phase_decompose_us: float
    phase_reduce_us: float
    phase_decide_us: float


def run_bench(
    sizes: Sequence[int],
    per_size: int,
    model: str = "random_connected",
    seed: int = 0,
    fill: float = 0.5,
    on_record: Callable[[BenchRecord], None] | None = None,
) -> list[BenchRecord]:
    """Decide ``per_size`` fresh instances at every size, in order.

    Instance ``j`` of size ``n`` uses seed ``seed + j`` and ``round(fill*n)``
    pebbles, so reruns see identical instances.
    """
    if per_size < 1:
        raise PebbleError(ErrorCode.BAD_PARAMS, "per-size must be at least 1")
    if not sizes or any(n < 1 for n in sizes):
        raise PebbleError(ErrorCode.BAD_PARAMS, "sizes must be positive")
    if not 0.0 <= fill <= 1.0:
        raise PebbleError(ErrorCode.BAD_PARAMS, "fill must lie in [0, 1]")
    # compile kernels outside the timed region
    warm = 7 if model == "theta0" else 64
    decide(generate_instance(warm, warm // 2, model, seed))
    out = []
    for n in sizes:
        for j in range(per_size):
            inst = generate_instance(n, int(round(fill * n)), model, seed + j)
            t0 = time.perf_counter()
            report = decide(inst)
            total = time.perf_counter() - t0
            rec = BenchRecord(
                n=n,
                m=inst.graph.m,
                p=inst.p,
                rule=report.rule.value,
                feasible=report.feasible,
                total_us=total * 1e6,
                phase_decompose_us=report.timings["decompose"] * 1e6,
                phase_reduce_us=report.timings["reduce"] * 1e6,
                phase_decide_us=report.timings["decide"] * 1e6,
            )
            out.append(rec)
            if on_record is not None:
                on_record(rec)
    return out


def loglog_slope(records: Iterable[BenchRecord]) -> float:
    """Least-squares slope of log(median total time) against log(|V|+|E|)."""
    by_n: dict[int, list[BenchRecord]] = {}
    for r in records:
        by_n.setdefault(r.n, []).append(r)
    if len(by_n) < 2:
        raise PebbleError(ErrorCode.BAD_PARAMS, "need at least two sizes for a slope")
    xs = [np.median([r.n + r.m for r in rs]) for rs in by_n.values()]
    ys = [np.median([r.total_us for r in rs]) for rs in by_n.values()]
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def median_by_size(records: Iterable[BenchRecord]) -> dict[int, float]:
    by_n: dict[int, list[float]] = {}
    for r in records:
        by_n.setdefault(r.n, []).append(r.total_us)
    return {n: float(np.median(v)) for n, v in by_n.items()}


def write_csv(records: Iterable[BenchRecord], fh: IO[str]) -> None:
    w = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
    w.writeheader()
    for r in records:
        w.writerow(asdict(r))


def _best_of(fn: Callable[[], object], repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def compare_kernels(n: int = 2000, seed: int = 0, repeat: int = 3) -> dict[str, tuple[float, float]]:
    """Seconds per call of each hot kernel, compiled vs interpreted.

    With the JIT disabled both columns run the interpreted code.
    """
    inst = generate_instance(n, n // 2, "random_connected", seed)
    g = inst.graph
    zero = np.zeros(1, dtype=np.int64)
    order, parent, _, _ = _kernels.bfs(g.indptr, g.indices, g.edge_ids, zero)
    tree = generate_instance(n, n // 2, "tree", seed)
    occ = tree.start.occupant
    cases = {
        "bfs": (_kernels.bfs, (g.indptr, g.indices, g.edge_ids, zero)),
        "lowlink": (_kernels.lowlink, (g.indptr, g.indices, g.edge_ids, g.m)),
        "pmt_to_ppt": (_kernels.pmt_to_ppt, (order, parent, inst.start.positions, inst.goal.positions)),
        "tree_class_labels": (
            _kernels.tree_class_labels,
            (tree.graph.indptr, tree.graph.indices, occ, tree.p),
        ),
    }
    out = {}
    for name, (fn, args) in cases.items():
        fn(*args)
        fast = _best_of(lambda: fn(*args), repeat)
        slow = _best_of(lambda: fn.py_func(*args), 1)
        out[name] = (fast, slow)
    return out


__all__ = [
    "BenchRecord",
    "CSV_FIELDS",
    "JIT_ENABLED",
    "compare_kernels",
    "loglog_slope",
    "median_by_size",
    "run_bench",
    "write_csv",
]
