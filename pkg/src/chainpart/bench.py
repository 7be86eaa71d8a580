"""Benchmark harness: named strategies, timing, performance profiles.

A *strategy* is a named end-to-end partitioning recipe (objective +
algorithm + any derived inputs) so that suites, the command line, and
profiles all speak the same vocabulary:

========================  ==================================================
``balance-*``             bottleneck partitioners (chains, work, conn,
                          nonsym-initial, nonsym, mono)
``split-*``               total-cost fixed-K partitioners (chains, conn,
                          edge, hyper) plus the ``split-equally`` baseline
``block-conn/-equally``   cache blocking with a row cap
``assign-any/-local/-greedy``  column assignment on top of a row partition
========================  ==================================================

Timing is warm-up-then-minimum with sample/time caps, normalized against
the same treatment of a sparse matrix-vector product on the same matrix.
"""

from __future__ import annotations

import csv
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .assign import assign_any_incident, assign_greedy_conn, assign_local
from .bottleneck import bisect_partition, lazy_bisect_partition, nicol_partition
from .costs import (
    CostCoefficients,
    CostOracle,
    bounds_for,
    chains_on_chains,
    connectivity,
    edge_cut_partwise,
    hyperedge_cut_partwise,
    mono_symmetric,
    nonsym,
    nonsym_initial,
    partition_costs_direct,
    with_threshold,
    work,
)
from .matrix import load_matrix_market, spmv
from .partition import SplitPartition
from .total import block_equally, block_partition, partition_total

__all__ = [
    "StrategyResult",
    "objective_for",
    "run_strategy",
    "time_call",
    "bench_suite",
    "performance_profile",
    "write_bench_csv",
    "write_profile_csv",
    "BENCH_COLUMNS",
    "PROFILE_COLUMNS",
]

_BOTTLENECK = {
    "balance-chains": lambda A, coef: chains_on_chains(),
    "balance-work": lambda A, coef: work(coef),
    "balance-conn": lambda A, coef: connectivity(),
    "balance-nonsym-initial": lambda A, coef: nonsym_initial(coef),
    "balance-nonsym": lambda A, coef: nonsym(coef),
    "balance-mono": lambda A, coef: mono_symmetric(A, coef),
}

_TOTAL = {
    "split-chains": lambda A, coef: chains_on_chains(),
    "split-conn": lambda A, coef: connectivity(),
    "split-edge": lambda A, coef: edge_cut_partwise(),
    "split-hyper": lambda A, coef: hyperedge_cut_partwise(),
}

_ASSIGN = {
    "assign-any": lambda A, part, seed: assign_any_incident(A, part),
    "assign-local": lambda A, part, seed: assign_local(A, part, seed=seed),
    "assign-greedy": lambda A, part, seed: assign_greedy_conn(A, part, seed=seed),
}


def objective_for(name: str, A, coef: CostCoefficients | None = None):
    """The cost objective a strategy name optimizes or is judged by."""
    coef = coef or CostCoefficients()
    if name in _BOTTLENECK:
        return _BOTTLENECK[name](A, coef)
    if name in _TOTAL:
        return _TOTAL[name](A, coef)
    if name in ("split-equally", "block-conn", "block-equally"):
        return connectivity()
    raise ValueError(f"no objective known for strategy {name!r}")


@dataclass
class StrategyResult:
    """Partition plus its achieved cost.

    ``adjusted`` restates the cost in the conventional metric where one
    exists (edge cut, hyperedge cut, lambda-minus-one); otherwise it
    equals ``cost``.  ``probes`` counts feasibility probes for the
    search-based partitioners.
    """

    partition: object
    cost: float
    adjusted: float
    probes: int = 0


def _nonempty_columns(A) -> int:
    return int(np.count_nonzero(np.bincount(A.col_idx, minlength=A.ncols)))


def _bottleneck_over(A, obj, part: SplitPartition, col_part=None) -> float:
    return float(max(partition_costs_direct(A, obj, part.splits,
                                            col_part=col_part)))


def run_strategy(A, name, *, K=None, alg=None, coef=None, eps=0.1,
                 w_max=None, balance=None, block_size=None, seed=0,
                 row_partition=None, col_part=None) -> StrategyResult:
    """Run one named strategy on one matrix.

    ``balance`` is the relative slack of the per-part nonzero cap for the
    total partitioners (cap = (1 + balance) * nnz / K); an explicit
    ``w_max`` wins over it.  ``row_partition`` feeds the assignment
    strategies (derived from ``balance-conn`` when absent) and
    ``col_part`` fixes the column owners for the nonsym objective.
    Incompatible strategy/algorithm pairs raise ``ValueError``.
    """
    coef = coef or CostCoefficients()
    m = A.nrows

    if name in _BOTTLENECK:
        if K is None:
            raise ValueError(f"{name} needs -K")
        obj = _BOTTLENECK[name](A, coef)
        if w_max is not None:
            obj = with_threshold(obj, w_max)
        if not obj.uniform and col_part is None:
            raise ValueError(f"{name} needs a fixed column assignment")
        alg = alg or "exact"
        oracle = CostOracle(A, obj, col_part=col_part)
        if alg == "exact":
            res = nicol_partition(oracle, m, K)
        elif alg == "approx":
            res = bisect_partition(oracle, m, K,
                                   bounds_for(obj, A, K, col_part=col_part), eps)
        elif alg == "lazy":
            res = lazy_bisect_partition(A, obj, K, eps=eps, col_part=col_part)
        else:
            raise ValueError(f"algorithm {alg!r} does not apply to {name}")
        return StrategyResult(res.partition, float(res.cost), float(res.cost),
                              probes=int(res.probes))

    if name in _TOTAL:
        if K is None:
            raise ValueError(f"{name} needs -K")
        obj = _TOTAL[name](A, coef)
        cap = math.inf
        if balance is not None:
            cap = (1.0 + balance) * A.nnz / K
        if w_max is not None:
            cap = w_max
        alg = alg or "dynamic"
        res = partition_total(A, obj, K, algorithm=alg, w_max=cap)
        return StrategyResult(res.partition, res.total,
                              _adjusted_total(A, name, res.total))

    if name == "split-equally":
        if K is None:
            raise ValueError(f"{name} needs -K")
        splits = [round(k * m / K) for k in range(K + 1)]
        part = SplitPartition.from_splits(m, splits)
        total = float(sum(partition_costs_direct(A, connectivity(), splits)))
        return StrategyResult(part, total, _adjusted_total(A, "split-conn", total))

    if name in ("block-conn", "block-equally"):
        if block_size is None:
            raise ValueError(f"{name} needs --block-size")
        res = (block_partition if name == "block-conn" else block_equally)(
            A, block_size)
        return StrategyResult(res.partition, res.total,
                              _adjusted_total(A, "split-conn", res.total))

    if name in _ASSIGN:
        if row_partition is None:
            if K is None:
                raise ValueError(f"{name} needs a row partition or -K")
            row_partition = nicol_partition(
                CostOracle(A, connectivity()), m, K).partition
        phi = _ASSIGN[name](A, row_partition, seed)
        cost = _bottleneck_over(A, nonsym(coef), row_partition,
                                col_part=phi.assign)
        return StrategyResult(phi, float(cost), float(cost))

    raise ValueError(f"unknown strategy {name!r}")


def _adjusted_total(A, name, total) -> float:
    """Conventional-metric restatement of a total-cost result."""
    if name in ("split-conn", "block-conn", "block-equally"):
        return float(total - _nonempty_columns(A))  # lambda-minus-one
    if name == "split-edge":
        return float(total + A.nnz)  # ordered-pair edge cut
    if name == "split-hyper":
        return float(total + _nonempty_columns(A))  # hyperedge cut
    return float(total)


# ---------------------------------------------------------------------------
# timing


def time_call(fn, max_samples=10000, max_seconds=5.0, target_seconds=0.05):
    """Minimum wall time of ``fn()`` after one warm-up call.

    Samples until the time budget is spent: at least 3 samples and
    ``target_seconds`` of accumulated time, capped at ``max_samples``
    samples or ``max_seconds`` overall.
    """
    fn()
    best = math.inf
    spent = 0.0
    n = 0
    while True:
        t0 = time.perf_counter()
        fn()
        dt = time.perf_counter() - t0
        best = min(best, dt)
        spent += dt
        n += 1
        if n >= max_samples or spent >= max_seconds:
            break
        if n >= 3 and spent >= target_seconds:
            break
    return max(best, 1e-9)


# ---------------------------------------------------------------------------
# suite runner

BENCH_COLUMNS = ["matrix", "m", "n", "nnz", "strategy", "K", "eps", "trials",
                 "cost", "cost_adjusted", "probes", "seconds", "spmv_seconds",
                 "spmv_units"]
PROFILE_COLUMNS = ["strategy", "deviation", "fraction"]

PROFILE_DEVIATIONS = (0.0, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0)


def bench_suite(suite_dir, strategies, k_grid, *, trials=1, seed=0,
                coef=None, eps=0.1, balance=None, w_max=None,
                block_size=None, log=None):
    """Run every (matrix, strategy, K) cell of a suite directory.

    Quality is averaged over ``trials`` seeded runs; wall time is the
    warm-up-then-minimum of a single run, normalized by the SpMV time of
    the same matrix.  Failing cells are logged and skipped.  Quality
    cells may run on a thread pool capped by ``CHAINPART_THREADS``;
    timing always runs serially.  Returns ``(records, profile_rows)``.
    """
    log = log or (lambda msg: print(msg, file=sys.stderr))
    paths = sorted(Path(suite_dir).glob("*.mtx"))
    if not paths:
        raise FileNotFoundError(f"no .mtx files in {suite_dir}")
    workers = max(1, int(os.environ.get("CHAINPART_THREADS", "1")))

    cells = []
    for path in paths:
        try:
            A = load_matrix_market(path)
        except Exception as exc:  # noqa: BLE001 - logged, run continues
            log(f"bench: skipping {path.name}: {exc}")
            continue
        x = np.ones(A.ncols)
        spmv_sec = time_call(lambda A=A, x=x: spmv(A, x))
        for strat in strategies:
            for K in k_grid:
                cells.append((path.name, A, strat, int(K), spmv_sec))

    def quality(cell):
        name, A, strat, K, _ = cell
        costs, adjusted, probes = [], [], 0
        for t in range(trials):
            r = run_strategy(A, strat, K=K, coef=coef, eps=eps,
                             balance=balance, w_max=w_max,
                             block_size=block_size,
                             seed=seed * 1_000_003 + t)
            costs.append(r.cost)
            adjusted.append(r.adjusted)
            probes = r.probes
        return float(np.mean(costs)), float(np.mean(adjusted)), probes

    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_guarded(quality, log), cells))

    records = []
    for cell, got in zip(cells, results):
        if got is None:
            continue
        name, A, strat, K, spmv_sec = cell
        cost, adjusted, probes = got
        sec = time_call(lambda: run_strategy(
            A, strat, K=K, coef=coef, eps=eps, balance=balance,
            w_max=w_max, block_size=block_size, seed=seed * 1_000_003))
        records.append({
            "matrix": name, "m": A.nrows, "n": A.ncols, "nnz": A.nnz,
            "strategy": strat, "K": K, "eps": eps, "trials": trials,
            "cost": cost, "cost_adjusted": adjusted, "probes": probes,
            "seconds": sec, "spmv_seconds": spmv_sec,
            "spmv_units": sec / spmv_sec,
        })
    return records, performance_profile(records)


def _guarded(fn, log):
    def wrapped(cell):
        try:
            return fn(cell)
        except Exception as exc:  # noqa: BLE001 - logged, run continues
            log(f"bench: {cell[0]} / {cell[2]} K={cell[3]} failed: {exc}")
            return None
    return wrapped


def performance_profile(records, deviations=PROFILE_DEVIATIONS):
    """Fraction of (matrix, K) cells each strategy solves within a
    relative deviation of the per-cell best cost."""
    best = {}
    for r in records:
        key = (r["matrix"], r["K"])
        best[key] = min(best.get(key, math.inf), r["cost"])
    strategies = sorted({r["strategy"] for r in records})
    rows = []
    for strat in strategies:
        mine = [r for r in records if r["strategy"] == strat]
        for dev in deviations:
            hit = sum(
                r["cost"] <= best[(r["matrix"], r["K"])]
                + dev * abs(best[(r["matrix"], r["K"])])
                for r in mine)
            rows.append({"strategy": strat, "deviation": dev,
                         "fraction": hit / len(mine) if mine else 0.0})
    return rows


def write_bench_csv(path, records) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=BENCH_COLUMNS)
        w.writeheader()
        w.writerows(records)


def write_profile_csv(path, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=PROFILE_COLUMNS)
        w.writeheader()
        w.writerows(rows)
