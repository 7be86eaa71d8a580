"""Min-max (bottleneck) partitioning of contiguous row ranges.

Three solvers over a cost oracle ``f(start, end, part)``:

``bisect_partition``
    Geometric bracketing of the optimum with a greedy feasibility probe;
    returns a partition within a ``(1 + eps)`` factor of the optimum.
``nicol_partition``
    Exact parametric search: for each part, binary search the candidate
    split against a feasibility probe of the remaining rows, pruning
    probes outside the running bracket.
``lazy_bisect_partition``
    Same bracketing loop, but the probe is a single fused sweep over the
    matrix rows (no preprocessed counters), valid for objectives that are
    linear in the sweep-maintained atoms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import lazy_probe_sweep
from .costs import CostOracle, bounds_for, partition_costs_direct
from .matrix import CsrMatrix
from .partition import SplitPartition

__all__ = [
    "BottleneckResult",
    "search",
    "probe",
    "bisect_partition",
    "nicol_partition",
    "lazy_probe",
    "lazy_bisect_partition",
    "partition_bottleneck",
]


@dataclass
class BottleneckResult:
    """Outcome of a bottleneck solver.

    Attributes
    ----------
    partition : SplitPartition
        The best partition found.
    cost : float
        Its bottleneck cost, recomputed from the oracle.
    feasible : bool
        Whether the partition respects the requested bound.
    probes : int
        Number of feasibility probes performed.
    oracle_calls : int
        Number of range-cost evaluations consumed.
    """

    partition: SplitPartition
    cost: float
    feasible: bool
    probes: int
    oracle_calls: int


def search(f, start, lo, hi, c, increasing=True):
    """Binary search a monotone range cost for the budget boundary.

    With ``increasing=True``, return the greatest ``b`` in
    ``[max(start, lo), hi]`` with ``f(start, b) <= c``, or
    ``max(start, lo) - 1`` when none qualifies.  With
    ``increasing=False`` (``f`` nonincreasing in ``b``), return the least
    such ``b``, or ``hi + 1`` when none qualifies.
    """
    base = max(start, lo)
    if increasing:
        if base > hi or f(start, base) > c:
            return base - 1
        a, b = base, hi
        while a < b:
            mid = (a + b + 1) // 2
            if f(start, mid) <= c:
                a = mid
            else:
                b = mid - 1
        return a
    if base > hi or f(start, hi) > c:
        return hi + 1
    a, b = base, hi
    while a < b:
        mid = (a + b) // 2
        if f(start, mid) <= c:
            b = mid
        else:
            a = mid + 1
    return a


def _probe_from(oracle, m, start, parts, c, increasing, part_offset=0):
    """Greedily place ``parts`` part ends from ``start`` under budget ``c``.

    Increasing costs take each part as large as possible; decreasing costs
    take each part as small as possible.  Returns ``(ok, ends)`` where
    ``ends`` has length ``parts`` and always finishes with ``m``
    (saturated with ``m`` on failure).
    """
    ends = []
    s = start
    ok = True
    for j in range(parts - 1):
        part = part_offset + j

        def f(a, b, _p=part):
            return oracle(a, b, _p)

        b = search(f, s, s, m, c, increasing=increasing)
        if (increasing and b < s) or (not increasing and b > m):
            ok = False
            break
        s = b
        ends.append(s)
    if ok:
        ok = oracle(s, m, part_offset + parts - 1) <= c
    ends.extend([m] * (parts - len(ends)))
    return ok, ends


def probe(oracle, m, K, c):
    """Test budget ``c`` with the greedy sweep; return ``(ok, splits)``.

    ``splits`` is the full split vector of length ``K + 1`` (leading 0,
    trailing ``m``); on failure the remaining splits are saturated at
    ``m``.
    """
    increasing = not oracle.objective.decreasing
    ok, ends = _probe_from(oracle, m, 0, K, c, increasing)
    return ok, np.asarray([0] + ends, dtype=np.int64)


def _achieved(oracle, splits):
    """Bottleneck cost of a split vector, one oracle call per part."""
    worst = -math.inf
    for k in range(len(splits) - 1):
        worst = max(worst, oracle(splits[k], splits[k + 1], k))
    return worst


def bisect_partition(oracle, m, K, bounds, eps):
    """Approximate the bottleneck optimum within ``(1 + eps)``.

    ``bounds = (lo, hi)`` must bracket the optimum with ``0 < lo <= hi``.
    Bisects the bracket with greedy probes until ``lo * (1 + eps) >= hi``,
    keeping the best feasible split vector.
    """
    lo, hi = float(bounds[0]), float(bounds[1])
    if eps <= 0:
        raise ValueError("eps must be positive")
    if lo <= 0:
        raise ValueError("lower bound must be positive")
    if lo > hi:
        raise ValueError("bounds must satisfy lo <= hi")
    calls0 = oracle.calls
    probes = 0
    s_high = None
    if math.isinf(hi):
        # No finite ceiling: grow a feasible budget geometrically first.
        c = lo
        for _ in range(200):
            probes += 1
            ok, s = _run_probe(oracle, m, K, c)
            if ok:
                hi, s_high = c, s
                break
            lo = c
            c *= 2.0
        else:
            raise ValueError("no feasible budget found above the lower bound")
    while lo * (1.0 + eps) < hi:
        c = 0.5 * (lo + hi)
        probes += 1
        ok, s = _run_probe(oracle, m, K, c)
        if ok:
            hi, s_high = c, s
        else:
            lo = c
    feasible = True
    if s_high is None:
        probes += 1
        feasible, s_high = _run_probe(oracle, m, K, hi)
    cost = _achieved(oracle, s_high)
    part = SplitPartition.from_splits(m, s_high)
    return BottleneckResult(part, cost, feasible, probes, oracle.calls - calls0)


def _run_probe(oracle, m, K, c):
    increasing = not oracle.objective.decreasing
    ok, ends = _probe_from(oracle, m, 0, K, c, increasing)
    return ok, [0] + ends


def nicol_partition(oracle, m, K, bounds=None):
    """Exact bottleneck partition by per-part parametric search.

    For each part in turn, binary search the split whose own cost is the
    smallest sufficient budget for the remaining rows, probing greedily
    and pruning probes whose budget falls outside the running bracket.
    ``bounds``, when given, seeds the bracket; if it fails to contain the
    optimum the result carries ``feasible=False``.
    """
    if K < 1:
        raise ValueError("need at least one part")
    obj = oracle.objective
    increasing = not obj.decreasing
    user_lo, user_hi = (None, None) if bounds is None else bounds
    calls0 = oracle.calls
    probes = 0

    # Initial witness: everything in the first part.
    best_splits = [0] + [m] * K
    best_cost = oracle(0, m, 0)
    if K > 1:
        best_cost = max(best_cost, oracle(m, m, K - 1))

    fail_low = -math.inf
    prefix = [0]
    prefix_max = -math.inf
    s = 0
    for k in range(1, K):
        remaining = K - k

        def candidate_ok(e):
            nonlocal probes, fail_low, best_cost, best_splits
            c = oracle(s, e, k - 1)
            if increasing and c <= fail_low:
                return False
            if increasing and user_lo is not None and c < user_lo:
                return False
            if c >= best_cost:
                return True
            if user_hi is not None and c > user_hi:
                return True
            probes += 1
            ok, cont = _probe_from(oracle, m, e, remaining, c,
                                   increasing, part_offset=k)
            if not ok:
                if increasing:
                    fail_low = max(fail_low, c)
                return False
            ach = max(prefix_max, c)
            if ach < best_cost:
                best_cost = ach
                best_splits = prefix + [e] + cont
            return True

        a, b = s, m
        if increasing:
            # least e whose own cost suffices for the remainder
            while a < b:
                mid = (a + b) // 2
                if candidate_ok(mid):
                    b = mid
                else:
                    a = mid + 1
            s = max(a - 1, s)
        else:
            # greatest e whose own cost is achievable for the remainder
            while a < b:
                mid = (a + b + 1) // 2
                if candidate_ok(mid):
                    a = mid
                else:
                    b = mid - 1
            s = min(a + 1, m)
        prefix.append(s)
        prefix_max = max(prefix_max, oracle(prefix[-2], s, k - 1))

    final = prefix + [m]
    final_cost = _achieved(oracle, final)
    if final_cost < best_cost:
        best_cost, best_splits = final_cost, final

    feasible = True
    if user_hi is not None and best_cost > user_hi:
        feasible = False
    if user_lo is not None and best_cost < user_lo:
        feasible = False
    part = SplitPartition.from_splits(m, best_splits)
    return BottleneckResult(part, best_cost, feasible, probes,
                            oracle.calls - calls0)


def lazy_probe(A, obj, K, c, col_part=None):
    """Greedy probe in one fused pass over the rows of ``A``.

    Requires an objective expressible as a linear form over the atoms a
    row sweep can maintain incrementally (``obj.lazy_compatible``).
    Returns ``(ok, splits)`` like :func:`probe`.
    """
    if not obj.lazy_compatible:
        raise ValueError(f"objective {obj.name!r} cannot be probed lazily")
    coef = obj.coef
    if not obj.uniform and col_part is None:
        raise ValueError(f"objective {obj.name!r} needs a column partition")
    m, n = A.nrows, A.ncols
    wmin = obj.min_degree(A)
    use_local = col_part is not None and coef[6] != 0.0
    if use_local:
        cp = np.ascontiguousarray(col_part, dtype=np.int64)
        nslots = int(max(int(cp.max(initial=0)) + 1, K)) + 1
    else:
        cp = np.zeros(1, dtype=np.int64)
        nslots = 1
    hst = np.full(n, -1, dtype=np.int64)
    hstd = np.full(n, -1, dtype=np.int64)
    lcl = np.zeros(nslots, dtype=np.int64)
    drt = np.full(nslots, -1, dtype=np.int64)
    ends = np.zeros(K, dtype=np.int64)
    ret = lazy_probe_sweep(
        A.row_start, A.col_idx, m, n, K, float(c),
        float(coef[0]), float(coef[1]), float(coef[2]),
        float(coef[5]), float(coef[6]), float(coef[7]),
        int(wmin), cp, use_local, hst, hstd, lcl, drt, ends)
    if ret < 0:
        return False, np.asarray([0] + [m] * K, dtype=np.int64)
    return True, np.concatenate(([0], ends)).astype(np.int64)


def lazy_bisect_partition(A, obj, K, eps, bounds=None, col_part=None):
    """Approximate bottleneck partition using the fused-sweep probe."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    if bounds is None:
        bounds = bounds_for(obj, A, K, col_part=col_part)
    lo, hi = float(bounds[0]), float(bounds[1])
    if lo <= 0:
        raise ValueError("lower bound must be positive")
    if lo > hi:
        raise ValueError("bounds must satisfy lo <= hi")
    m = A.nrows
    probes = 0
    s_high = None
    while lo * (1.0 + eps) < hi:
        c = 0.5 * (lo + hi)
        probes += 1
        ok, s = lazy_probe(A, obj, K, c, col_part=col_part)
        if ok:
            hi, s_high = c, s
        else:
            lo = c
    feasible = True
    if s_high is None:
        probes += 1
        feasible, s_high = lazy_probe(A, obj, K, hi, col_part=col_part)
    # cost the one final partition by direct scans; building the counter
    # suite for K evaluations would dwarf the probe sweeps themselves
    vals = partition_costs_direct(A, obj, s_high, col_part=col_part)
    part = SplitPartition.from_splits(m, s_high)
    return BottleneckResult(part, max(vals), feasible, probes, len(vals))


def partition_bottleneck(A: CsrMatrix, obj, K, algorithm="exact", eps=0.1,
                         bounds=None, col_part=None):
    """Dispatch to a bottleneck solver by name.

    ``"exact"`` runs the parametric search, ``"approx"`` the counter-backed
    bisection, and ``"lazy"`` the fused-sweep bisection.
    """
    if algorithm == "exact":
        oracle = CostOracle(A, obj, col_part=col_part)
        return nicol_partition(oracle, A.nrows, K, bounds=bounds)
    if algorithm == "approx":
        oracle = CostOracle(A, obj, col_part=col_part)
        if bounds is None:
            bounds = bounds_for(obj, A, K, col_part=col_part)
        return bisect_partition(oracle, A.nrows, K, bounds=bounds, eps=eps)
    if algorithm == "lazy":
        return lazy_bisect_partition(A, obj, K, eps, bounds=bounds,
                                     col_part=col_part)
    raise ValueError(f"unknown algorithm {algorithm!r}")
