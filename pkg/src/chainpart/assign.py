"""Column-to-part assignment for the alternating nonsymmetric regime.

A row partition fixes who computes each output entry; the column owner
decides who holds each input entry and therefore which touched columns
cost a message.  Every strategy here returns a :class:`MapPartition`
over columns and only ever assigns a column to a part that touches it
(isolated columns are spread round-robin), so the summed message count
equals the lambda-minus-one cut of the row partition regardless of the
strategy.  They differ in which incident part they pick:

* :func:`assign_any_incident` — the part of the first touching row.
* :func:`assign_local` — a seeded uniform choice per column.
* :func:`assign_greedy_conn` — the currently costliest incident part,
  so each message credit relieves the bottleneck candidate.
"""

from __future__ import annotations

import numpy as np

from .costs import CostCoefficients, CostOracle, nonsym_initial
from .matrix import CsrMatrix
from .partition import MapPartition, SplitPartition

__all__ = ["assign_any_incident", "assign_local", "assign_greedy_conn"]


def _incident_parts(A: CsrMatrix, part: SplitPartition):
    """Ascending distinct part ids touching each column (lambda sets)."""
    lam = [[] for _ in range(A.ncols)]
    for k, (a, b) in enumerate(part.ranges()):
        for c in np.unique(A.col_idx[A.row_start[a]:A.row_start[b]]):
            lam[c].append(k)
    return lam


def _fill_isolated(assign, lam, K):
    """Round-robin untouched columns so no single part collects them all."""
    nxt = 0
    for j, parts in enumerate(lam):
        if not parts:
            assign[j] = nxt % K
            nxt += 1


def assign_any_incident(A: CsrMatrix, part: SplitPartition) -> MapPartition:
    """Assign each column to the part of its first touching row."""
    lam = _incident_parts(A, part)
    assign = np.zeros(A.ncols, dtype=np.int64)
    for j, parts in enumerate(lam):
        if parts:
            assign[j] = parts[0]
    _fill_isolated(assign, lam, part.num_parts)
    return MapPartition(assign, part.num_parts)


def assign_local(A: CsrMatrix, part: SplitPartition, seed=0) -> MapPartition:
    """Assign each column uniformly at random among its incident parts."""
    rng = np.random.default_rng(seed)
    lam = _incident_parts(A, part)
    assign = np.zeros(A.ncols, dtype=np.int64)
    for j, parts in enumerate(lam):
        if parts:
            assign[j] = parts[int(rng.integers(len(parts)))]
    _fill_isolated(assign, lam, part.num_parts)
    return MapPartition(assign, part.num_parts)


def assign_greedy_conn(A: CsrMatrix, part: SplitPartition,
                       coefficients: CostCoefficients | None = None,
                       seed=0, validate=False) -> MapPartition:
    """Assign columns, visited in seeded order, to their costliest
    incident part.

    Part costs start at the message-everywhere (no ownership) value and
    drop by one message each time a part receives one of its own touched
    columns; ties go to the lowest part id.  ``validate=True`` recomputes
    every part cost from scratch at each step instead of updating
    incrementally (a cross-check; the decisions are identical).
    """
    coef = coefficients or CostCoefficients()
    rng = np.random.default_rng(seed)
    K = part.num_parts
    lam = _incident_parts(A, part)
    oracle = CostOracle(A, nonsym_initial(coef))
    base = np.array([oracle(a, b, k)
                     for k, (a, b) in enumerate(part.ranges())])
    cost = base.copy()
    owned = [set() for _ in range(K)]  # columns credited to each part

    assign = np.full(A.ncols, -1, dtype=np.int64)
    for j in rng.permutation(A.ncols):
        parts = lam[j]
        if not parts:
            continue
        if validate:
            cost = base - coef.message_cost * np.array(
                [len(s) for s in owned], dtype=float)
        pick = max(parts, key=lambda k: (cost[k], -k))
        assign[j] = pick
        owned[pick].add(int(j))
        cost[pick] -= coef.message_cost
    _fill_isolated(assign, lam, K)
    return MapPartition(assign, K)
