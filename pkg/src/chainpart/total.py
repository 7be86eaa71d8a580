"""Total-cost (sum over parts) partitioning of contiguous row ranges.

The core is the least-weight-subsequence (LWS) recurrence

    c[j] = min over i < j of d[i] + f(i, j),

where ``d[i]`` is the seed value of position ``i`` when finite and the
computed ``c[i]`` otherwise, so unseeded positions chain through.  Three
solvers share that contract: a plain quadratic sweep (``lws_dp``), an
event-driven envelope solver for costs satisfying the quadrangle
inequality (``lws_quadrangle``), and a batched variant that additionally
enforces a range-weight cap (``lws_constrained_convex``).

Fixed-K partitioning runs K frozen LWS rounds (the seed of round r is
the cost table of round r-1, with an empty-part carry), and cache
blocking is the dynamic recurrence with a row cap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .costs import CostOracle, connectivity
from .matrix import CsrMatrix
from .partition import InfeasibleError, SplitPartition

__all__ = [
    "LwsSolution",
    "TotalResult",
    "lws_dp",
    "lws_quadrangle",
    "lws_constrained_convex",
    "partition_total_fixed_k",
    "partition_total_fixed_k_quadrangle",
    "partition_total",
    "block_partition",
    "block_equally",
]


@dataclass
class LwsSolution:
    """Cost table and predecessor links of an LWS solve.

    ``costs[j]`` is the best value ending at position ``j``;
    ``parents[j]`` the predecessor achieving it (-1 when unreachable).
    """

    costs: np.ndarray
    parents: np.ndarray


@dataclass
class TotalResult:
    """A partition together with its total (sum over parts) cost."""

    partition: SplitPartition
    total: float


# ---------------------------------------------------------------------------
# quadratic solver


def lws_dp(f, L, seed=None, weight=None, wmax=math.inf):
    """Quadratic LWS solve.

    Parameters
    ----------
    f : callable
        Range cost ``f(i, j)`` for ``0 <= i < j <= L``.
    L : int
        Number of items.
    seed : array of length L + 1, or None
        Predecessor values; positions with infinite seed chain through
        their computed cost.  ``None`` means ``[0, inf, ...]`` — the
        fully dynamic recurrence.
    weight, wmax
        Optional range weight ``weight(i, j)`` (monotone in the range)
        and cap; predecessors whose range exceeds ``wmax`` are skipped,
        and the scan over ``i`` stops at the first violation.

    Ties break to the largest predecessor.
    """
    base = np.full(L + 1, math.inf) if seed is None else np.asarray(seed, dtype=float)
    if seed is None:
        base[0] = 0.0
    c = np.full(L + 1, math.inf)
    par = np.full(L + 1, -1, dtype=np.int64)
    c[0] = base[0]
    for j in range(1, L + 1):
        best, arg = math.inf, -1
        for i in range(j - 1, -1, -1):
            if weight is not None and weight(i, j) > wmax:
                break
            di = base[i] if math.isfinite(base[i]) else c[i]
            if di == math.inf:
                continue
            v = di + f(i, j)
            if v < best:
                best, arg = v, i
        c[j], par[j] = best, arg
    return LwsSolution(c, par)


# ---------------------------------------------------------------------------
# envelope structures for quadrangle-inequality costs


class _PrefixWinEnvelope:
    """Lower envelope when a newer candidate wins a prefix of the later
    positions, as for concave-shape range costs."""

    def __init__(self, curve, last_pos):
        self.curve = curve
        self.last = last_pos
        self.items = []  # [candidate, last position covered]; front = newest

    def insert(self, cand, first_pos):
        items = self.items
        while items:
            c0, last0 = items[0]
            if self.curve(cand, last0) < self.curve(c0, last0):
                items.pop(0)
                continue
            if self.curve(cand, first_pos) < self.curve(c0, first_pos):
                lo, hi = first_pos, last0  # wins at lo, loses at hi
                while hi - lo > 1:
                    mid = (lo + hi) // 2
                    if self.curve(cand, mid) < self.curve(c0, mid):
                        lo = mid
                    else:
                        hi = mid
                items.insert(0, [cand, lo])
            return
        items.append([cand, self.last])

    def query(self, pos):
        items = self.items
        while items and items[0][1] < pos:
            items.pop(0)
        if not items:
            return math.inf, -1
        best = items[0][0]
        return self.curve(best, pos), best


class _SuffixWinEnvelope:
    """Lower envelope when a newer candidate wins a suffix of the later
    positions, as for convex-shape range costs."""

    def __init__(self, curve, last_pos):
        self.curve = curve
        self.last = last_pos
        self.items = []  # [candidate, first position covered]; front = current

    def insert(self, cand, first_pos):
        items = self.items
        while items:
            cb, startb = items[-1]
            p0 = max(startb, first_pos)
            if self.curve(cand, p0) < self.curve(cb, p0):
                items.pop()
                continue
            if self.curve(cand, self.last) < self.curve(cb, self.last):
                lo, hi = p0, self.last  # loses at lo, wins at hi
                while hi - lo > 1:
                    mid = (lo + hi) // 2
                    if self.curve(cand, mid) < self.curve(cb, mid):
                        hi = mid
                    else:
                        lo = mid
                items.append([cand, hi])
            return
        items.append([cand, first_pos])

    def query(self, pos):
        items = self.items
        while len(items) >= 2 and items[1][1] <= pos:
            items.pop(0)
        if not items:
            return math.inf, -1
        best = items[0][0]
        return self.curve(best, pos), best


def _winner_of_shape(shape):
    """Translate a cost shape into the envelope winner direction.

    Shapes name the function composed with the range weight: a convex
    ``g`` gives ``f(i,j) + f(i',j') <= f(i,j') + f(i',j)``, under which a
    newer candidate's advantage grows with position (it wins a suffix);
    a concave ``g`` gives the reverse inequality and a prefix winner.
    """
    if shape == "convex":
        return "suffix"
    if shape == "concave":
        return "prefix"
    raise ValueError(f"unknown shape {shape!r}")


def _gg(f, L, seed, winner, chain):
    """Envelope-driven LWS round; returns ``(costs, parents)``.

    ``winner`` ("prefix" or "suffix") says which span of later positions
    a newer candidate takes over.  With ``chain=False`` positions with an
    infinite seed are simply unusable as predecessors (a frozen round);
    with ``chain=True`` they chain through their computed cost, matching
    :func:`lws_dp`.
    """
    if seed is None:
        base = np.full(L + 1, math.inf)
        base[0] = 0.0
    else:
        base = np.asarray(seed, dtype=float)
    c = np.full(L + 1, math.inf)
    par = np.full(L + 1, -1, dtype=np.int64)
    c[0] = base[0]
    vals = {}

    def curve(i, p):
        return vals[i] + f(i, p)

    cls = _SuffixWinEnvelope if winner == "suffix" else _PrefixWinEnvelope
    env = cls(curve, L)
    for j in range(1, L + 1):
        i = j - 1
        vi = base[i]
        if not math.isfinite(vi) and chain:
            vi = c[i]
        if math.isfinite(vi):
            vals[i] = vi
            env.insert(i, j)
        c[j], par[j] = env.query(j)
    return c, par


def lws_quadrangle(f, L, seed=None, shape="convex"):
    """LWS solve in O(L log L) range-cost queries.

    Requires ``f`` to satisfy the quadrangle inequality of the given
    ``shape``; produces the same cost table as :func:`lws_dp`.
    """
    c, par = _gg(f, L, seed, _winner_of_shape(shape), chain=True)
    return LwsSolution(c, par)


# ---------------------------------------------------------------------------
# constrained convex solver


def _constrained(f, L, seed, weight, wmax, chain, winner="suffix"):
    """Quadrangle-inequality LWS with a range-weight cap, in batches.

    Positions are grouped into maximal batches whose full span satisfies
    the cap, so every in-batch predecessor pair is feasible (handled by a
    plain forward envelope).  Predecessors from before the batch expire
    at a deadline inside it; scanning the batch backwards turns those
    expirations into insertions for a mirrored envelope.  Mirroring
    reverses both the insertion and the query order, so both envelopes
    use the caller's ``winner`` direction unchanged.
    """
    cls = _SuffixWinEnvelope if winner == "suffix" else _PrefixWinEnvelope
    base = np.asarray(seed, dtype=float)
    c = np.full(L + 1, math.inf)
    par = np.full(L + 1, -1, dtype=np.int64)
    c[0] = base[0]

    def dval(i):
        vi = base[i]
        if not math.isfinite(vi) and chain:
            vi = c[i]
        return vi

    # Batch boundaries, built backwards: each batch is the widest range
    # ending at its cut whose total weight fits the cap.
    cuts = [L]
    t = L
    while t > 0:
        s = t
        while s > 0 and weight(s - 1, t) <= wmax:
            s -= 1
        if s >= t:
            s = t - 1  # no feasible predecessor for position t at all
        cuts.append(s)
        t = s
    cuts.reverse()

    vals = {}

    for b in range(1, len(cuts)):
        s, t = cuts[b - 1], cuts[b]
        if weight(s, t) > wmax:
            continue  # stalled single-position batch; stays unreachable
        width = t - s
        su = np.full(width + 1, math.inf)  # indexed by mirrored position
        sup = np.full(width + 1, -1, dtype=np.int64)

        # ---- setup: predecessors from before the batch, by deadline
        lo = s
        while lo > 0 and weight(lo - 1, s + 1) <= wmax:
            lo -= 1
        cands = []  # (candidate, first mirrored position), descending i
        h = t
        for i in range(s - 1, lo - 1, -1):
            while h > i and weight(i, h) > wmax:
                h -= 1
            # h = last position i can serve; h > s by choice of lo
            vi = dval(i)
            if math.isfinite(vi):
                cands.append((i, t - h + 1))

        def curve_m(i, p):
            return vals[i] + f(i, t - p + 1)

        env = cls(curve_m, width)
        ci = 0
        for p in range(1, width + 1):
            while ci < len(cands) and cands[ci][1] <= p:
                cand, first = cands[ci]
                vals[cand] = dval(cand)
                env.insert(cand, first)
                ci += 1
            su[p], sup[p] = env.query(p)

        # ---- cleanup: in-batch predecessors, all feasible; combine
        def curve(i, p):
            return vals[i] + f(i, p)

        env2 = cls(curve, t)
        for j in range(s + 1, t + 1):
            i = j - 1
            vi = dval(i)
            if math.isfinite(vi):
                vals[i] = vi
                env2.insert(i, j)
            cl, clp = env2.query(j)
            sv, sp = su[t - j + 1], sup[t - j + 1]
            if sv < cl:
                c[j], par[j] = sv, sp
            else:
                c[j], par[j] = cl, clp
    return c, par


def lws_constrained_convex(f, L, seed, weight, wmax):
    """Convex-cost LWS under a range-weight cap, in O(L log L) queries.

    Equivalent to :func:`lws_dp` with the same ``weight``/``wmax``;
    with ``wmax=inf`` it reduces to :func:`lws_quadrangle`.
    """
    if wmax == math.inf:
        return lws_quadrangle(f, L, seed, shape="convex")
    c, par = _constrained(f, L, seed, weight, wmax, chain=True)
    return LwsSolution(c, par)


# ---------------------------------------------------------------------------
# fixed-K rounds


def _round_frozen(f, L, d, weight, wmax):
    """One frozen LWS round: predecessors valued by ``d`` only."""
    c = np.full(L + 1, math.inf)
    par = np.full(L + 1, -1, dtype=np.int64)
    c[0] = d[0]
    for j in range(1, L + 1):
        best, arg = math.inf, -1
        for i in range(j - 1, -1, -1):
            if weight is not None and weight(i, j) > wmax:
                break
            if d[i] == math.inf:
                continue
            v = d[i] + f(i, j)
            if v < best:
                best, arg = v, i
        c[j], par[j] = best, arg
    return c, par


def _carry(c, par, d):
    """Empty-part carry: keep the previous round's value when no worse.

    A carried position stores itself as parent, marking an empty part.
    """
    for j in range(len(c)):
        if d[j] <= c[j]:
            c[j] = d[j]
            par[j] = j


def _backtrack(parents, m, K):
    splits = [m]
    j = m
    for r in range(K - 1, -1, -1):
        j = int(parents[r][j])
        splits.append(j)
    splits.reverse()
    return splits


def _finish_rounds(A, total, parents, K):
    if not math.isfinite(total):
        raise InfeasibleError("no partition satisfies the weight cap")
    m = A.nrows
    part = SplitPartition.from_splits(m, _backtrack(parents, m, K))
    return TotalResult(part, float(total))


def partition_total_fixed_k(A: CsrMatrix, obj, K, w_max=math.inf,
                            simultaneous=False):
    """Minimum total cost over partitions into at most K parts.

    ``w_max`` caps the entry weight of every part.  ``simultaneous=True``
    fills all K round tables in a single pass over the predecessor pairs,
    evaluating each range cost once instead of once per round.
    """
    m = A.nrows
    oracle = CostOracle(A, obj)
    pos = A.row_start

    def f(i, j):
        return oracle(i, j, 0)

    weight = None if w_max == math.inf else (lambda i, j: pos[j] - pos[i])
    if simultaneous:
        return _fixed_k_simultaneous(A, f, K, weight, w_max)
    d = np.full(m + 1, math.inf)
    d[0] = 0.0
    parents = []
    for _ in range(K):
        c, par = _round_frozen(f, m, d, weight, w_max)
        _carry(c, par, d)
        parents.append(par)
        d = c
    return _finish_rounds(A, d[m], parents, K)


def _fixed_k_simultaneous(A, f, K, weight, w_max):
    m = A.nrows
    D = np.full((K + 1, m + 1), math.inf)
    D[0, 0] = 0.0
    par = np.full((K, m + 1), -1, dtype=np.int64)
    for j in range(m + 1):
        if j > 0:
            best = np.full(K + 1, math.inf)
            arg = np.full(K + 1, -1, dtype=np.int64)
            for i in range(j - 1, -1, -1):
                if weight is not None and weight(i, j) > w_max:
                    break
                fv = f(i, j)
                for r in range(1, K + 1):
                    if D[r - 1, i] == math.inf:
                        continue
                    v = D[r - 1, i] + fv
                    if v < best[r]:
                        best[r], arg[r] = v, i
            for r in range(1, K + 1):
                D[r, j], par[r - 1, j] = best[r], arg[r]
        for r in range(1, K + 1):
            if D[r - 1, j] <= D[r, j]:
                D[r, j] = D[r - 1, j]
                par[r - 1, j] = j
    return _finish_rounds(A, D[K, m], list(par), K)


def partition_total_fixed_k_quadrangle(A: CsrMatrix, obj, K,
                                       w_max=math.inf):
    """Fixed-K rounds with the envelope solver inside each round.

    Requires the objective's range costs to satisfy a quadrangle
    inequality; the weight-capped form additionally requires the convex
    shape.
    """
    m = A.nrows
    oracle = CostOracle(A, obj)
    pos = A.row_start

    def f(i, j):
        return oracle(i, j, 0)

    # Objective flags follow the range-table (Monge) convention, which is
    # the opposite inequality from the solver's shape vocabulary: a
    # convex-flagged objective has a prefix-winning envelope.
    if obj.convex:
        winner = "prefix"
    elif obj.concave:
        winner = "suffix"
    else:
        raise ValueError(f"{obj.name} declares no quadrangle inequality")
    if w_max != math.inf and not obj.convex:
        raise ValueError("weight caps require a convex objective")
    weight = None if w_max == math.inf else (lambda i, j: pos[j] - pos[i])
    d = np.full(m + 1, math.inf)
    d[0] = 0.0
    parents = []
    for _ in range(K):
        if weight is None:
            c, par = _gg(f, m, d, winner, chain=False)
        else:
            c, par = _constrained(f, m, d, weight, w_max, chain=False,
                                  winner=winner)
        _carry(c, par, d)
        parents.append(par)
        d = c
    return _finish_rounds(A, d[m], parents, K)


def partition_total(A: CsrMatrix, obj, K, algorithm="dynamic",
                    w_max=math.inf):
    """Dispatch to a total-cost solver by name.

    ``"dynamic"`` runs the quadratic rounds, ``"dynamic-simul"`` the
    shared-evaluation variant, and ``"quadrangle"`` the envelope rounds.
    """
    if algorithm == "dynamic":
        return partition_total_fixed_k(A, obj, K, w_max=w_max)
    if algorithm == "dynamic-simul":
        return partition_total_fixed_k(A, obj, K, w_max=w_max,
                                       simultaneous=True)
    if algorithm == "quadrangle":
        return partition_total_fixed_k_quadrangle(A, obj, K, w_max=w_max)
    raise ValueError(f"unknown algorithm {algorithm!r}")


# ---------------------------------------------------------------------------
# cache blocking


def block_partition(A: CsrMatrix, C):
    """Partition rows into blocks of at most ``C`` rows minimizing the
    summed distinct-column count of the blocks (variable block count)."""
    m = A.nrows
    oracle = CostOracle(A, connectivity())
    sol = lws_dp(lambda i, j: oracle(i, j, 0), m, seed=None,
                 weight=lambda i, j: j - i, wmax=C)
    if not math.isfinite(sol.costs[m]):
        raise InfeasibleError("no blocking satisfies the row cap")
    splits = [m]
    j = m
    while j > 0:
        j = int(sol.parents[j])
        splits.append(j)
    splits.reverse()
    part = SplitPartition.from_splits(m, splits)
    return TotalResult(part, float(sol.costs[m]))


def block_equally(A: CsrMatrix, C):
    """Blocks of a fixed stride ``C`` (the last one possibly shorter)."""
    m = A.nrows
    splits = list(range(0, m, C)) + [m]
    part = SplitPartition.from_splits(m, splits)
    oracle = CostOracle(A, connectivity())
    total = sum(oracle(a, b, 0) for a, b in part.ranges())
    return TotalResult(part, float(total))
