"""Jit-compiled hot loops.

Kept separate so the pure-python modules stay importable and readable; every
kernel here has a straight-line numpy or python twin in the test oracles.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def lazy_probe_sweep(row_start, col_idx, m, n, K, budget,
                     w_rows, w_entries, w_clip, w_incident, w_local, w_diag,
                     wmin, col_part, use_local, hst, hstd, lcl, drt, ends):
    """Greedy bottleneck probe fused into one pass over the rows.

    Maintains the running atoms of the open part directly from per-column
    last-touch rows (``hst``; ``hstd`` for the diagonal-augmented pattern)
    and per-column-part row-local counts (``lcl``/``drt``), splitting the
    moment the part cost would exceed ``budget``.  Returns the number of
    splits placed, or -1 when K parts cannot cover the rows.
    """
    k = 0
    p = 0  # start row of the open part
    rows = 0
    entries = 0
    clip = 0
    incident = 0
    local = 0
    diag = 0
    for r in range(m):
        deg = row_start[r + 1] - row_start[r]
        rows += 1
        entries += deg
        clip += max(deg - wmin, 0)
        for idx in range(row_start[r], row_start[r + 1]):
            cix = col_idx[idx]
            if use_local:
                q = col_part[cix]
                if drt[q] != r:
                    drt[q] = r
                    lcl[q] = 0
                lcl[q] += 1
                if hst[cix] < p and q == k:
                    local += 1
            if hst[cix] < p:
                incident += 1
            if hstd[cix] < p:
                diag += 1
            hst[cix] = r
            hstd[cix] = r
        if r < n:
            if hstd[r] < p:
                diag += 1
            hstd[r] = r
        cost = (w_rows * rows + w_entries * entries + w_clip * clip
                + w_incident * incident + w_local * local + w_diag * diag)
        if cost > budget:
            p = r
            rows = 1
            entries = deg
            clip = max(deg - wmin, 0)
            incident = deg
            diag = deg
            if r < n and hst[r] != r:
                diag += 1  # the diagonal cell is not among row r's entries
            # Close parts until row r fits the newly opened one; with
            # part-dependent local columns a row can overflow one part
            # index yet fit a later one, leaving empty parts between.
            while True:
                ends[k] = r
                k += 1
                if k >= K:
                    return -1
                local = 0
                if use_local and drt[k] == r:
                    local = lcl[k]
                cost = (w_rows * rows + w_entries * entries + w_clip * clip
                        + w_incident * incident + w_local * local
                        + w_diag * diag)
                if cost <= budget:
                    break
    for j in range(k, K):
        ends[j] = m
    return k


@njit(cache=True)
def dominance_count_batch(qx, qy, xp, bs, digits, cache, passes, digit_bits,
                          stride_bits, out):
    """Batch corner queries against the multi-pass dominance structure.

    ``digits[h]`` holds the level-h digit of every point in level-h order;
    ``cache[h, t, D-1]`` counts digits < D among the first ``t << stride_bits``
    points of that order.  A query descends one digit per pass, counting
    strictly-smaller branches from the cache plus a short boundary scan.
    """
    mask = (np.int64(1) << digit_bits) - 1
    top = np.int64(1) << digit_bits
    for qi in range(len(qx)):
        x = qx[qi]
        y = qy[qi]
        dq = xp[x + 1]
        if dq == 0 or y < 0:
            out[qi] = 0
            continue
        c = np.int64(0)
        for h in range(passes - 1, -1, -1):
            sh = h * digit_bits
            d = (y >> sh) & mask
            vbase = (y >> (sh + digit_bits)) << (sh + digit_bits)
            q1 = bs[vbase]
            q2 = q1 + dq
            lt = np.int64(0)
            eq = np.int64(0)
            for pos, sign in ((q1, np.int64(-1)), (q2, np.int64(1))):
                t = pos >> stride_bits
                base = t << stride_bits
                plt = cache[h, t, d - 1] if d > 0 else np.int64(0)
                plt1 = cache[h, t, d] if d + 1 < top else base
                peq = plt1 - plt
                for i in range(base, pos):
                    v = digits[h, i]
                    if v < d:
                        plt += 1
                    elif v == d:
                        peq += 1
                lt += sign * plt
                eq += sign * peq
            c += lt
            dq = eq
            if dq == 0:
                break
        out[qi] = c + dq
