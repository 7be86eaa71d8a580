"""Bandwidth-reducing row/column reordering (reverse Cuthill-McKee).

Chain partitioning exploits locality along the row order, so matrices
with scattered structure are first reordered: breadth-first levels from
a low-degree root, neighbors visited in degree order, and the whole
order reversed.  Rectangular matrices are handled through the bipartite
row/column graph, which yields separate row and column orders.
"""

from __future__ import annotations

import numpy as np

from .matrix import CsrMatrix

__all__ = [
    "rcm_order",
    "permute",
    "bandwidth",
    "reorder_matrix",
    "write_permutation",
    "read_permutation",
]


def bandwidth(A: CsrMatrix) -> int:
    """Largest ``|i - j|`` over stored entries (0 when empty)."""
    if A.nnz == 0:
        return 0
    rows = np.repeat(np.arange(A.nrows), np.diff(A.row_start))
    return int(np.abs(rows - A.col_idx).max())


def _check_permutation(perm, size, what):
    perm = np.asarray(perm, dtype=np.int64)
    if perm.shape != (size,) or not np.array_equal(np.sort(perm), np.arange(size)):
        raise ValueError(f"{what} is not a permutation of 0..{size - 1}")
    return perm


def permute(A: CsrMatrix, rperm, cperm) -> CsrMatrix:
    """Reorder both sides: ``B[i, j] = A[rperm[i], cperm[j]]``."""
    rperm = _check_permutation(rperm, A.nrows, "row permutation")
    cperm = _check_permutation(cperm, A.ncols, "column permutation")
    rinv = np.empty(A.nrows, dtype=np.int64)
    rinv[rperm] = np.arange(A.nrows)
    cinv = np.empty(A.ncols, dtype=np.int64)
    cinv[cperm] = np.arange(A.ncols)
    rows = np.repeat(np.arange(A.nrows), np.diff(A.row_start))
    return CsrMatrix.from_coo(A.nrows, A.ncols, rinv[rows], cinv[A.col_idx],
                              A.values)


def _rcm_core(S: CsrMatrix) -> np.ndarray:
    """Reverse Cuthill-McKee over a symmetric pattern (self-loops ignored)."""
    m = S.nrows
    deg = np.zeros(m, dtype=np.int64)
    for u in range(m):
        nb = S.row_cols(u)
        deg[u] = len(nb) - int(bool(np.any(nb == u)))
    by_degree = np.lexsort((np.arange(m), deg))  # root candidates

    order = np.empty(m, dtype=np.int64)
    seen = np.zeros(m, dtype=bool)
    filled = 0
    root_ptr = 0
    while filled < m:
        while seen[by_degree[root_ptr]]:
            root_ptr += 1
        root = by_degree[root_ptr]
        seen[root] = True
        order[filled] = root
        filled += 1
        head = filled - 1
        while head < filled:
            u = order[head]
            head += 1
            nb = S.row_cols(u)
            nb = nb[~seen[nb]]
            if len(nb):
                nb = nb[np.argsort(deg[nb], kind="stable")]
                seen[nb] = True
                order[filled:filled + len(nb)] = nb
                filled += len(nb)
    return order[::-1].copy()


def _symmetrized(A: CsrMatrix) -> CsrMatrix:
    rows = np.repeat(np.arange(A.nrows), np.diff(A.row_start))
    return CsrMatrix.from_coo(
        A.nrows, A.nrows,
        np.concatenate([rows, A.col_idx]),
        np.concatenate([A.col_idx, rows]),
    )


def rcm_order(A: CsrMatrix) -> np.ndarray:
    """RCM order of a square matrix; ``perm[i]`` is the old index placed
    at position ``i``, so ``permute(A, perm, perm)`` applies it."""
    if A.nrows != A.ncols:
        raise ValueError("rcm_order needs a square matrix")
    return _rcm_core(_symmetrized(A))


def reorder_matrix(A: CsrMatrix):
    """Bandwidth-reducing reorder of any matrix.

    Square matrices get one symmetric-pattern RCM order for both sides;
    rectangular ones are ordered through the bipartite graph that joins
    row i and column j per stored entry, keeping the two sides' relative
    orders from the one traversal.  Returns ``(B, rperm, cperm)``.
    """
    if A.nrows == A.ncols:
        perm = rcm_order(A)
        return permute(A, perm, perm), perm, perm
    m, n = A.nrows, A.ncols
    rows = np.repeat(np.arange(m), np.diff(A.row_start))
    bip = CsrMatrix.from_coo(
        m + n, m + n,
        np.concatenate([rows, A.col_idx + m]),
        np.concatenate([A.col_idx + m, rows]),
    )
    order = _rcm_core(bip)
    rperm = order[order < m]
    cperm = order[order >= m] - m
    return permute(A, rperm, cperm), rperm, cperm


def write_permutation(path, perm) -> None:
    """Write one 1-based index per line."""
    perm = np.asarray(perm, dtype=np.int64)
    np.savetxt(path, perm + 1, fmt="%d")


def read_permutation(path) -> np.ndarray:
    """Read a permutation written by :func:`write_permutation` (0-based
    in memory)."""
    return np.loadtxt(path, dtype=np.int64, ndmin=1) - 1
