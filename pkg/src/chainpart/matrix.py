"""Sparse-matrix core: CSR storage, Matrix Market I/O, and the structural
primitives (transpose, spmv, links, column extents, rank-space transform)
that the partitioning layers are built on.

All indices are 0-based in memory; Matrix Market files and permutation
files use 1-based indices at the boundary only.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "CsrMatrix",
    "MatrixFormatError",
    "Links",
    "ColumnExtents",
    "RankPoints",
    "load_matrix_market",
    "save_matrix_market",
    "transpose",
    "spmv",
    "compute_links",
    "column_extents",
    "rank_space_transform",
]


class MatrixFormatError(ValueError):
    """Raised for structurally invalid matrices or unreadable files."""


@dataclass
class CsrMatrix:
    """Compressed sparse row matrix (pattern or real valued).

    Parameters
    ----------
    nrows, ncols : int
        Matrix dimensions.
    row_start : ndarray of int64, shape (nrows + 1,)
        Entry offsets; row ``i`` occupies ``col_idx[row_start[i]:row_start[i+1]]``.
    col_idx : ndarray of int64, shape (nnz,)
        Column index per entry, ascending within each row.
    values : ndarray of float64 or None
        Entry values; ``None`` marks a pattern-only matrix.
    """

    nrows: int
    ncols: int
    row_start: np.ndarray
    col_idx: np.ndarray
    values: np.ndarray | None = None

    @property
    def nnz(self) -> int:
        return int(self.row_start[-1])

    @classmethod
    def from_coo(cls, nrows, ncols, rows, cols, values=None) -> "CsrMatrix":
        """Build from coordinate triplets.

        Entries are sorted into row-major order; duplicate coordinates are
        merged, summing values when present.
        """
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        order = np.lexsort((cols, rows))
        rows, cols = rows[order], cols[order]
        vals = None if values is None else np.asarray(values, dtype=np.float64)[order]
        if len(rows):
            keep = np.concatenate([[True], (np.diff(rows) != 0) | (np.diff(cols) != 0)])
            if vals is not None:
                group = np.cumsum(keep) - 1
                vals = np.bincount(group, weights=vals, minlength=int(keep.sum()))
            rows, cols = rows[keep], cols[keep]
        row_start = np.zeros(nrows + 1, dtype=np.int64)
        np.add.at(row_start, rows + 1, 1)
        np.cumsum(row_start, out=row_start)
        A = cls(int(nrows), int(ncols), row_start, cols, vals)
        A.validate()
        return A

    def row_cols(self, i: int) -> np.ndarray:
        """Column indices of row ``i`` (ascending)."""
        return self.col_idx[self.row_start[i] : self.row_start[i + 1]]

    def row_degrees(self) -> np.ndarray:
        return np.diff(self.row_start)

    def to_dense_pattern(self) -> np.ndarray:
        d = np.zeros((self.nrows, self.ncols), dtype=bool)
        rows = np.repeat(np.arange(self.nrows), np.diff(self.row_start))
        d[rows, self.col_idx] = True
        return d

    def to_dense(self) -> np.ndarray:
        d = np.zeros((self.nrows, self.ncols))
        rows = np.repeat(np.arange(self.nrows), np.diff(self.row_start))
        vals = np.ones(self.nnz) if self.values is None else self.values
        d[rows, self.col_idx] = vals
        return d

    def validate(self) -> "CsrMatrix":
        """Check structural invariants, raising :class:`MatrixFormatError`."""
        if self.nrows <= 0 or self.ncols <= 0:
            raise MatrixFormatError("matrix must have at least one row and column")
        if len(self.row_start) != self.nrows + 1:
            raise MatrixFormatError("row_start must have nrows + 1 offsets")
        if self.row_start[0] != 0 or np.any(np.diff(self.row_start) < 0):
            raise MatrixFormatError("row_start must be nondecreasing from 0")
        if len(self.col_idx) != self.nnz:
            raise MatrixFormatError("col_idx length disagrees with row_start")
        if len(self.col_idx) and (
            self.col_idx.min() < 0 or self.col_idx.max() >= self.ncols
        ):
            raise MatrixFormatError("column index out of range")
        if self.values is not None and len(self.values) != self.nnz:
            raise MatrixFormatError("values length disagrees with row_start")
        return self


# ---------------------------------------------------------------------------
# Matrix Market


def load_matrix_market(path) -> CsrMatrix:
    """Read a Matrix Market coordinate file.

    Supports ``pattern``/``real``/``integer`` fields and
    ``general``/``symmetric`` symmetry.  Symmetric inputs are expanded to
    full storage (diagonal entries are not duplicated); duplicate
    coordinates are merged.  1-based file indices become 0-based.
    """
    with open(path, "r") as fh:
        text = fh.read()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MatrixFormatError(f"{path}: empty file")
    banner = lines[0].split()
    if len(banner) != 5 or banner[0].lower() != "%%matrixmarket" or banner[1].lower() != "matrix":
        raise MatrixFormatError(f"{path}: not a Matrix Market file")
    layout, fieldkind, symmetry = (w.lower() for w in banner[2:5])
    if layout != "coordinate":
        raise MatrixFormatError(f"{path}: only coordinate layout is supported")
    if fieldkind not in ("pattern", "real", "integer"):
        raise MatrixFormatError(f"{path}: unsupported field {fieldkind!r}")
    if symmetry not in ("general", "symmetric"):
        raise MatrixFormatError(f"{path}: unsupported symmetry {symmetry!r}")

    body = [ln for ln in lines[1:] if not ln.lstrip().startswith("%")]
    if not body:
        raise MatrixFormatError(f"{path}: missing size line")
    try:
        sizes = [int(tok) for tok in body[0].split()]
    except ValueError as exc:
        raise MatrixFormatError(f"{path}: bad size line {body[0]!r}") from exc
    if len(sizes) != 3:
        raise MatrixFormatError(f"{path}: size line must be 'rows cols nnz'")
    m, n, declared = sizes
    if m <= 0 or n <= 0:
        raise MatrixFormatError(f"{path}: matrix is empty ({m} x {n})")
    if len(body) - 1 != declared:
        raise MatrixFormatError(
            f"{path}: {len(body) - 1} entries but header declares {declared}"
        )

    want_vals = fieldkind != "pattern"
    if declared == 0:
        data = np.zeros((0, 3 if want_vals else 2))
    else:
        try:
            data = np.loadtxt(io.StringIO("\n".join(body[1:])), ndmin=2)
        except ValueError as exc:
            raise MatrixFormatError(f"{path}: unparsable entry line") from exc
    if data.shape[1] != (3 if want_vals else 2):
        raise MatrixFormatError(f"{path}: wrong number of columns for {fieldkind}")

    rows = data[:, 0].astype(np.int64) - 1
    cols = data[:, 1].astype(np.int64) - 1
    vals = data[:, 2].copy() if want_vals else None
    if len(rows) and (
        rows.min() < 0 or cols.min() < 0 or rows.max() >= m or cols.max() >= n
    ):
        raise MatrixFormatError(f"{path}: entry index out of bounds")

    if symmetry == "symmetric":
        off = rows != cols
        rows = np.concatenate([rows, cols[off]])
        cols_new = np.concatenate([cols, data[off, 0].astype(np.int64) - 1])
        if vals is not None:
            vals = np.concatenate([vals, vals[off]])
        cols = cols_new

    try:
        return CsrMatrix.from_coo(m, n, rows, cols, vals)
    except MatrixFormatError:
        raise
    except ValueError as exc:
        raise MatrixFormatError(f"{path}: {exc}") from exc


def save_matrix_market(path, A: CsrMatrix) -> None:
    """Write ``A`` in Matrix Market coordinate format (1-based)."""
    fieldkind = "pattern" if A.values is None else "real"
    rows = np.repeat(np.arange(A.nrows), np.diff(A.row_start))
    with open(path, "w") as fh:
        fh.write(f"%%MatrixMarket matrix coordinate {fieldkind} general\n")
        fh.write(f"{A.nrows} {A.ncols} {A.nnz}\n")
        if A.values is None:
            for r, c in zip(rows + 1, A.col_idx + 1):
                fh.write(f"{r} {c}\n")
        else:
            for r, c, v in zip(rows + 1, A.col_idx + 1, A.values):
                fh.write(f"{r} {c} {v:.17g}\n")


# ---------------------------------------------------------------------------
# structural primitives


def transpose(A: CsrMatrix) -> CsrMatrix:
    """Transpose; entry order within rows of the result stays ascending."""
    rows = np.repeat(np.arange(A.nrows), np.diff(A.row_start))
    return CsrMatrix.from_coo(A.ncols, A.nrows, A.col_idx, rows, A.values)


def spmv(A: CsrMatrix, x: np.ndarray) -> np.ndarray:
    """Sparse matrix-vector product ``A @ x`` (pattern entries count as 1)."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (A.ncols,):
        raise ValueError(f"x has shape {x.shape}, expected ({A.ncols},)")
    contrib = x[A.col_idx] if A.values is None else A.values * x[A.col_idx]
    y = np.zeros(A.nrows)
    nonempty = np.flatnonzero(np.diff(A.row_start) > 0)
    if len(nonempty):
        y[nonempty] = np.add.reduceat(contrib, A.row_start[nonempty])
    return y


@dataclass
class Links:
    """Pairs of consecutive nonzero rows within a column.

    ``upper[q] < lower[q]`` always; pairs are ordered by ``lower``.
    """

    upper: np.ndarray
    lower: np.ndarray

    def __len__(self) -> int:
        return len(self.upper)


def compute_links(A: CsrMatrix) -> Links:
    """Consecutive-row pairs per column, sorted by the lower (later) row.

    A column whose nonzero rows are ``r_1 < r_2 < ... < r_k`` contributes
    the pairs ``(r_1, r_2), ..., (r_{k-1}, r_k)``; the total count is
    ``nnz`` minus the number of nonempty columns.
    """
    T = transpose(A)
    deg = np.diff(T.row_start)
    not_last = np.ones(T.nnz, dtype=bool)
    ends = T.row_start[1:][deg > 0] - 1
    not_last[ends] = False
    upper = T.col_idx[not_last]
    not_first = np.ones(T.nnz, dtype=bool)
    not_first[T.row_start[:-1][deg > 0]] = False
    lower = T.col_idx[not_first]
    order = np.argsort(lower, kind="stable")
    return Links(upper[order], lower[order])


@dataclass
class ColumnExtents:
    """First and last nonzero row per nonempty column (ascending column)."""

    col: np.ndarray
    first_row: np.ndarray
    last_row: np.ndarray

    def __len__(self) -> int:
        return len(self.col)


def column_extents(A: CsrMatrix) -> ColumnExtents:
    T = transpose(A)
    deg = np.diff(T.row_start)
    nonempty = np.flatnonzero(deg > 0)
    first = T.col_idx[T.row_start[:-1][nonempty]]
    last = T.col_idx[T.row_start[1:][nonempty] - 1]
    return ColumnExtents(nonempty, first, last)


@dataclass
class RankPoints:
    """Points mapped to dense rank coordinates (ties share a rank)."""

    x_rank: np.ndarray
    y_rank: np.ndarray
    x_values: np.ndarray = field(repr=False, default=None)
    y_values: np.ndarray = field(repr=False, default=None)

    def __len__(self) -> int:
        return len(self.x_rank)


def rank_space_transform(xs, ys) -> RankPoints:
    """Map points to their dense coordinate ranks.

    Order between points with distinct coordinates is preserved exactly, so
    dominance counts over the ranked points equal counts over the originals
    when queries are translated the same way (see ``RankSpaceCounter``).
    """
    xs = np.asarray(xs)
    ys = np.asarray(ys)
    ux, xr = np.unique(xs, return_inverse=True)
    uy, yr = np.unique(ys, return_inverse=True)
    return RankPoints(xr.astype(np.int64), yr.astype(np.int64), ux, uy)
