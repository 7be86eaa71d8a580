"""
Sparse matrices: building, file round trips, and SpMV
=====================================================

The library stores sparse matrices in compressed sparse row form
(CSR): a row-start offset array, a column-index array, and a value
array.  Everything downstream — cost oracles, partitioners, the
benchmark harness — works on this one type.
"""

import tempfile
from pathlib import Path

import numpy as np

from chainpart import CsrMatrix, load_matrix_market, save_matrix_market, spmv, transpose

# Build a small matrix from coordinate triplets.  Duplicate entries are
# summed, rows are kept sorted by column.
rows = np.array([0, 0, 1, 2, 2, 2, 3])
cols = np.array([0, 2, 1, 0, 2, 3, 3])
vals = np.array([1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0])
A = CsrMatrix.from_coo(4, 4, rows, cols, vals)

print("shape:", (A.nrows, A.ncols), " nnz:", A.nnz)
print("row degrees:", A.row_degrees())
print("dense pattern:\n", A.to_dense_pattern().astype(int))

# Matrix-vector product: y = A @ x.
x = np.arange(1.0, 5.0)
print("A @ [1..4] =", spmv(A, x))

# The transpose swaps the roles of rows and columns; transposing twice
# returns the original.
T = transpose(A)
print("A^T @ [1..4] =", spmv(T, x))

# MatrixMarket round trip: files use 1-based coordinates, one entry per
# line, with an optional value column.
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "demo.mtx"
    save_matrix_market(path, A)
    print("\nfile header:", path.read_text().splitlines()[0])
    B = load_matrix_market(path)
    print("round trip equal:",
          np.array_equal(A.to_dense_pattern(), B.to_dense_pattern()))
