"""
Benchmarking strategies and reading performance profiles
========================================================

The bench harness runs named strategies over a directory of
MatrixMarket files and a grid of part counts, timing each run against
the matrix's own SpMV as the unit of work.  A performance profile then
summarizes quality: for each strategy, the fraction of (matrix, K)
cells it solves within a relative deviation of the per-cell best.

Everything here is also reachable from the installed ``chainpart``
command; the equivalent invocations are shown as comments.
"""

import tempfile
from pathlib import Path

import numpy as np

from chainpart import CsrMatrix, bench_suite, run_strategy, save_matrix_market
from chainpart.bench import performance_profile

rng = np.random.default_rng(31)

with tempfile.TemporaryDirectory() as tmp:
    suite = Path(tmp)
    for i, m in enumerate((60, 90, 120)):
        mask = rng.random((m, m)) < 0.08
        r, c = np.nonzero(mask)
        save_matrix_market(suite / f"rand{i}.mtx",
                           CsrMatrix.from_coo(m, m, r, c))

    # chainpart bench <dir> --strategies split-conn,split-equally \
    #     --k-grid 2,4 --balance 0.2 --out results.csv
    records, profile = bench_suite(
        suite, ["split-conn", "split-equally"], [2, 4], balance=0.2)

    print(f"{'matrix':>8} {'strategy':>14} {'K':>2} {'cost':>7} {'spmv x':>8}")
    for rec in records:
        print(f"{rec['matrix']:>8} {rec['strategy']:>14} {rec['K']:>2} "
              f"{rec['cost']:>7.0f} {rec['spmv_units']:>8.1f}")

    # The profile answers "how often is each strategy (nearly) best?".
    print(f"\n{'strategy':>14} {'dev':>5} {'fraction':>9}")
    for row in performance_profile(records, deviations=(0.0, 0.05, 0.2)):
        print(f"{row['strategy']:>14} {row['deviation']:>5} "
              f"{row['fraction']:>9.2f}")

# One-off runs skip the harness: run_strategy is the library face of
# `chainpart partition <matrix> --obj ... -K ...`.
mask = rng.random((80, 80)) < 0.1
r, c = np.nonzero(mask)
A = CsrMatrix.from_coo(80, 80, r, c)
res = run_strategy(A, "balance-conn", K=4, alg="exact")
print(f"\nbalance-conn exact on one matrix: bottleneck {res.cost:.0f}, "
      f"splits {res.partition.splits.tolist()}")
