"""
Dominance counting: the engine under the cost oracles
=====================================================

Every partitioning objective here reduces to questions of the form
"how many matrix entries (or column intervals) lie inside a 2-D
dominance region?".  The library answers them with compressed wavelet-
style counters over grid points: offline (build once, query anywhere),
online (a sliding row window), and a valued variant that sums weights
instead of counting.
"""

import numpy as np

from chainpart import (
    DominancePrefixSum,
    OfflineDominanceCounter,
    OnlineDominanceCounter,
    RankSpaceCounter,
    chazelle_params,
    constant_pass_params,
)

rng = np.random.default_rng(5)
n_points, grid = 5000, 512
xs = np.sort(rng.integers(0, grid, n_points))
ys = rng.integers(0, grid, n_points)

# count(x, y) = number of points with both coordinates <= the query.
counter = OfflineDominanceCounter(xs, ys, grid=(grid, grid))
print("points dominated by (255, 255):", counter.count(255, 255))
print("whole grid:", counter.count(grid - 1, grid - 1), "== n:", n_points)

# Two parameterizations trade passes against working-set size; both
# answer identically.
for params in (chazelle_params(grid), constant_pass_params(grid)):
    c2 = OfflineDominanceCounter(xs, ys, (grid, grid), params=params)
    assert c2.count(100, 300) == counter.count(100, 300)
print("both parameter families agree;",
      f"storage {counter.storage_words()['total']} words")

# Batched queries vectorize the digit walk.
qx = rng.integers(0, grid, 8)
qy = rng.integers(0, grid, 8)
print("batch:", counter.count_many(qx, qy).tolist())

# When coordinates are scattered (not grid-bounded), the rank-space
# wrapper compresses them first.
big = RankSpaceCounter(np.sort(rng.integers(0, 10**9, 100)),
                       rng.integers(0, 10**9, 100))
print("rank-space total:", big.count(10**9, 10**9))

# The online counter maintains the count of intervals fully inside a
# sliding window — extend the right edge, shrink the left.
starts = np.array([0, 1, 2, 4, 4])
ends = np.array([2, 1, 5, 4, 6])
online = OnlineDominanceCounter(starts, ends, 7)
inside = []
for e in range(7):
    online.extend()          # window is now [0, e]
    inside.append(online.count)
print("intervals inside [0, e] as e grows:", inside)

# The valued variant returns sums of point weights, not counts.
vals = rng.random(n_points)
sums = DominancePrefixSum(xs, ys, vals, (grid, grid))
want = vals[(xs <= 255) & (ys <= 255)].sum()
print(f"weighted corner sum {sums.sum(255, 255):.3f} == {want:.3f}")
