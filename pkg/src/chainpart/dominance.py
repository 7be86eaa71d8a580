"""Dominance counting over grid points.

Three counters cover the access patterns the partitioners need:

* :class:`OnlineDominanceCounter` — interval points swept by a moving
  window; O(1) amortized per window step.
* :class:`OfflineDominanceCounter` — static points, arbitrary corner
  queries ``#{p : x_p <= x, y_p <= y}`` answered in a constant number of
  passes over cached digit ranks.
* :class:`RankSpaceCounter` — the offline counter behind a coordinate
  compression, for points far sparser than their grid.

:class:`DominancePrefixSum` generalizes the offline counter from counts to
sums of per-point values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import dominance_count_batch
from .matrix import rank_space_transform

__all__ = [
    "CounterParams",
    "chazelle_params",
    "constant_pass_params",
    "OnlineDominanceCounter",
    "OfflineDominanceCounter",
    "RankSpaceCounter",
    "DominancePrefixSum",
]


@dataclass(frozen=True)
class CounterParams:
    """Shape of the multi-pass structure.

    Parameters
    ----------
    passes : int
        Number of digit levels H.
    digit_bits : int
        Bits per digit b; one pass refines the query by one b-bit digit.
    stride_bits : int
        Rank caches are stored every ``2**stride_bits`` positions; queries
        scan at most that many digits past a cached position.
    """

    passes: int
    digit_bits: int
    stride_bits: int


def chazelle_params(grid_width: int) -> CounterParams:
    """Two-bit digits, as many passes as the grid needs.

    Favors small per-level caches; pass count grows logarithmically with
    ``grid_width``.
    """
    b = 2
    h = 1
    while 2 ** (h * b) < grid_width + 1:
        h += 1
    bp = 0
    while 2**bp < h:
        bp += 1
    return CounterParams(h, b, bp)


def constant_pass_params(grid_width: int) -> CounterParams:
    """Exactly three passes with digits wide enough to span the grid.

    The stride is the least power of two covering all digit values of all
    passes, which keeps total cache storage near one word per point.
    """
    h = 3
    b = 1
    while 2 ** (h * b) < grid_width + 1:
        b += 1
    bp = 0
    while 2**bp < h * 2**b:
        bp += 1
    return CounterParams(h, b, bp)


# ---------------------------------------------------------------------------


class OnlineDominanceCounter:
    """Count interval points inside a sliding window.

    Points are intervals ``(start, end)`` over ``num_positions`` slots; the
    window ``[start, end]`` counts points it fully contains.  The window
    starts empty at ``[0, -1]`` and supports three O(1)-amortized moves:
    ``extend`` (grow the right edge), ``shrink_front`` (grow the left edge
    backwards), and ``reset_to`` (collapse to the single slot at the right
    edge).
    """

    def __init__(self, starts, ends, num_positions: int):
        starts = np.asarray(starts, dtype=np.int64)
        ends = np.asarray(ends, dtype=np.int64)
        self.num_positions = int(num_positions)
        order = np.argsort(ends, kind="stable")
        self._starts_sorted = starts[order]
        ptr = np.zeros(self.num_positions + 1, dtype=np.int64)
        if len(ends):
            np.add.at(ptr, ends + 1, 1)
        np.cumsum(ptr, out=ptr)
        self._end_ptr = ptr
        self._delta = np.zeros(self.num_positions, dtype=np.int64)
        self.start = 0
        self.end = -1
        self.count = 0

    def extend(self) -> None:
        """Advance the right edge one slot, absorbing its points."""
        if self.end + 1 >= self.num_positions:
            raise IndexError("window right edge at the last position")
        self.end += 1
        group = self._starts_sorted[self._end_ptr[self.end] : self._end_ptr[self.end + 1]]
        if len(group):
            np.add.at(self._delta, group, 1)
            self.count += int(np.count_nonzero(group >= self.start))

    def shrink_front(self) -> None:
        """Move the left edge one slot backwards (the window grows)."""
        if self.start <= 0:
            raise IndexError("window left edge at position 0")
        self.start -= 1
        self.count += int(self._delta[self.start])

    def reset_to(self) -> None:
        """Collapse the window to the single slot at the right edge."""
        if self.end < 0:
            raise IndexError("window is empty")
        self.start = self.end
        self.count = int(self._delta[self.end])


# ---------------------------------------------------------------------------


class OfflineDominanceCounter:
    """Static corner-dominance counts ``#{p : x_p <= x, y_p <= y}``.

    Parameters
    ----------
    xs, ys : int arrays
        Point coordinates; ``xs`` must be nondecreasing.
    grid : (int, int)
        Exclusive coordinate bounds ``(gx, gy)``; queries accept
        ``-1 <= x < gx`` and ``-1 <= y < gy``.
    params : CounterParams, optional
        Structure shape; defaults to :func:`chazelle_params` on ``gy``.

    The y-coordinate is split into ``passes`` digits of ``digit_bits`` bits.
    For each level the points are stably ordered by their more-significant
    digits; a query walks one level per pass, adding the number of points
    whose digit at that level falls strictly below the query's digit, which
    a stride-cached rank plus a short scan yields in O(2**stride_bits).
    """

    def __init__(self, xs, ys, grid, params: CounterParams | None = None):
        xs = np.asarray(xs, dtype=np.int64)
        ys = np.asarray(ys, dtype=np.int64)
        gx, gy = int(grid[0]), int(grid[1])
        if params is None:
            params = chazelle_params(gy)
        h, b, bp = params.passes, params.digit_bits, params.stride_bits
        if h < 1 or b < 1 or bp < 0:
            raise ValueError(f"invalid parameters {params}")
        if 2 ** (h * b) < gy:
            raise ValueError(
                f"{params} covers values below {2 ** (h * b)}, grid needs {gy}"
            )
        if len(xs) and (xs.min() < 0 or xs.max() >= gx or ys.min() < 0 or ys.max() >= gy):
            raise ValueError("points out of grid bounds")
        if np.any(np.diff(xs) < 0):
            raise ValueError("xs must be nondecreasing")
        self.params = params
        self.grid = (gx, gy)
        n = len(xs)

        xp = np.zeros(gx + 1, dtype=np.int64)
        np.add.at(xp, xs + 1, 1)
        np.cumsum(xp, out=xp)
        self._x_prefix = xp

        span = 2 ** (h * b)
        bs = np.zeros(span + 1, dtype=np.int64)
        if n:
            bs[1:] = np.cumsum(np.bincount(ys, minlength=span))
        self._bucket_start = bs

        mask = (1 << b) - 1
        stride = 1 << bp
        n_stride = (n >> bp) + 1
        digits = np.zeros((h, n), dtype=np.uint8)
        cache = np.zeros((h, n_stride, mask), dtype=np.int64)
        for level in range(h - 1, -1, -1):
            if level == h - 1:
                ordered = ys  # high digits are all zero: base order already
            else:
                key = ys >> ((level + 1) * b)
                ordered = ys[np.argsort(key, kind="stable")]
            dig = (ordered >> (level * b)) & mask
            digits[level] = dig
            if n:
                chunk = np.arange(n, dtype=np.int64) >> bp
                hist = np.bincount(chunk * (mask + 1) + dig,
                                   minlength=n_stride * (mask + 1))
                hist = hist.reshape(n_stride, mask + 1)
                below = np.cumsum(np.cumsum(hist, axis=1), axis=0)
                cache[level, 1:, :] = below[:-1, :mask]
        self._digits = digits
        self._cache = cache

    def count(self, x: int, y: int) -> int:
        """Points dominated by ``(x, y)`` inclusively."""
        return int(self.count_many(np.array([x]), np.array([y]))[0])

    def count_many(self, qx, qy) -> np.ndarray:
        qx = np.asarray(qx, dtype=np.int64)
        qy = np.asarray(qy, dtype=np.int64)
        gx, gy = self.grid
        if len(qx) and (qx.min() < -1 or qx.max() >= gx or qy.min() < -1 or qy.max() >= gy):
            raise ValueError("query outside grid bounds")
        out = np.empty(len(qx), dtype=np.int64)
        p = self.params
        dominance_count_batch(qx, qy, self._x_prefix, self._bucket_start,
                              self._digits, self._cache, p.passes,
                              p.digit_bits, p.stride_bits, out)
        return out

    def storage_words(self) -> dict:
        """Model storage cost in machine words (digit arrays bit-packed)."""
        h, b, _ = self.params.passes, self.params.digit_bits, self.params.stride_bits
        n = self._digits.shape[1]
        words = {
            "x_prefix": len(self._x_prefix),
            "bucket_start": len(self._bucket_start),
            "digits": -(-(h * n * b) // 64),
            "cache": int(np.prod(self._cache.shape)),
        }
        words["total"] = sum(words.values())
        return words


# ---------------------------------------------------------------------------


class RankSpaceCounter:
    """Corner-dominance counts for points sparse in their coordinate range.

    Coordinates are compressed to dense ranks before building the offline
    counter, so storage scales with the number of points rather than the
    grid; queries translate through the same compression.
    """

    def __init__(self, xs, ys, params: CounterParams | None = None):
        xs = np.asarray(xs, dtype=np.int64)
        ys = np.asarray(ys, dtype=np.int64)
        pts = rank_space_transform(xs, ys)
        self._pts = pts
        gx = max(1, len(pts.x_values))
        gy = max(1, len(pts.y_values))
        self._counter = OfflineDominanceCounter(
            pts.x_rank, pts.y_rank, grid=(gx, gy), params=params
        )

    def count(self, x: int, y: int) -> int:
        rx = int(np.searchsorted(self._pts.x_values, x, side="right")) - 1
        ry = int(np.searchsorted(self._pts.y_values, y, side="right")) - 1
        return self._counter.count(rx, ry)


# ---------------------------------------------------------------------------


class DominancePrefixSum:
    """Sums of point values over dominated corners.

    Same layout as :class:`OfflineDominanceCounter` with the rank caches
    carrying value sums; count caches are kept alongside because the level
    descent still navigates by how many eligible points tie the query digit.
    Integer values stay exact (float64 holds integers below 2**53).
    """

    def __init__(self, xs, ys, values, grid, params: CounterParams | None = None):
        xs = np.asarray(xs, dtype=np.int64)
        ys = np.asarray(ys, dtype=np.int64)
        values = np.asarray(values, dtype=np.float64)
        gx, gy = int(grid[0]), int(grid[1])
        if params is None:
            params = chazelle_params(gy)
        h, b, bp = params.passes, params.digit_bits, params.stride_bits
        if 2 ** (h * b) < gy:
            raise ValueError(f"{params} cannot cover grid width {gy}")
        self.params = params
        self.grid = (gx, gy)
        n = len(xs)

        xp = np.zeros(gx + 1, dtype=np.int64)
        np.add.at(xp, xs + 1, 1)
        np.cumsum(xp, out=xp)
        self._x_prefix = xp

        span = 2 ** (h * b)
        bs = np.zeros(span + 1, dtype=np.int64)
        if n:
            bs[1:] = np.cumsum(np.bincount(ys, minlength=span))
        self._bucket_start = bs

        mask = (1 << b) - 1
        self._mask = mask
        self._stride = 1 << bp
        n_stride = (n >> bp) + 1
        self._digits = np.zeros((h, n), dtype=np.uint8)
        self._vals = np.zeros((h, n))
        self._ccache = np.zeros((h, n_stride, mask), dtype=np.int64)
        self._vcache = np.zeros((h, n_stride, mask))
        self._vtotal = np.zeros((h, n_stride))
        for level in range(h - 1, -1, -1):
            if level == h - 1:
                ordered, vord = ys, values
            else:
                sigma = np.argsort(ys >> ((level + 1) * b), kind="stable")
                ordered, vord = ys[sigma], values[sigma]
            dig = (ordered >> (level * b)) & mask
            self._digits[level] = dig
            self._vals[level] = vord
            if n:
                chunk = np.arange(n, dtype=np.int64) >> bp
                flat = chunk * (mask + 1) + dig
                hist = np.bincount(flat, minlength=n_stride * (mask + 1))
                vhist = np.bincount(flat, weights=vord,
                                    minlength=n_stride * (mask + 1))
                below = np.cumsum(np.cumsum(hist.reshape(n_stride, mask + 1), 1), 0)
                vbelow = np.cumsum(np.cumsum(vhist.reshape(n_stride, mask + 1), 1), 0)
                self._ccache[level, 1:, :] = below[:-1, :mask]
                self._vcache[level, 1:, :] = vbelow[:-1, :mask]
                self._vtotal[level, 1:] = vbelow[:-1, mask]

    def _rank(self, level, pos, d):
        """(count, value-sum) of digits < d and == d among the first pos."""
        t = pos // self._stride
        base = t * self._stride
        lt = int(self._ccache[level, t, d - 1]) if d > 0 else 0
        ltv = float(self._vcache[level, t, d - 1]) if d > 0 else 0.0
        if d + 1 <= self._mask:
            lt1, lt1v = int(self._ccache[level, t, d]), float(self._vcache[level, t, d])
        else:
            lt1, lt1v = base, float(self._vtotal[level, t])
        eq, eqv = lt1 - lt, lt1v - ltv
        seg = self._digits[level, base:pos]
        vseg = self._vals[level, base:pos]
        lt += int(np.count_nonzero(seg < d))
        ltv += float(vseg[seg < d].sum())
        eq += int(np.count_nonzero(seg == d))
        eqv += float(vseg[seg == d].sum())
        return lt, ltv, eq, eqv

    def sum(self, x: int, y: int) -> float:
        gx, gy = self.grid
        if not (-1 <= x < gx) or not (-1 <= y < gy):
            raise ValueError("query outside grid bounds")
        dq = int(self._x_prefix[x + 1])
        if dq == 0 or y < 0:
            return 0.0
        h, b = self.params.passes, self.params.digit_bits
        total = 0.0
        tie_value = 0.0
        for level in range(h - 1, -1, -1):
            sh = level * b
            d = (y >> sh) & self._mask
            vbase = (y >> (sh + b)) << (sh + b)
            q1 = int(self._bucket_start[vbase])
            q2 = q1 + dq
            lt1, ltv1, eq1, eqv1 = self._rank(level, q1, d)
            lt2, ltv2, eq2, eqv2 = self._rank(level, q2, d)
            total += ltv2 - ltv1
            dq = eq2 - eq1
            tie_value = eqv2 - eqv1
            if dq == 0:
                return total
        return total + tie_value

    def sum_many(self, qx, qy) -> np.ndarray:
        return np.array([self.sum(int(x), int(y)) for x, y in zip(qx, qy)])
