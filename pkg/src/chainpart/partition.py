"""Partition containers shared by the solvers and the CLI.

Two shapes: :class:`SplitPartition` holds a contiguous row partition as a
split vector; :class:`MapPartition` holds an arbitrary item-to-part map
(used for column assignments).  JSON forms are 1-based at the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["InfeasibleError", "SplitPartition", "MapPartition"]


class InfeasibleError(Exception):
    """No partition satisfies the stated constraints."""


@dataclass
class SplitPartition:
    """Contiguous partition of ``num_items`` rows into ``K`` ranges.

    ``splits`` has ``K + 1`` nondecreasing entries with ``splits[0] == 0``
    and ``splits[-1] == num_items``; part ``k`` is ``[splits[k], splits[k+1])``.
    """

    num_items: int
    splits: np.ndarray

    @classmethod
    def from_splits(cls, num_items, splits) -> "SplitPartition":
        splits = np.asarray(splits, dtype=np.int64)
        if len(splits) < 2 or splits[0] != 0 or splits[-1] != num_items:
            raise ValueError(f"splits must run from 0 to {num_items}")
        if np.any(np.diff(splits) < 0):
            raise ValueError("splits must be nondecreasing")
        return cls(int(num_items), splits)

    @property
    def num_parts(self) -> int:
        return len(self.splits) - 1

    def ranges(self):
        """[(start, end)] per part."""
        return [
            (int(self.splits[k]), int(self.splits[k + 1]))
            for k in range(self.num_parts)
        ]

    def row_parts(self) -> np.ndarray:
        """Part id per row."""
        out = np.zeros(self.num_items, dtype=np.int64)
        for k, (a, b) in enumerate(self.ranges()):
            out[a:b] = k
        return out

    def to_dict(self) -> dict:
        return {
            "kind": "split",
            "K": self.num_parts,
            "splits": [int(s) + 1 for s in self.splits],
        }

    @classmethod
    def from_dict(cls, data) -> "SplitPartition":
        splits = [int(s) - 1 for s in data["splits"]]
        part = cls.from_splits(splits[-1], splits)
        if part.num_parts != int(data["K"]):
            raise ValueError("split count disagrees with K")
        return part


@dataclass
class MapPartition:
    """Arbitrary assignment of items to parts (0-based in memory)."""

    assign: np.ndarray
    num_parts: int

    @property
    def num_items(self) -> int:
        return len(self.assign)

    def to_dict(self) -> dict:
        return {
            "kind": "map",
            "K": int(self.num_parts),
            "assign": [int(p) + 1 for p in self.assign],
        }

    @classmethod
    def from_dict(cls, data) -> "MapPartition":
        assign = np.asarray([int(p) - 1 for p in data["assign"]], dtype=np.int64)
        num_parts = int(data["K"])
        if len(assign) and (assign.min() < 0 or assign.max() >= num_parts):
            raise ValueError("part id outside 1..K")
        return cls(assign, num_parts)


def load_partition(data) -> "SplitPartition | MapPartition":
    """Dispatch a parsed JSON document to the right container."""
    kind = data.get("kind")
    if kind == "split":
        return SplitPartition.from_dict(data)
    if kind == "map":
        return MapPartition.from_dict(data)
    raise ValueError(f"unknown partition kind {kind!r}")
