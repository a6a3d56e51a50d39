"""PointCloud, Aabb and Sequence: the voxelized frame representation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np
import numpy.typing as npt

from xpcc.utils.errors import (
    CoordinateRangeError,
    DuplicatePointError,
    EmptyCloudError,
    PointCloudError,
)

DEFAULT_BIT_DEPTH = 10

IntArray = npt.NDArray[np.int64]
ColorArray = npt.NDArray[np.uint8]


def coordinate_keys(points: IntArray) -> npt.NDArray[np.int64]:
    """Pack (x, y, z) rows into one int64 key per point (coordinates < 2^21)."""
    p = points.astype(np.int64, copy=False)
    return (p[:, 0] << 42) | (p[:, 1] << 21) | p[:, 2]


def first_occurrence(points: IntArray) -> npt.NDArray[np.int64]:
    """Indices of the first occurrence of every distinct coordinate, in input order."""
    if len(points) == 0:
        return np.zeros(0, dtype=np.int64)
    _, idx = np.unique(coordinate_keys(points), return_index=True)
    return np.sort(idx).astype(np.int64)


@dataclass(frozen=True, eq=False)
class PointCloud:
    """One voxelized frame: integer geometry plus 8-bit RGB per point.

    Arrays are made read-only on construction, so a cloud can be shared
    across threads.
    """

    points: IntArray
    colors: ColorArray
    bit_depth: int = DEFAULT_BIT_DEPTH

    def __post_init__(self) -> None:
        points = np.ascontiguousarray(np.asarray(self.points, dtype=np.int64).reshape(-1, 3))
        colors = np.ascontiguousarray(np.asarray(self.colors, dtype=np.uint8).reshape(-1, 3))
        if len(points) != len(colors):
            raise PointCloudError(
                "points and colors differ in length",
                details={"points": len(points), "colors": len(colors)},
            )
        if not 1 <= self.bit_depth <= 21:
            raise PointCloudError("bit_depth must lie in [1, 21]", details={"bit_depth": self.bit_depth})
        if len(points):
            limit = 1 << self.bit_depth
            if points.min() < 0 or points.max() >= limit:
                raise CoordinateRangeError(
                    "coordinate outside voxel grid",
                    details={"min": int(points.min()), "max": int(points.max()), "bit_depth": self.bit_depth},
                )
            if len(first_occurrence(points)) != len(points):
                raise DuplicatePointError("duplicate coordinates in point cloud")
        points.setflags(write=False)
        colors.setflags(write=False)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "colors", colors)

    @classmethod
    def empty(cls, bit_depth: int = DEFAULT_BIT_DEPTH) -> PointCloud:
        return cls(np.zeros((0, 3), np.int64), np.zeros((0, 3), np.uint8), bit_depth)

    def __len__(self) -> int:
        return len(self.points)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PointCloud):
            return NotImplemented
        return (
            self.bit_depth == other.bit_depth
            and np.array_equal(self.points, other.points)
            and np.array_equal(self.colors, other.colors)
        )

    __hash__ = None  # type: ignore[assignment]

    def subset(self, ids: npt.ArrayLike) -> PointCloud:
        """Return the cloud restricted to the given point indices."""
        idx = np.asarray(ids, dtype=np.int64)
        return PointCloud(self.points[idx], self.colors[idx], self.bit_depth)

    def translated(self, offset: tuple[int, int, int]) -> PointCloud:
        """Return a rigidly shifted copy (colors follow their points)."""
        return PointCloud(self.points + np.asarray(offset, dtype=np.int64), self.colors, self.bit_depth)

    def as_set(self) -> set[tuple[int, int, int, int, int, int]]:
        """Points with colors as a set of tuples, for order-free comparison."""
        rows = np.concatenate([self.points, self.colors.astype(np.int64)], axis=1)
        return {tuple(int(v) for v in row) for row in rows}  # type: ignore[misc]


@dataclass(frozen=True)
class Aabb:
    """Inclusive integer bounding box."""

    min: tuple[int, int, int]
    max: tuple[int, int, int]

    @property
    def extent(self) -> tuple[int, int, int]:
        """Number of voxels spanned per axis."""
        return (
            self.max[0] - self.min[0] + 1,
            self.max[1] - self.min[1] + 1,
            self.max[2] - self.min[2] + 1,
        )

    def contains(self, point: tuple[int, int, int]) -> bool:
        return all(self.min[i] <= point[i] <= self.max[i] for i in range(3))


def bounds(cloud: PointCloud) -> Aabb:
    """Componentwise min/max over all points."""
    if len(cloud) == 0:
        raise EmptyCloudError("bounds of an empty cloud")
    lo = cloud.points.min(axis=0)
    hi = cloud.points.max(axis=0)
    return Aabb(
        min=(int(lo[0]), int(lo[1]), int(lo[2])),
        max=(int(hi[0]), int(hi[1]), int(hi[2])),
    )


@dataclass
class Sequence:
    """An ordered list of frames sharing one bit depth."""

    frames: list[PointCloud]
    frame_rate: float = 30.0
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.frame_rate <= 0:
            raise PointCloudError("frame_rate must be positive", details={"frame_rate": self.frame_rate})
        depths = {f.bit_depth for f in self.frames}
        if len(depths) > 1:
            raise PointCloudError("frames disagree on bit_depth", details={"bit_depths": sorted(depths)})

    def __len__(self) -> int:
        return len(self.frames)

    @property
    def bit_depth(self) -> int:
        return self.frames[0].bit_depth if self.frames else DEFAULT_BIT_DEPTH
