"""Maps back to points: the inverse of the two-layer projection."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from xpcc.projection.models import MapSet, pixel_axes
from xpcc.utils.errors import InconsistentMapsError


@dataclass(eq=False)
class SectionPoints:
    """Points and colors recovered from one section's maps."""

    section_id: int
    points: npt.NDArray[np.int64] = field(default_factory=lambda: np.zeros((0, 3), np.int64))
    colors: npt.NDArray[np.uint8] = field(default_factory=lambda: np.zeros((0, 3), np.uint8))

    def __len__(self) -> int:
        return len(self.points)


def _check(mapset: MapSet) -> None:
    shape = mapset.occupancy.shape
    problems = {
        name: arr.shape
        for name, arr, want in (
            ("d0", mapset.d0, shape),
            ("d1", mapset.d1, shape),
            ("a0", mapset.a0, (*shape, 3)),
            ("a1", mapset.a1, (*shape, 3)),
        )
        if arr.shape != want
    }
    if problems:
        raise InconsistentMapsError(
            "map shapes disagree with occupancy",
            details={"section_id": mapset.section_id, "occupancy": shape, **{k: list(v) for k, v in problems.items()}},
        )
    if mapset.occupancy.size and int(mapset.occupancy.max()) > 1:
        raise InconsistentMapsError("occupancy is not binary", details={"section_id": mapset.section_id})
    occ = mapset.occupancy.astype(bool)
    if np.any(mapset.d1[occ] < mapset.d0[occ]):
        raise InconsistentMapsError("far layer in front of near layer", details={"section_id": mapset.section_id})


def unproject(mapset: MapSet, bit_depth: int | None = None) -> SectionPoints:
    """Emit the D0 point of every occupied pixel, plus its D1 point where d1 != d0.

    Near-layer points come first, both in row-major pixel order. With
    bit_depth given, coordinates are clipped into the voxel grid.
    """
    _check(mapset)
    rows, cols = np.nonzero(mapset.occupancy)
    d0 = mapset.d0[rows, cols].astype(np.int64)
    d1 = mapset.d1[rows, cols].astype(np.int64)
    split = d1 != d0

    v = np.concatenate([rows, rows[split]]).astype(np.int64)
    u = np.concatenate([cols, cols[split]]).astype(np.int64)
    depth = np.concatenate([d0, d1[split]])
    colors = np.concatenate([mapset.a0[rows, cols], mapset.a1[rows, cols][split]]).astype(np.uint8)

    col_axis, row_axis = pixel_axes(mapset.plane)
    u0, w0, depth0 = mapset.origin
    points = np.empty((len(depth), 3), np.int64)
    points[:, col_axis] = u0 + u
    points[:, row_axis] = w0 + v
    points[:, mapset.plane.axis] = depth0 + mapset.plane.sign * depth
    if bit_depth is not None:
        np.clip(points, 0, (1 << bit_depth) - 1, out=points)
    return SectionPoints(section_id=mapset.section_id, points=points, colors=colors.reshape(-1, 3))
