"""MapSet and PlaneChoice: the per-section projection output."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from xpcc.segmentation.models import AxisName, SignedAxis


def pixel_axes(plane: SignedAxis) -> tuple[AxisName, AxisName]:
    """Voxel axes mapped to (map column, map row) for a projection plane."""
    return plane.axis.orthogonal


@dataclass(frozen=True)
class MapLayout:
    """Where a section's maps live in voxel space (everything unpack needs)."""

    section_id: int
    plane: SignedAxis
    origin: tuple[int, int, int]
    width: int
    height: int


@dataclass(eq=False)
class MapSet:
    """Occupancy, two depth layers and two attribute layers of one section.

    Arrays are indexed [row, column]; row runs along the second pixel axis.
    origin is (u0, w0, depth0): the column/row offsets and the depth of the
    near face along the plane direction.
    """

    section_id: int
    plane: SignedAxis
    origin: tuple[int, int, int]
    occupancy: npt.NDArray[np.uint8]
    d0: npt.NDArray[np.uint16]
    d1: npt.NDArray[np.uint16]
    a0: npt.NDArray[np.uint8]
    a1: npt.NDArray[np.uint8]
    lost_ids: npt.NDArray[np.int64] = field(default_factory=lambda: np.zeros(0, np.int64))

    @property
    def width(self) -> int:
        return int(self.occupancy.shape[1])

    @property
    def height(self) -> int:
        return int(self.occupancy.shape[0])

    @property
    def layout(self) -> MapLayout:
        return MapLayout(self.section_id, self.plane, self.origin, self.width, self.height)

    @property
    def occupied_pixels(self) -> int:
        return int(np.count_nonzero(self.occupancy))

    @property
    def captured_count(self) -> int:
        """Points recoverable from the maps: one per occupied pixel plus one per split pixel."""
        occ = self.occupancy.astype(bool)
        return int(occ.sum() + np.count_nonzero(occ & (self.d0 != self.d1)))

    @property
    def layer_count(self) -> int:
        """1 when the far layer repeats the near layer everywhere, else 2 (0 when empty)."""
        occ = self.occupancy.astype(bool)
        if not occ.any():
            return 0
        return 2 if np.any(self.d0[occ] != self.d1[occ]) else 1

    def same_maps(self, other: MapSet) -> bool:
        """Metadata and all five channels equal (lost_ids not compared)."""
        return (
            self.layout == other.layout
            and np.array_equal(self.occupancy, other.occupancy)
            and np.array_equal(self.d0, other.d0)
            and np.array_equal(self.d1, other.d1)
            and np.array_equal(self.a0, other.a0)
            and np.array_equal(self.a1, other.a1)
        )


@dataclass(frozen=True)
class PlaneChoice:
    """Best projection plane for a section and how much it keeps."""

    plane: SignedAxis
    unchanged_ratio: float
    lost_count: int
