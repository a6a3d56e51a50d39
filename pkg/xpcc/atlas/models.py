"""Placement and Atlas: one packed 2D frame per point cloud frame."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from xpcc.projection.models import MapLayout


@dataclass(frozen=True)
class Placement:
    """Top-left corner of a map in the atlas; rotated maps are turned 90°."""

    section_id: int
    u: int
    v: int
    rotated: bool = False


@dataclass(eq=False)
class Atlas:
    """Composited channels of all sections of a frame."""

    width: int
    height: int
    placements: list[Placement] = field(default_factory=list)
    layouts: list[MapLayout] = field(default_factory=list)
    occupancy: npt.NDArray[np.uint8] = field(default_factory=lambda: np.zeros((0, 0), np.uint8))
    geometry_d0: npt.NDArray[np.uint16] = field(default_factory=lambda: np.zeros((0, 0), np.uint16))
    geometry_d1: npt.NDArray[np.uint16] = field(default_factory=lambda: np.zeros((0, 0), np.uint16))
    attribute_a0: npt.NDArray[np.uint8] = field(default_factory=lambda: np.zeros((0, 0, 3), np.uint8))
    attribute_a1: npt.NDArray[np.uint8] = field(default_factory=lambda: np.zeros((0, 0, 3), np.uint8))
    occupancy_ratio: float = 0.0

    @classmethod
    def blank(cls, width: int, height: int) -> Atlas:
        return cls(
            width=width,
            height=height,
            occupancy=np.zeros((height, width), np.uint8),
            geometry_d0=np.zeros((height, width), np.uint16),
            geometry_d1=np.zeros((height, width), np.uint16),
            attribute_a0=np.zeros((height, width, 3), np.uint8),
            attribute_a1=np.zeros((height, width, 3), np.uint8),
        )

    @property
    def area(self) -> int:
        return self.width * self.height

    def channels(self) -> dict[str, npt.NDArray[np.generic]]:
        return {
            "occupancy": self.occupancy,
            "d0": self.geometry_d0,
            "d1": self.geometry_d1,
            "a0": self.attribute_a0,
            "a1": self.attribute_a1,
        }

    def same_channels(self, other: Atlas) -> bool:
        return (self.width, self.height) == (other.width, other.height) and all(
            np.array_equal(a, b) for a, b in zip(self.channels().values(), other.channels().values())
        )

    def placement_table(self) -> list[dict[str, int | bool | str]]:
        """JSON-ready placement rows joined with map sizes."""
        by_id = {layout.section_id: layout for layout in self.layouts}
        rows: list[dict[str, int | bool | str]] = []
        for p in self.placements:
            layout = by_id.get(p.section_id)
            rows.append(
                {
                    "section_id": p.section_id,
                    "u": p.u,
                    "v": p.v,
                    "rotated": p.rotated,
                    "width": layout.width if layout else 0,
                    "height": layout.height if layout else 0,
                    "plane": layout.plane.value if layout else "",
                }
            )
        return rows
