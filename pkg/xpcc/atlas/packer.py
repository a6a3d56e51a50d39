"""Skyline bottom-left packing of section maps into an atlas, and its inverse."""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

from xpcc.atlas.models import Atlas, Placement
from xpcc.projection.models import MapLayout, MapSet
from xpcc.utils.errors import InconsistentMetadataError, MapTooWideError, ZeroAreaError
from xpcc.utils.logging import get_logger

logger = get_logger(__name__)

DEFAULT_ATLAS_WIDTH = 1024
DEFAULT_ALIGNMENT = 16


def _align(value: int, alignment: int) -> int:
    return -(-value // alignment) * alignment


class Skyline:
    """Lowest free row per column range, as (x, width, y) segments."""

    def __init__(self, width: int) -> None:
        self.width = width
        self.segments: list[tuple[int, int, int]] = [(0, width, 0)]

    def fit(self, w: int, h: int) -> tuple[int, int, int] | None:
        """Best (top after placement, x, y) for a w×h rectangle, or None if too wide."""
        if w > self.width:
            return None
        best: tuple[int, int, int] | None = None
        for x, _, _ in self.segments:
            if x + w > self.width:
                break
            y = max(sy for sx, sw, sy in self.segments if sx < x + w and sx + sw > x)
            candidate = (y + h, x, y)
            if best is None or candidate[:2] < best[:2]:
                best = candidate
        return best

    def place(self, x: int, w: int, top: int) -> None:
        updated: list[tuple[int, int, int]] = []
        for sx, sw, sy in self.segments:
            end = sx + sw
            if end <= x or sx >= x + w:
                updated.append((sx, sw, sy))
                continue
            if sx < x:
                updated.append((sx, x - sx, sy))
            if end > x + w:
                updated.append((x + w, end - x - w, sy))
        updated.append((x, w, top))
        updated.sort()
        merged: list[tuple[int, int, int]] = []
        for seg in updated:
            if merged and merged[-1][2] == seg[2] and merged[-1][0] + merged[-1][1] == seg[0]:
                px, pw, py = merged[-1]
                merged[-1] = (px, pw + seg[1], py)
            else:
                merged.append(seg)
        self.segments = merged

    @property
    def top(self) -> int:
        return max(sy for _, _, sy in self.segments)


def _footprint(mapset: MapSet | MapLayout, rotated: bool) -> tuple[int, int]:
    return (mapset.height, mapset.width) if rotated else (mapset.width, mapset.height)


def _skyline_placements(mapsets: list[MapSet], atlas_width: int) -> tuple[list[Placement], int]:
    skyline = Skyline(atlas_width)
    order = sorted(mapsets, key=lambda m: (-m.height, -m.width, m.section_id))
    placements: dict[int, Placement] = {}
    for m in order:
        options = [False] if m.width == m.height else [False, True]
        best: tuple[int, int, int, bool] | None = None
        for rotated in options:
            w, h = _footprint(m, rotated)
            fit = skyline.fit(w, h)
            if fit is None:
                continue
            key = (fit[0], fit[1], rotated)
            if best is None or key < (best[0], best[1], best[3]):
                best = (fit[0], fit[1], fit[2], rotated)
        if best is None:
            raise MapTooWideError(
                "map wider than the atlas in both orientations",
                details={"section_id": m.section_id, "width": m.width, "height": m.height, "atlas_width": atlas_width},
            )
        top, x, y, rotated = best
        skyline.place(x, _footprint(m, rotated)[0], top)
        placements[m.section_id] = Placement(section_id=m.section_id, u=x, v=y, rotated=rotated)
    return [placements[m.section_id] for m in mapsets], skyline.top if mapsets else 0


def _reusable(mapsets: list[MapSet], previous: Atlas | None, width: int) -> bool:
    if previous is None or previous.width != width:
        return False
    current = sorted((m.section_id, m.width, m.height) for m in mapsets)
    before = sorted((layout.section_id, layout.width, layout.height) for layout in previous.layouts)
    return current == before and len(previous.placements) == len(mapsets)


def _block(array: npt.NDArray[np.generic], rotated: bool) -> npt.NDArray[np.generic]:
    return np.rot90(array) if rotated else array


def pack(
    mapsets: list[MapSet],
    atlas_width: int = DEFAULT_ATLAS_WIDTH,
    alignment: int = DEFAULT_ALIGNMENT,
    previous: Atlas | None = None,
) -> Atlas:
    """Pack section maps into one atlas.

    Maps are sorted by decreasing height, then width, then section id; each
    goes where the skyline top ends lowest, trying the 90° turn too (ties:
    leftmost, then unrotated). With previous given and the same set of map
    sizes, the previous placements are reused unchanged.
    """
    if alignment < 1:
        raise ValueError("alignment must be at least 1")
    width = _align(atlas_width, alignment)
    reused = _reusable(mapsets, previous, width)
    if reused and previous is not None:
        by_id = {p.section_id: p for p in previous.placements}
        placements = [by_id[m.section_id] for m in mapsets]
        height = previous.height
    else:
        placements, used = _skyline_placements(mapsets, atlas_width)
        height = _align(used, alignment)

    atlas = Atlas.blank(width, height)
    atlas.placements = placements
    atlas.layouts = [m.layout for m in mapsets]
    for m, p in zip(mapsets, placements, strict=True):
        w, h = _footprint(m, p.rotated)
        rows, cols = slice(p.v, p.v + h), slice(p.u, p.u + w)
        atlas.occupancy[rows, cols] = _block(m.occupancy, p.rotated)
        atlas.geometry_d0[rows, cols] = _block(m.d0, p.rotated)
        atlas.geometry_d1[rows, cols] = _block(m.d1, p.rotated)
        atlas.attribute_a0[rows, cols] = _block(m.a0, p.rotated)
        atlas.attribute_a1[rows, cols] = _block(m.a1, p.rotated)
    atlas.occupancy_ratio = occupancy_ratio(atlas) if atlas.area else 0.0
    logger.debug(
        "atlas_packed",
        maps=len(mapsets),
        width=width,
        height=height,
        occupancy_ratio=round(atlas.occupancy_ratio, 4),
        reused=reused,
    )
    return atlas


def occupancy_ratio(atlas: Atlas) -> float:
    """Occupied pixels over atlas area."""
    if atlas.area == 0:
        raise ZeroAreaError("atlas has zero area")
    return int(np.count_nonzero(atlas.occupancy)) / atlas.area


def unpack(atlas: Atlas, mapset_dims: list[MapLayout] | None = None) -> list[MapSet]:
    """Cut the section maps back out of an atlas (exact inverse of pack)."""
    layouts = atlas.layouts if mapset_dims is None else mapset_dims
    by_id = {p.section_id: p for p in atlas.placements}
    out: list[MapSet] = []
    claimed = 0
    for layout in layouts:
        p = by_id.get(layout.section_id)
        if p is None:
            raise InconsistentMetadataError("no placement for section", details={"section_id": layout.section_id})
        w, h = _footprint(layout, p.rotated)
        if p.u < 0 or p.v < 0 or p.u + w > atlas.width or p.v + h > atlas.height:
            raise InconsistentMetadataError(
                "placement outside atlas",
                details={"section_id": layout.section_id, "u": p.u, "v": p.v, "w": w, "h": h},
            )
        rows, cols = slice(p.v, p.v + h), slice(p.u, p.u + w)
        k = -1 if p.rotated else 0
        occupancy = np.ascontiguousarray(np.rot90(atlas.occupancy[rows, cols], k))
        claimed += int(np.count_nonzero(occupancy))
        out.append(
            MapSet(
                section_id=layout.section_id,
                plane=layout.plane,
                origin=layout.origin,
                occupancy=occupancy,
                d0=np.ascontiguousarray(np.rot90(atlas.geometry_d0[rows, cols], k)),
                d1=np.ascontiguousarray(np.rot90(atlas.geometry_d1[rows, cols], k)),
                a0=np.ascontiguousarray(np.rot90(atlas.attribute_a0[rows, cols], k)),
                a1=np.ascontiguousarray(np.rot90(atlas.attribute_a1[rows, cols], k)),
            )
        )
    if claimed != int(np.count_nonzero(atlas.occupancy)):
        raise InconsistentMetadataError(
            "occupied pixels outside placements",
            details={"claimed": claimed, "occupied": int(np.count_nonzero(atlas.occupancy))},
        )
    return out
