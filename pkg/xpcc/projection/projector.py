"""Two-layer orthographic projection of cross-sections."""

from __future__ import annotations

import numpy as np

from xpcc.cloud.model import PointCloud
from xpcc.projection.models import MapSet, PlaneChoice, pixel_axes
from xpcc.segmentation.models import CrossSection, SignedAxis, candidate_planes
from xpcc.utils.errors import EmptySectionError
from xpcc.utils.logging import get_logger

logger = get_logger(__name__)


def project_section(cloud: PointCloud, section: CrossSection, plane: SignedAxis) -> MapSet:
    """Project a section onto an axis-aligned plane.

    Maps are tight around the section's bounding box. Depth grows away from
    the viewer. Per pixel column, the nearest point goes to D0 and the
    farthest to D1; with more than two points every point in between is lost.
    """
    if len(section.point_ids) == 0:
        raise EmptySectionError("cannot project an empty section", details={"section_id": section.section_id})
    ids = section.point_ids
    pts = cloud.points[ids]
    cols = cloud.colors[ids]
    col_axis, row_axis = pixel_axes(plane)
    k = plane.axis

    u0 = int(pts[:, col_axis].min())
    w0 = int(pts[:, row_axis].min())
    if plane.sign > 0:
        depth0 = int(pts[:, k].min())
        depth = pts[:, k] - depth0
    else:
        depth0 = int(pts[:, k].max())
        depth = depth0 - pts[:, k]
    u = pts[:, col_axis] - u0
    v = pts[:, row_axis] - w0
    width = int(u.max()) + 1
    height = int(v.max()) + 1

    pixel = v * width + u
    order = np.lexsort((depth, pixel))
    pixel_sorted = pixel[order]
    head = np.ones(len(order), dtype=bool)
    head[1:] = pixel_sorted[1:] != pixel_sorted[:-1]
    tail = np.ones(len(order), dtype=bool)
    tail[:-1] = head[1:]
    lost = order[~head & ~tail]

    near = order[head]
    far = order[tail]
    occupancy = np.zeros(height * width, np.uint8)
    d0 = np.zeros(height * width, np.uint16)
    d1 = np.zeros(height * width, np.uint16)
    a0 = np.zeros((height * width, 3), np.uint8)
    a1 = np.zeros((height * width, 3), np.uint8)
    occupancy[pixel[near]] = 1
    d0[pixel[near]] = depth[near]
    d1[pixel[far]] = depth[far]
    a0[pixel[near]] = cols[near]
    a1[pixel[far]] = cols[far]

    mapset = MapSet(
        section_id=section.section_id,
        plane=plane,
        origin=(u0, w0, depth0),
        occupancy=occupancy.reshape(height, width),
        d0=d0.reshape(height, width),
        d1=d1.reshape(height, width),
        a0=a0.reshape(height, width, 3),
        a1=a1.reshape(height, width, 3),
        lost_ids=np.sort(ids[lost]),
    )
    if len(lost):
        logger.debug("section_points_lost", section_id=section.section_id, plane=plane.value, lost=len(lost))
    return mapset


def unchanged_ratio(mapset: MapSet, section_size: int) -> float:
    """Fraction of a section's points that land in D0 or D1."""
    if section_size < 1:
        raise ValueError("section_size must be at least 1")
    return (section_size - len(mapset.lost_ids)) / section_size


def choose_plane(
    cloud: PointCloud,
    section: CrossSection,
    candidates: list[SignedAxis] | None = None,
) -> PlaneChoice:
    """Pick the plane keeping the most points (ties: fewer lost, then candidate order)."""
    return best_choice(evaluate_planes(cloud, section, candidates))


def best_choice(choices: list[PlaneChoice]) -> PlaneChoice:
    """Highest unchanged ratio, then fewest lost; the earliest candidate wins ties."""
    best = choices[0]
    for choice in choices[1:]:
        if (choice.unchanged_ratio, -choice.lost_count) > (best.unchanged_ratio, -best.lost_count):
            best = choice
    return best


def evaluate_planes(
    cloud: PointCloud,
    section: CrossSection,
    candidates: list[SignedAxis] | None = None,
) -> list[PlaneChoice]:
    """Unchanged ratio and loss for every candidate plane, in candidate order."""
    planes = candidates or candidate_planes(section.axis.main_view)
    out = []
    for plane in planes:
        mapset = project_section(cloud, section, plane)
        out.append(PlaneChoice(plane, unchanged_ratio(mapset, len(section.point_ids)), len(mapset.lost_ids)))
    return out
