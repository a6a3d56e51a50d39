"""Further segmentation of one cross-section into bands.

Bands run across the axis orthogonal to both the cut axis and the
section's best projection plane. Boundaries come from an exhaustive search
that keeps as many points as possible in D0/D1, each band judged on its own
best plane.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import numpy as np

from xpcc.cloud.model import PointCloud
from xpcc.projection.projector import choose_plane, evaluate_planes
from xpcc.segmentation.geometry import ellipse_of
from xpcc.segmentation.models import Axis, AxisName, CrossSection, SignedAxis
from xpcc.utils.errors import InvalidPartCountError, TooManyPartsError
from xpcc.utils.logging import get_logger

logger = get_logger(__name__)


def split_axis_for(cloud: PointCloud, section: CrossSection, plane: SignedAxis) -> AxisName:
    """Axis orthogonal to both the cut axis and the plane (longest extent if they coincide)."""
    cut = section.axis.cut
    if plane.axis != cut:
        return next(a for a in AxisName if a not in (cut, plane.axis))
    pts = cloud.points[section.point_ids]
    first, second = cut.orthogonal
    span_first = int(np.ptp(pts[:, first]))
    span_second = int(np.ptp(pts[:, second]))
    return first if span_first >= span_second else second


def subdivide(
    section: CrossSection,
    cloud: PointCloud,
    n_parts: int,
    candidate_planes: list[SignedAxis],
) -> list[CrossSection]:
    """Split a section into n_parts contiguous bands maximizing kept points.

    Ties go to the most balanced widths (smallest sum of squared widths),
    then to the lowest boundary positions.
    """
    if n_parts < 2:
        raise InvalidPartCountError("n_parts must be at least 2", details={"n_parts": n_parts})
    best_plane = choose_plane(cloud, section, candidate_planes).plane
    split = split_axis_for(cloud, section, best_plane)
    ids = section.point_ids
    coord = cloud.points[ids, split]
    slabs = np.unique(coord)
    n = len(slabs)
    if n_parts > n:
        raise TooManyPartsError(
            "section has fewer slabs than requested parts",
            details={"section_id": section.section_id, "slabs": n, "n_parts": n_parts},
        )
    band_axis = Axis(cut=split, main_view=section.axis.main_view)

    def band(i: int, j: int) -> CrossSection:
        lo, hi = int(slabs[i]), int(slabs[j - 1])
        member = ids[(coord >= lo) & (coord <= hi)]
        u, w = split.orthogonal
        return CrossSection(
            axis=band_axis,
            slab=(lo, hi),
            ellipse=ellipse_of(cloud.points[member][:, [u, w]]),
            point_ids=member,
            section_id=section.section_id,
        )

    @lru_cache(maxsize=None)
    def band_score(i: int, j: int) -> Fraction:
        sub = band(i, j)
        size = len(sub.point_ids)
        fewest_lost = min(c.lost_count for c in evaluate_planes(cloud, sub, candidate_planes))
        return Fraction(size - fewest_lost, size)

    best_key: tuple[Fraction, int, tuple[int, ...]] | None = None
    for cuts in combinations(range(1, n), n_parts - 1):
        edges = (0, *cuts, n)
        total = sum((band_score(a, b) for a, b in zip(edges, edges[1:])), Fraction(0))
        balance = sum((int(slabs[b - 1]) - int(slabs[a]) + 1) ** 2 for a, b in zip(edges, edges[1:]))
        key = (-total, balance, cuts)
        if best_key is None or key < best_key:
            best_key = key
    assert best_key is not None
    edges = (0, *best_key[2], n)
    parts = [band(a, b) for a, b in zip(edges, edges[1:])]
    logger.debug(
        "section_subdivided",
        section_id=section.section_id,
        split_axis=split.name,
        parts=n_parts,
        kept=float(-best_key[0]),
    )
    return parts
