"""Merging unprojected sections into one frame."""

from __future__ import annotations

import concurrent.futures
from collections.abc import Sequence

import numpy as np
from scipy.spatial import cKDTree

from xpcc.atlas.models import Atlas
from xpcc.atlas.packer import unpack
from xpcc.cloud.model import DEFAULT_BIT_DEPTH, PointCloud, coordinate_keys, first_occurrence
from xpcc.reconstruct.unproject import SectionPoints, unproject
from xpcc.utils.logging import get_logger

logger = get_logger(__name__)


def merge_sections(
    parts: Sequence[SectionPoints],
    dedup_radius: int = 0,
    bit_depth: int = DEFAULT_BIT_DEPTH,
) -> PointCloud:
    """Concatenate sections in section_id order and drop duplicates.

    Exact duplicate coordinates keep the first occurrence, which is the one
    from the lower section_id. With dedup_radius > 0, a point within L-inf
    distance dedup_radius of a point already kept from an earlier section is
    dropped as well.

    Args:
        parts: Unprojected sections, in any order.
        dedup_radius: Chebyshev radius in voxels (0 = exact duplicates only).
        bit_depth: Bit depth of the resulting cloud.

    Returns:
        The merged frame.
    """
    if dedup_radius < 0:
        raise ValueError("dedup_radius must be non-negative")
    ordered = sorted(parts, key=lambda p: p.section_id)
    kept_points: list[np.ndarray] = []
    kept_colors: list[np.ndarray] = []
    total = sum(len(p) for p in ordered)
    for part in ordered:
        points, colors = part.points, part.colors
        if len(points) == 0:
            continue
        first = first_occurrence(points)
        points, colors = points[first], colors[first]
        if kept_points:
            earlier = np.concatenate(kept_points)
            if dedup_radius > 0:
                tree = cKDTree(earlier)
                dist, _ = tree.query(points, k=1, p=np.inf, distance_upper_bound=dedup_radius + 0.5)
                keep = ~np.isfinite(dist)
            else:
                keep = ~np.isin(coordinate_keys(points), coordinate_keys(earlier))
            points, colors = points[keep], colors[keep]
        kept_points.append(points)
        kept_colors.append(colors)
    if not kept_points:
        return PointCloud.empty(bit_depth)
    merged = PointCloud(np.concatenate(kept_points), np.concatenate(kept_colors), bit_depth)
    if len(merged) < total:
        logger.debug("sections_merged", points=len(merged), dropped=total - len(merged), radius=dedup_radius)
    return merged


def reconstruct_frame(
    atlas: Atlas,
    bit_depth: int = DEFAULT_BIT_DEPTH,
    dedup_radius: int = 0,
    threads: int = 1,
) -> PointCloud:
    """Unpack an atlas, unproject every section and merge them."""
    mapsets = unpack(atlas)
    if threads > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda m: unproject(m, bit_depth), mapsets))
    else:
        parts = [unproject(m, bit_depth) for m in mapsets]
    return merge_sections(parts, dedup_radius, bit_depth)
