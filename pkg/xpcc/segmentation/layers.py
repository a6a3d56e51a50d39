"""Depth-layer counting along a projection direction."""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

from xpcc.cloud.model import PointCloud
from xpcc.segmentation.models import Axis, AxisName, LayerProfile, SignedAxis


def column_layer_counts(
    points: npt.NDArray[np.int64],
    cut_axis: AxisName,
    proj_axis: SignedAxis,
    surface_thickness: int,
) -> tuple[npt.NDArray[np.int64], npt.NDArray[np.int64], npt.NDArray[np.int64]]:
    """Count depth clusters per pixel column.

    A column is every point sharing the two coordinates orthogonal to
    proj_axis; one of them is the cut-axis coordinate, so columns never span
    slabs. Consecutive sorted depths more than surface_thickness apart start
    a new cluster.

    Returns:
        (slab coordinate, other coordinate, cluster count) per column.
    """
    if proj_axis.axis == cut_axis:
        raise ValueError("projection axis must differ from the cut axis")
    empty = np.zeros(0, np.int64)
    if len(points) == 0:
        return empty, empty, empty
    other = next(a for a in AxisName if a not in (cut_axis, proj_axis.axis))
    slab = points[:, cut_axis]
    col = points[:, other]
    depth = points[:, proj_axis.axis]
    order = np.lexsort((depth, col, slab))
    slab, col, depth = slab[order], col[order], depth[order]

    new_column = np.ones(len(depth), dtype=bool)
    new_column[1:] = (slab[1:] != slab[:-1]) | (col[1:] != col[:-1])
    gap = np.zeros(len(depth), dtype=bool)
    gap[1:] = (depth[1:] - depth[:-1]) > surface_thickness
    starts_cluster = new_column | gap

    column_id = np.cumsum(new_column) - 1
    counts = np.bincount(column_id, weights=starts_cluster.astype(np.int64)).astype(np.int64)
    heads = np.flatnonzero(new_column)
    return slab[heads], col[heads], counts


def layer_profile(
    cloud: PointCloud,
    cut_axis: Axis | AxisName,
    proj_axis: SignedAxis,
    surface_thickness: int = 4,
) -> LayerProfile:
    """Per unit slab along cut_axis, the largest column cluster count."""
    cut = cut_axis.cut if isinstance(cut_axis, Axis) else AxisName(cut_axis)
    if len(cloud) == 0:
        return LayerProfile(lo=0)
    slabs, _, counts = column_layer_counts(cloud.points, cut, proj_axis, surface_thickness)
    lo = int(cloud.points[:, cut].min())
    hi = int(cloud.points[:, cut].max())
    profile = np.zeros(hi - lo + 1, dtype=np.int64)
    np.maximum.at(profile, slabs - lo, counts)
    return LayerProfile(lo=lo, max_layers=profile)
