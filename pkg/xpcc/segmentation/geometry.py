"""Ring distance, slab centers and elliptic-cylinder fitting."""

from __future__ import annotations

import math

import numpy as np
import numpy.typing as npt

from xpcc.cloud.model import PointCloud
from xpcc.segmentation.models import Axis, AxisName, EllipseParams
from xpcc.utils.errors import EmptySlabError


def _cut(axis: Axis | AxisName) -> AxisName:
    return axis.cut if isinstance(axis, Axis) else AxisName(axis)


def slab_points(cloud: PointCloud, axis: Axis | AxisName, slab: tuple[int, int]) -> npt.NDArray[np.int64]:
    """(u, w) coordinates of the points with lo <= coord <= hi along the cut axis."""
    cut = _cut(axis)
    coord = cloud.points[:, cut]
    mask = (coord >= slab[0]) & (coord <= slab[1])
    u, w = cut.orthogonal
    return cloud.points[mask][:, [u, w]]


def center_of(uw: npt.NDArray[np.int64]) -> tuple[float, float]:
    """Midpoint of the (u, w) extents."""
    if len(uw) == 0:
        raise EmptySlabError("slab holds no points")
    lo = uw.min(axis=0)
    hi = uw.max(axis=0)
    return (float(lo[0] + hi[0]) / 2.0, float(lo[1] + hi[1]) / 2.0)


def ellipse_of(uw: npt.NDArray[np.int64]) -> EllipseParams:
    """Ellipse whose semi-axes are the larger and smaller half-extents of uw."""
    center = center_of(uw)
    lo = uw.min(axis=0)
    hi = uw.max(axis=0)
    half_u = float(hi[0] - lo[0]) / 2.0
    half_w = float(hi[1] - lo[1]) / 2.0
    return EllipseParams(center=center, a=max(half_u, half_w), b=min(half_u, half_w))


def section_center(cloud: PointCloud, axis: Axis | AxisName, slab: tuple[int, int]) -> tuple[float, float]:
    """Center of a slab in the cut plane: ((u_min+u_max)/2, (w_min+w_max)/2)."""
    return center_of(slab_points(cloud, axis, slab))


def ring_distance(point: tuple[float, float], center: tuple[float, float]) -> float:
    """Euclidean distance in the cut plane."""
    return math.hypot(point[0] - center[0], point[1] - center[1])


def ring_distances(uw: npt.NDArray[np.int64], center: tuple[float, float]) -> npt.NDArray[np.float64]:
    """Vectorized ring_distance over many (u, w) rows."""
    return np.hypot(uw[:, 0] - center[0], uw[:, 1] - center[1])


def fit_ellipse(cloud: PointCloud, axis: Axis | AxisName, slab: tuple[int, int]) -> EllipseParams:
    """Fit the elliptic cylinder of a slab from its extents (a >= b)."""
    return ellipse_of(slab_points(cloud, axis, slab))


def ellipse_membership(d: float, ellipse: EllipseParams, tolerance: float) -> bool:
    """True iff b - tolerance <= d <= a + tolerance."""
    return ellipse.b - tolerance <= d <= ellipse.a + tolerance


def all_members(distances: npt.NDArray[np.float64], ellipse: EllipseParams, tolerance: float) -> bool:
    """Vectorized ellipse_membership: every distance inside the tolerant ring."""
    if len(distances) == 0:
        return True
    return bool(distances.min() >= ellipse.b - tolerance and distances.max() <= ellipse.a + tolerance)
