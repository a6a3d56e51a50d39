"""Synthetic voxelized clouds with known structure.

Every shell is built ring by ring so that a column seen from +Z holds at
most two points, which makes the two-layer projection exact.
"""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

from xpcc.cloud.model import DEFAULT_BIT_DEPTH, PointCloud, Sequence
from xpcc.segmentation.models import Axis, AxisName, CrossSection, EllipseParams

IntArray = npt.NDArray[np.int64]


def ring(a: int, b: int) -> IntArray:
    """(du, dw) offsets of an elliptic ring, one or two points per du."""
    du = np.arange(-a, a + 1, dtype=np.int64)
    half = np.rint(b * np.sqrt(np.clip(1.0 - (du / a) ** 2, 0.0, None))).astype(np.int64)
    top = np.stack([du, half], axis=1)
    bottom = np.stack([du, -half], axis=1)[half > 0]
    offsets = np.concatenate([top, bottom])
    return offsets[np.lexsort((offsets[:, 1], offsets[:, 0]))]


def _colors(points: IntArray) -> npt.NDArray[np.uint8]:
    """RGB ramps along X, Y and Z across the bounding box."""
    lo = points.min(axis=0)
    span = np.maximum(points.max(axis=0) - lo, 1)
    return ((points - lo) * 255 // span).astype(np.uint8)


def _shell(
    rings: list[tuple[int, int, int]],
    center: tuple[int, int],
    y0: int,
    bit_depth: int,
) -> PointCloud:
    """Stack (a, b, rows) rings along +Y starting at y0, centered at (x, z)."""
    parts = []
    y = y0
    for a, b, rows in rings:
        offsets = ring(a, b)
        ys = np.repeat(np.arange(y, y + rows, dtype=np.int64), len(offsets))
        tiled = np.tile(offsets, (rows, 1))
        parts.append(np.stack([tiled[:, 0] + center[0], ys, tiled[:, 1] + center[1]], axis=1))
        y += rows
    points = np.concatenate(parts)
    return PointCloud(points, _colors(points), bit_depth)


def elliptic_shell(
    a: int = 30,
    b: int = 20,
    height: int = 84,
    center: tuple[int, int] = (100, 100),
    y0: int = 100,
    bit_depth: int = DEFAULT_BIT_DEPTH,
) -> PointCloud:
    """Upright elliptic cylinder shell; the defaults give 10,080 points."""
    return _shell([(a, b, height)], center, y0, bit_depth)


def stacked_cylinders(
    radii: tuple[int, int] = (10, 30),
    rows: int = 40,
    center: tuple[int, int] = (100, 100),
    y0: int = 100,
    bit_depth: int = DEFAULT_BIT_DEPTH,
) -> PointCloud:
    """Two coaxial circular shells on top of each other; the radius steps at y0 + rows."""
    return _shell([(r, r, rows) for r in radii], center, y0, bit_depth)


def nested_shells(
    radii: tuple[int, int] = (10, 20),
    height: int = 20,
    center: tuple[int, int] = (100, 100),
    y0: int = 100,
    bit_depth: int = DEFAULT_BIT_DEPTH,
) -> PointCloud:
    """Two coaxial shells sharing every slab: four depth layers seen from +Z."""
    offsets = np.unique(np.concatenate([ring(r, r) for r in radii]), axis=0)
    ys = np.repeat(np.arange(y0, y0 + height, dtype=np.int64), len(offsets))
    tiled = np.tile(offsets, (height, 1))
    points = np.stack([tiled[:, 0] + center[0], ys, tiled[:, 1] + center[1]], axis=1)
    return PointCloud(points, _colors(points), bit_depth)


def flat_plate(
    width: int = 10,
    height: int = 24,
    origin: tuple[int, int, int] = (50, 50, 50),
    bit_depth: int = DEFAULT_BIT_DEPTH,
) -> PointCloud:
    """A one-voxel-thick plate facing +Z, width along X and height along Y."""
    xs, ys = np.meshgrid(np.arange(width), np.arange(height), indexing="ij")
    points = np.stack([xs.ravel(), ys.ravel(), np.zeros(xs.size, np.int64)], axis=1) + np.asarray(origin)
    return PointCloud(points, _colors(points), bit_depth)


def hemicylinder(
    radius: int = 20,
    height: int = 30,
    center: tuple[int, int] = (100, 100),
    y0: int = 100,
    bit_depth: int = DEFAULT_BIT_DEPTH,
) -> PointCloud:
    """Every voxel within half a voxel of a half-cylinder facing +Z.

    The steep flanks stack several voxels per +Z column, so a single
    projection loses points there.
    """
    r = np.arange(-radius - 1, radius + 2)
    du, dw = np.meshgrid(r, r[r >= 0], indexing="ij")
    on_ring = np.abs(np.hypot(du, dw) - radius) < 0.5
    offsets = np.stack([du[on_ring], dw[on_ring]], axis=1).astype(np.int64)
    ys = np.repeat(np.arange(y0, y0 + height, dtype=np.int64), len(offsets))
    tiled = np.tile(offsets, (height, 1))
    points = np.stack([tiled[:, 0] + center[0], ys, tiled[:, 1] + center[1]], axis=1)
    return PointCloud(points, _colors(points), bit_depth)


def translating_sequence(
    frames: int = 10,
    step: tuple[int, int, int] = (1, 0, 0),
    base: PointCloud | None = None,
    frame_rate: float = 30.0,
) -> Sequence:
    """A rigid shape moving by step per frame; colors travel with their points."""
    cloud = base if base is not None else elliptic_shell()
    out = [cloud.translated((step[0] * i, step[1] * i, step[2] * i)) for i in range(frames)]
    return Sequence(frames=out, frame_rate=frame_rate, metadata={"motion": list(step)})


def large_cylinder() -> PointCloud:
    """1,000,000 points: a 400 x 300 elliptic shell, 625 rows tall, in a 10-bit grid."""
    return elliptic_shell(a=400, b=300, height=625, center=(500, 500), y0=0)


def random_cloud(rng: np.random.Generator, n: int, extent: int = 64, bit_depth: int = DEFAULT_BIT_DEPTH) -> PointCloud:
    """n distinct random voxels inside [0, extent)^3 with random colors."""
    flat = rng.choice(extent**3, size=n, replace=False)
    points = np.stack(np.unravel_index(flat, (extent, extent, extent)), axis=1).astype(np.int64)
    colors = rng.integers(0, 256, size=(n, 3), dtype=np.uint8)
    return PointCloud(points, colors, bit_depth)


def whole_section(cloud: PointCloud, cut: AxisName = AxisName.Y, section_id: int = 0) -> CrossSection:
    """One section holding every point of the cloud, with a placeholder ellipse."""
    coord = cloud.points[:, cut]
    return CrossSection(
        axis=Axis(cut),
        slab=(int(coord.min()), int(coord.max())),
        ellipse=EllipseParams((0.0, 0.0), 0.0, 0.0),
        point_ids=np.arange(len(cloud), dtype=np.int64),
        section_id=section_id,
    )
