"""PLY reader and writer for voxelized colored point clouds.

Reads ascii and binary_little_endian files through plyfile; other elements
and extra vertex properties are ignored. Always writes binary little-endian
with float32 coordinates holding exact integers and uchar colors.
"""

from __future__ import annotations

import glob as globlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import numpy.typing as npt
from plyfile import PlyData, PlyElement, PlyListProperty, PlyParseError

from xpcc.cloud.model import DEFAULT_BIT_DEPTH, PointCloud, Sequence, first_occurrence
from xpcc.utils.errors import (
    CoordinateRangeError,
    IoFailureError,
    MalformedHeaderError,
    MissingPropertyError,
    UnsupportedFormatError,
)
from xpcc.utils.logging import get_logger

logger = get_logger(__name__)

_GEOMETRY = ("x", "y", "z")
_COLOR = ("red", "green", "blue")
_VERTEX_DTYPE = np.dtype([("x", "<f4"), ("y", "<f4"), ("z", "<f4"), ("red", "u1"), ("green", "u1"), ("blue", "u1")])


@dataclass
class PlyReadResult:
    """A loaded cloud plus what loading had to change."""

    cloud: PointCloud
    duplicates_dropped: int
    source_format: str


def _round_half_away(values: npt.NDArray[np.float64]) -> npt.NDArray[np.int64]:
    return (np.sign(values) * np.floor(np.abs(values) + 0.5)).astype(np.int64)


def _vertex_columns(ply: PlyData, path: str) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    if "vertex" not in ply:
        raise MissingPropertyError("no vertex element", details={"path": path})
    vertex = ply["vertex"]
    scalar = {p.name for p in vertex.properties if not isinstance(p, PlyListProperty)}
    missing = [p for p in (*_GEOMETRY, *_COLOR) if p not in scalar]
    if missing:
        raise MissingPropertyError("vertex lacks required properties", details={"missing": missing})
    data = vertex.data
    xyz = np.stack([np.asarray(data[n], dtype=np.float64) for n in _GEOMETRY], axis=1).reshape(-1, 3)
    rgb = np.stack([np.asarray(data[n], dtype=np.float64) for n in _COLOR], axis=1).reshape(-1, 3)
    return xyz, rgb


def read_ply(path: str | Path, bit_depth: int = DEFAULT_BIT_DEPTH) -> PlyReadResult:
    """Read a PLY file, rounding float coordinates and colors and dropping duplicates.

    Args:
        path: File to read.
        bit_depth: Geometry bit depth the coordinates must fit.

    Returns:
        PlyReadResult with the cloud and the number of dropped duplicates.
    """
    try:
        ply = PlyData.read(str(path), mmap=False)
    except OSError as exc:
        raise IoFailureError(f"cannot read {path}: {exc}", details={"path": str(path)}) from exc
    except (PlyParseError, UnicodeDecodeError) as exc:
        raise MalformedHeaderError(f"malformed PLY: {exc}", details={"path": str(path)}) from exc

    if ply.text:
        fmt = "ascii"
    elif ply.byte_order == "<":
        fmt = "binary_little_endian"
    else:
        raise UnsupportedFormatError(
            "unsupported PLY format", details={"path": str(path), "byte_order": ply.byte_order}
        )

    xyz, rgb = _vertex_columns(ply, str(path))
    points = _round_half_away(xyz)
    colors = _round_half_away(np.clip(rgb, 0, 255)).astype(np.uint8)
    if len(points) and (points.min() < 0 or points.max() >= (1 << bit_depth)):
        raise CoordinateRangeError(
            "coordinate outside voxel grid",
            details={"path": str(path), "bit_depth": bit_depth},
        )

    keep = first_occurrence(points)
    dropped = len(points) - len(keep)
    cloud = PointCloud(points[keep], colors[keep], bit_depth)
    if dropped:
        logger.warning("duplicates_dropped", path=str(path), dropped=dropped)
    logger.debug("ply_loaded", path=str(path), points=len(cloud), format=fmt)
    return PlyReadResult(cloud=cloud, duplicates_dropped=dropped, source_format=fmt)


def load_ply(path: str | Path, bit_depth: int = DEFAULT_BIT_DEPTH) -> PointCloud:
    """Load a PLY file as a PointCloud (see read_ply)."""
    return read_ply(path, bit_depth).cloud


def save_ply(cloud: PointCloud, path: str | Path) -> None:
    """Write a binary little-endian PLY."""
    body = np.empty(len(cloud), dtype=_VERTEX_DTYPE)
    for i, name in enumerate(_GEOMETRY):
        body[name] = cloud.points[:, i]
    for i, name in enumerate(_COLOR):
        body[name] = cloud.colors[:, i]
    ply = PlyData([PlyElement.describe(body, "vertex")], text=False, byte_order="<")
    try:
        ply.write(str(path))
    except OSError as exc:
        raise IoFailureError(f"cannot write {path}: {exc}", details={"path": str(path)}) from exc


def expand_inputs(patterns: list[str]) -> list[Path]:
    """Resolve paths and glob patterns to a sorted, de-duplicated file list."""
    found: list[Path] = []
    for pattern in patterns:
        matches = sorted(globlib.glob(pattern))
        if not matches:
            raise IoFailureError(f"no input matches {pattern}", details={"pattern": pattern})
        found.extend(Path(m) for m in matches)
    return list(dict.fromkeys(found))


def load_sequence(
    patterns: list[str],
    bit_depth: int = DEFAULT_BIT_DEPTH,
    frame_rate: float = 30.0,
) -> Sequence:
    """Load every file matched by the patterns as one sequence."""
    paths = expand_inputs(patterns)
    frames = [load_ply(p, bit_depth) for p in paths]
    return Sequence(frames=frames, frame_rate=frame_rate, metadata={"paths": [str(p) for p in paths]})
