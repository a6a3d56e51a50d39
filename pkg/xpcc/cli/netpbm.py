"""PGM/PPM dumps of maps and atlases for visual inspection."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import numpy.typing as npt

from xpcc.atlas.models import Atlas
from xpcc.projection.models import MapSet
from xpcc.utils.errors import IoFailureError


def _write(path: Path, header: str, body: bytes) -> Path:
    try:
        path.write_bytes(header.encode("ascii") + body)
    except OSError as exc:
        raise IoFailureError(f"cannot write {path}: {exc}", details={"path": str(path)}) from exc
    return path


def write_pgm(path: str | Path, image: npt.NDArray[np.integer]) -> Path:
    """8-bit PGM for uint8 images, 16-bit big-endian PGM otherwise."""
    height, width = image.shape
    if image.dtype == np.uint8:
        return _write(Path(path), f"P5\n{width} {height}\n255\n", image.tobytes())
    return _write(Path(path), f"P5\n{width} {height}\n65535\n", image.astype(">u2").tobytes())


def write_ppm(path: str | Path, image: npt.NDArray[np.uint8]) -> Path:
    height, width, _ = image.shape
    return _write(Path(path), f"P6\n{width} {height}\n255\n", np.ascontiguousarray(image, dtype=np.uint8).tobytes())


Array = npt.NDArray[np.generic]


def _dump(prefix: Path, occupancy: Array, d0: Array, d1: Array, a0: Array, a1: Array) -> list[Path]:
    return [
        write_pgm(f"{prefix}_occupancy.pgm", (occupancy.astype(np.uint8) * 255).astype(np.uint8)),
        write_pgm(f"{prefix}_d0.pgm", d0.astype(np.uint16)),
        write_pgm(f"{prefix}_d1.pgm", d1.astype(np.uint16)),
        write_ppm(f"{prefix}_a0.ppm", a0.astype(np.uint8)),
        write_ppm(f"{prefix}_a1.ppm", a1.astype(np.uint8)),
    ]


def dump_mapset(mapset: MapSet, directory: str | Path) -> list[Path]:
    """Write section_NNN_{occupancy,d0,d1}.pgm and _{a0,a1}.ppm."""
    prefix = Path(directory) / f"section_{mapset.section_id:03d}"
    return _dump(prefix, mapset.occupancy, mapset.d0, mapset.d1, mapset.a0, mapset.a1)


def dump_atlas(atlas: Atlas, directory: str | Path, name: str = "atlas") -> list[Path]:
    prefix = Path(directory) / name
    return _dump(
        prefix, atlas.occupancy, atlas.geometry_d0, atlas.geometry_d1, atlas.attribute_a0, atlas.attribute_a1
    )
