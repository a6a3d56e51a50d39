"""Atlas packing of section maps."""

from xpcc.atlas.models import Atlas, Placement
from xpcc.atlas.packer import DEFAULT_ALIGNMENT, DEFAULT_ATLAS_WIDTH, Skyline, occupancy_ratio, pack, unpack

__all__ = [
    "DEFAULT_ALIGNMENT",
    "DEFAULT_ATLAS_WIDTH",
    "Atlas",
    "Placement",
    "Skyline",
    "occupancy_ratio",
    "pack",
    "unpack",
]
