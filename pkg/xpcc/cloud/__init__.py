"""Point cloud representation and PLY sequence I/O."""

from xpcc.cloud.model import DEFAULT_BIT_DEPTH, Aabb, PointCloud, Sequence, bounds
from xpcc.cloud.ply import PlyReadResult, expand_inputs, load_ply, load_sequence, read_ply, save_ply

__all__ = [
    "DEFAULT_BIT_DEPTH",
    "Aabb",
    "PointCloud",
    "PlyReadResult",
    "Sequence",
    "bounds",
    "expand_inputs",
    "load_ply",
    "load_sequence",
    "read_ply",
    "save_ply",
]
