"""Section projection to occupancy, depth and attribute maps."""

from xpcc.projection.models import MapLayout, MapSet, PlaneChoice, pixel_axes
from xpcc.projection.projector import best_choice, choose_plane, evaluate_planes, project_section, unchanged_ratio

__all__ = [
    "MapLayout",
    "MapSet",
    "PlaneChoice",
    "best_choice",
    "choose_plane",
    "evaluate_planes",
    "pixel_axes",
    "project_section",
    "unchanged_ratio",
]
