"""Cross-sectional segmentation: cut axis, elliptic sections, overlap rows.

Further subdivision lives in xpcc.segmentation.subdivide, which depends on
the projection package and is therefore not re-exported here.
"""

from xpcc.segmentation.geometry import (
    ellipse_membership,
    fit_ellipse,
    ring_distance,
    section_center,
)
from xpcc.segmentation.layers import column_layer_counts, layer_profile
from xpcc.segmentation.models import (
    Axis,
    AxisName,
    CrossSection,
    EllipseParams,
    LayerProfile,
    SegmentationConfig,
    SignedAxis,
    candidate_planes,
)
from xpcc.segmentation.segmenter import apply_layout, renumber, segment, select_axis

__all__ = [
    "Axis",
    "AxisName",
    "CrossSection",
    "EllipseParams",
    "LayerProfile",
    "SegmentationConfig",
    "SignedAxis",
    "apply_layout",
    "candidate_planes",
    "column_layer_counts",
    "ellipse_membership",
    "fit_ellipse",
    "layer_profile",
    "renumber",
    "ring_distance",
    "section_center",
    "segment",
    "select_axis",
]
