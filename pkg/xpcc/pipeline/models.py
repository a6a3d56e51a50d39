"""Per-frame analysis results and pipeline outputs."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from xpcc.atlas.models import Atlas
from xpcc.cloud.model import PointCloud
from xpcc.codec.models import Bitstream, DecodedSequence
from xpcc.projection.models import MapSet, PlaneChoice
from xpcc.segmentation.models import Axis, CrossSection, LayerProfile, SignedAxis


@dataclass(eq=False)
class SectionReport:
    """One final section: its plane choice, every candidate's score and its maps."""

    section: CrossSection
    choice: PlaneChoice
    candidates: list[PlaneChoice]
    mapset: MapSet
    profile: LayerProfile
    parent_id: int
    profile_plane: SignedAxis

    def describe(self) -> dict[str, Any]:
        return {
            **self.section.describe(),
            "parent_id": self.parent_id,
            "plane": self.choice.plane.value,
            "unchanged_ratio": self.choice.unchanged_ratio,
            "lost_points": self.choice.lost_count,
            "candidates": [
                {"plane": c.plane.value, "unchanged_ratio": c.unchanged_ratio, "lost_points": c.lost_count}
                for c in self.candidates
            ],
            "layer_profile": {
                "projection": self.profile_plane.value,
                "first_slab": self.profile.lo,
                "max_layers": self.profile.max_layers.tolist(),
            },
            "map": {"width": self.mapset.width, "height": self.mapset.height, "layers": self.mapset.layer_count},
        }


@dataclass(eq=False)
class FrameAnalysis:
    """Segmentation and projection of one frame."""

    cloud: PointCloud
    axis: Axis
    layout: list[CrossSection]
    reports: list[SectionReport] = field(default_factory=list)
    reused_layout: bool = False

    @property
    def sections(self) -> list[CrossSection]:
        return [r.section for r in self.reports]

    @property
    def mapsets(self) -> list[MapSet]:
        return [r.mapset for r in self.reports]

    @property
    def lost_count(self) -> int:
        return sum(len(r.mapset.lost_ids) for r in self.reports)

    def describe(self) -> dict[str, Any]:
        """JSON-ready diagnostics: axis choice, section table, plane scores, losses."""
        return {
            "points": len(self.cloud),
            "axis": self.axis.cut.name,
            "main_view": self.axis.main_view.value,
            "reused_layout": self.reused_layout,
            "section_count": len(self.reports),
            "lost_points": self.lost_count,
            "sections": [r.describe() for r in self.reports],
        }


@dataclass(eq=False)
class EncodeResult:
    stream: Bitstream
    analyses: list[FrameAnalysis]
    atlases: list[Atlas]


@dataclass(eq=False)
class DecodeResult:
    decoded: DecodedSequence
    clouds: list[PointCloud]
    dedup_radius: int
