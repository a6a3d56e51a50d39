"""Frame analysis: cut, optionally subdivide, pick planes, project."""

from __future__ import annotations

from xpcc.cloud.model import PointCloud
from xpcc.config import PipelineConfig
from xpcc.pipeline.models import FrameAnalysis, SectionReport
from xpcc.projection.models import PlaneChoice
from xpcc.projection.projector import best_choice, evaluate_planes, project_section
from xpcc.segmentation.layers import layer_profile
from xpcc.segmentation.models import CrossSection, candidate_planes
from xpcc.segmentation.segmenter import apply_layout, renumber, segment
from xpcc.segmentation.subdivide import subdivide
from xpcc.utils.errors import TooManyPartsError
from xpcc.utils.logging import get_logger

logger = get_logger(__name__)


def analyze_frame(
    cloud: PointCloud,
    config: PipelineConfig,
    previous_layout: list[CrossSection] | None = None,
) -> FrameAnalysis:
    """Segment a frame and project every section on its best plane.

    With previous_layout given, its axis and slab ranges are reused when
    they still cover the frame. Sections that lose points are split into
    config.subdivide_parts bands when that is above 1.
    """
    seg = config.segmentation
    layout = apply_layout(cloud, previous_layout, seg.surface_thickness) if previous_layout else None
    reused = layout is not None
    if layout is None:
        layout = segment(cloud, seg)
    planes = candidate_planes(seg.main_view)

    pending: list[tuple[CrossSection, int, list[PlaneChoice] | None]] = []
    for section in layout:
        choices = evaluate_planes(cloud, section, planes)
        best = best_choice(choices)
        if config.subdivide_parts > 1 and best.lost_count > 0:
            try:
                bands = subdivide(section, cloud, config.subdivide_parts, planes)
            except TooManyPartsError:
                logger.debug("subdivide_skipped", section_id=section.section_id, parts=config.subdivide_parts)
            else:
                pending.extend((band, section.section_id, None) for band in bands)
                continue
        pending.append((section, section.section_id, choices))

    final = renumber([s for s, _, _ in pending])
    reports = []
    for section, (_, parent, known) in zip(final, pending, strict=True):
        choices = known if known is not None else evaluate_planes(cloud, section, planes)
        choice = best_choice(choices)
        profile_plane = next(p for p in (choice.plane, seg.main_view, *planes) if p.axis != section.axis.cut)
        reports.append(
            SectionReport(
                section=section,
                choice=choice,
                candidates=choices,
                mapset=project_section(cloud, section, choice.plane),
                profile=layer_profile(
                    cloud.subset(section.point_ids), section.axis, profile_plane, seg.surface_thickness
                ),
                parent_id=parent,
                profile_plane=profile_plane,
            )
        )

    analysis = FrameAnalysis(cloud=cloud, axis=layout[0].axis, layout=layout, reports=reports, reused_layout=reused)
    if analysis.lost_count:
        logger.warning("points_lost", lost=analysis.lost_count, points=len(cloud), sections=len(reports))
    logger.debug("frame_analyzed", points=len(cloud), sections=len(reports), axis=analysis.axis.cut.name, reused=reused)
    return analysis
