"""Cross-sectional segmentation: cut axis choice and slab grouping.

A frame is cut into unit-thickness slabs along its cut axis. A strategy
groups consecutive non-empty slabs into sections; overlap rows are then
shared across every interior boundary so seams keep their points.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from xpcc.cloud.model import PointCloud, bounds
from xpcc.segmentation.geometry import all_members, ellipse_of, ring_distances
from xpcc.segmentation.layers import layer_profile
from xpcc.segmentation.models import (
    Axis,
    AxisName,
    CrossSection,
    EllipseParams,
    SegmentationConfig,
    SignedAxis,
)
from xpcc.utils.errors import EmptyCloudError, InvalidSectionCountError
from xpcc.utils.logging import get_logger

logger = get_logger(__name__)


def select_axis(cloud: PointCloud, main_view: SignedAxis, surface_thickness: int = 4) -> Axis:
    """Choose the cut axis.

    Rules, applied in order: never cut along the main view axis; prefer the
    longer extent; prefer the smaller mean layer count seen from the main
    view; finally X before Y before Z.
    """
    if len(cloud) == 0:
        raise EmptyCloudError("cannot choose an axis for an empty cloud")
    extent = bounds(cloud).extent
    candidates = [a for a in AxisName if a != main_view.axis]
    longest = max(extent[a] for a in candidates)
    tied = [a for a in candidates if extent[a] == longest]
    if len(tied) > 1:
        means = {a: layer_profile(cloud, a, main_view, surface_thickness).mean_nonempty() for a in tied}
        tied.sort(key=lambda a: (means[a], int(a)))
    return Axis(cut=tied[0], main_view=main_view)


@dataclass(frozen=True, eq=False)
class SlabTable:
    """Points sorted along the cut axis with per non-empty slab statistics."""

    axis: Axis
    order: npt.NDArray[np.int64]
    coord: npt.NDArray[np.int64]
    uw: npt.NDArray[np.int64]
    slabs: npt.NDArray[np.int64]
    starts: npt.NDArray[np.int64]
    ends: npt.NDArray[np.int64]
    layers: npt.NDArray[np.int64]
    half_u: npt.NDArray[np.float64]
    half_w: npt.NDArray[np.float64]

    @classmethod
    def build(cls, cloud: PointCloud, axis: Axis, surface_thickness: int) -> SlabTable:
        cut = axis.cut
        order = np.argsort(cloud.points[:, cut], kind="stable").astype(np.int64)
        coord = cloud.points[order, cut]
        u, w = cut.orthogonal
        uw = cloud.points[order][:, [u, w]]
        slabs, starts = np.unique(coord, return_index=True)
        starts = starts.astype(np.int64)
        ends = np.append(starts[1:], len(order)).astype(np.int64)
        half_u = (np.maximum.reduceat(uw[:, 0], starts) - np.minimum.reduceat(uw[:, 0], starts)) / 2.0
        half_w = (np.maximum.reduceat(uw[:, 1], starts) - np.minimum.reduceat(uw[:, 1], starts)) / 2.0
        profile = layer_profile(cloud, cut, axis.main_view, surface_thickness)
        layers = profile.max_layers[slabs - profile.lo]
        return cls(axis, order, coord, uw, slabs.astype(np.int64), starts, ends, layers, half_u, half_w)

    def __len__(self) -> int:
        return len(self.slabs)

    def span(self, lo: int, hi: int) -> slice:
        """Slice of the sorted arrays holding points with lo <= coord <= hi."""
        a = int(np.searchsorted(self.coord, lo, side="left"))
        b = int(np.searchsorted(self.coord, hi, side="right"))
        return slice(a, b)


class Segmenter(ABC):
    """Groups the non-empty slabs of a frame into consecutive runs."""

    def __init__(self, config: SegmentationConfig) -> None:
        self._config = config

    @abstractmethod
    def group(self, table: SlabTable) -> list[tuple[int, int]]:
        """Return [start, end) runs of non-empty slab indices covering the table."""
        ...

    def segment(self, cloud: PointCloud) -> list[CrossSection]:
        if len(cloud) == 0:
            raise EmptyCloudError("cannot segment an empty cloud")
        axis = select_axis(cloud, self._config.main_view, self._config.surface_thickness)
        table = SlabTable.build(cloud, axis, self._config.surface_thickness)
        groups = self.group(table)
        sections = _sections_from_groups(table, groups, self._config.overlap_width)
        logger.debug(
            "segment_done",
            axis=axis.cut.name,
            sections=len(sections),
            slabs=len(table),
            mode=type(self).__name__,
        )
        return sections


class ManualSegmenter(Segmenter):
    """Places K-1 boundaries at the largest slab-to-slab discontinuities."""

    def group(self, table: SlabTable) -> list[tuple[int, int]]:
        k = self._config.target_sections or 1
        n = len(table)
        if k > n:
            raise InvalidSectionCountError(
                "more sections requested than non-empty slabs",
                details={"target_sections": k, "non_empty_slabs": n},
            )
        score = discontinuity_scores(table)
        chosen = sorted(sorted(range(n - 1), key=lambda j: (-score[j], j))[: k - 1])
        starts = [0, *(j + 1 for j in chosen)]
        ends = [*starts[1:], n]
        return list(zip(starts, ends, strict=True))


class AutoSegmenter(Segmenter):
    """Grows each section slab by slab from the low end of the cut axis.

    A run is thin (at most two layers) or multi-layer. Under growth_rule
    "all" a slab joins a run of its own kind when it sits on the running
    section's elliptic ring: every point within the tolerance for a thin
    run, the slab's outline within the tolerance for a multi-layer one.
    Under "any" a slab joins when the run stays thin or its points lie on
    the ring.
    """

    def group(self, table: SlabTable) -> list[tuple[int, int]]:
        tol = self._config.ellipse_tolerance
        groups: list[tuple[int, int]] = []
        start = 0
        thin = bool(table.layers[0] <= 2)
        lo = table.uw[table.starts[0] : table.ends[0]].min(axis=0)
        hi = table.uw[table.starts[0] : table.ends[0]].max(axis=0)
        for j in range(1, len(table)):
            slab_uw = table.uw[table.starts[j] : table.ends[j]]
            slab_lo, slab_hi = slab_uw.min(axis=0), slab_uw.max(axis=0)
            slab_thin = bool(table.layers[j] <= 2)
            running = _ellipse_from_extents(lo, hi)
            on_ring = all_members(ring_distances(slab_uw, running.center), running, tol)
            if self._config.growth_rule == "any":
                grow = (thin and slab_thin) or on_ring
            elif thin:
                grow = slab_thin and on_ring
            else:
                grow = not slab_thin and _same_outline(_ellipse_from_extents(slab_lo, slab_hi), running, tol)
            if grow:
                thin = thin and slab_thin
                lo = np.minimum(lo, slab_lo)
                hi = np.maximum(hi, slab_hi)
                continue
            groups.append((start, j))
            start = j
            thin = slab_thin
            lo, hi = slab_lo, slab_hi
        groups.append((start, len(table)))
        return groups


def _same_outline(slab: EllipseParams, running: EllipseParams, tolerance: float) -> bool:
    shift = math.hypot(slab.center[0] - running.center[0], slab.center[1] - running.center[1])
    return shift <= tolerance and abs(slab.a - running.a) <= tolerance and abs(slab.b - running.b) <= tolerance


def discontinuity_scores(table: SlabTable) -> npt.NDArray[np.float64]:
    """|Δ layers| + |Δ a| + |Δ b| between consecutive non-empty slabs."""
    a = np.maximum(table.half_u, table.half_w)
    b = np.minimum(table.half_u, table.half_w)
    layers = table.layers.astype(np.float64)
    return np.abs(np.diff(layers)) + np.abs(np.diff(a)) + np.abs(np.diff(b))


def _ellipse_from_extents(lo: npt.NDArray[np.int64], hi: npt.NDArray[np.int64]) -> EllipseParams:
    half = (hi - lo) / 2.0
    center = (float(lo[0] + hi[0]) / 2.0, float(lo[1] + hi[1]) / 2.0)
    return EllipseParams(center=center, a=float(half.max()), b=float(half.min()))


def _section(
    table: SlabTable,
    slab: tuple[int, int],
    section_id: int,
    overlap_lo: bool = False,
    overlap_hi: bool = False,
) -> CrossSection:
    span = table.span(*slab)
    return CrossSection(
        axis=table.axis,
        slab=slab,
        ellipse=ellipse_of(table.uw[span]),
        point_ids=np.sort(table.order[span]),
        overlap_lo=overlap_lo,
        overlap_hi=overlap_hi,
        section_id=section_id,
    )


def _sections_from_groups(
    table: SlabTable,
    groups: list[tuple[int, int]],
    overlap_width: int,
) -> list[CrossSection]:
    ranges = [(int(table.slabs[s]), int(table.slabs[e - 1])) for s, e in groups]
    sections: list[CrossSection] = []
    for i, (lo, hi) in enumerate(ranges):
        shares_hi = overlap_width > 0 and i + 1 < len(ranges)
        shares_lo = overlap_width > 0 and i > 0
        if shares_hi:
            upper_lo, upper_hi = ranges[i + 1]
            hi = min(upper_lo + overlap_width - 1, upper_hi)
        sections.append(_section(table, (lo, hi), i, overlap_lo=shares_lo, overlap_hi=shares_hi))
    return sections


def segment(cloud: PointCloud, config: SegmentationConfig) -> list[CrossSection]:
    """Cut a frame into cross-sections (manual K or automatic growth)."""
    segmenter: Segmenter = AutoSegmenter(config) if config.auto else ManualSegmenter(config)
    return segmenter.segment(cloud)


def apply_layout(
    cloud: PointCloud,
    previous: list[CrossSection],
    surface_thickness: int = 4,
) -> list[CrossSection] | None:
    """Reuse a previous frame's axis and slab ranges on a new frame.

    Returns None when the new frame has points outside the layout or a
    section of the layout would be empty.
    """
    if not previous or len(cloud) == 0:
        return None
    table = SlabTable.build(cloud, previous[0].axis, surface_thickness)
    covered = np.zeros(len(cloud), dtype=bool)
    sections = []
    for old in previous:
        span = table.span(*old.slab)
        if span.stop <= span.start:
            return None
        covered[table.order[span]] = True
        sections.append(_section(table, old.slab, old.section_id, old.overlap_lo, old.overlap_hi))
    if not covered.all():
        return None
    return sections


def renumber(sections: list[CrossSection]) -> list[CrossSection]:
    """Assign consecutive section ids in list order."""
    return [s.with_id(i) for i, s in enumerate(sections)]
