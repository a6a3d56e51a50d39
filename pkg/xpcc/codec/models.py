"""Codec parameters, channels and the decoded stream header."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np
from pydantic import BaseModel, Field

from xpcc.atlas.models import Atlas, Placement
from xpcc.projection.models import MapLayout
from xpcc.segmentation.models import Axis, AxisName, CrossSection, EllipseParams, SignedAxis

MAGIC = b"XPCC"
VERSION = 1


class Channel(str, Enum):
    """Atlas channels, in stream order."""

    OCCUPANCY = "occupancy"
    D0 = "d0"
    D1 = "d1"
    A0 = "a0"
    A1 = "a1"

    @property
    def is_geometry(self) -> bool:
        return self in (Channel.D0, Channel.D1)

    @property
    def is_attribute(self) -> bool:
        return self in (Channel.A0, Channel.A1)

    @property
    def maximum(self) -> int:
        """Largest sample value the channel can hold."""
        if self.is_geometry:
            return 65535
        return 255 if self.is_attribute else 1


class CodecParams(BaseModel):
    """Quantizer steps, intra period and DEFLATE level."""

    geometry_qstep: int = Field(default=1, ge=1)
    attribute_qstep: int = Field(default=1, ge=1)
    inter_period: int = Field(default=1, ge=1)
    compressor_level: int = Field(default=9, ge=0, le=9)

    @property
    def lossless(self) -> bool:
        return self.geometry_qstep == 1 and self.attribute_qstep == 1

    def qstep(self, channel: Channel) -> int:
        if channel.is_geometry:
            return self.geometry_qstep
        if channel.is_attribute:
            return self.attribute_qstep
        return 1


def _half_units(value: float) -> int:
    return int(round(2 * value))


@dataclass(frozen=True)
class SectionRecord:
    """One row of a frame's section table: segmentation, map layout and placement.

    Ellipse parameters travel in half-voxel units.
    """

    section_id: int
    cut_axis: AxisName
    main_view: SignedAxis
    slab: tuple[int, int]
    center: tuple[float, float]
    a: float
    b: float
    overlap_lo: bool
    overlap_hi: bool
    plane: SignedAxis
    origin: tuple[int, int, int]
    width: int
    height: int
    u: int
    v: int
    rotated: bool

    @classmethod
    def build(cls, layout: MapLayout, placement: Placement, section: CrossSection | None = None) -> SectionRecord:
        if section is None:
            axis = Axis(cut=layout.plane.axis.orthogonal[1])
            slab = (0, 0)
            ellipse = EllipseParams((0.0, 0.0), 0.0, 0.0)
            overlap = (False, False)
        else:
            axis, slab, ellipse = section.axis, section.slab, section.ellipse
            overlap = (section.overlap_lo, section.overlap_hi)
        return cls(
            section_id=layout.section_id,
            cut_axis=axis.cut,
            main_view=axis.main_view,
            slab=slab,
            center=(_half_units(ellipse.center[0]) / 2, _half_units(ellipse.center[1]) / 2),
            a=_half_units(ellipse.a) / 2,
            b=_half_units(ellipse.b) / 2,
            overlap_lo=overlap[0],
            overlap_hi=overlap[1],
            plane=layout.plane,
            origin=layout.origin,
            width=layout.width,
            height=layout.height,
            u=placement.u,
            v=placement.v,
            rotated=placement.rotated,
        )

    @property
    def layout(self) -> MapLayout:
        return MapLayout(self.section_id, self.plane, self.origin, self.width, self.height)

    @property
    def placement(self) -> Placement:
        return Placement(self.section_id, self.u, self.v, self.rotated)

    @property
    def overlap_flags(self) -> int:
        return int(self.overlap_lo) | (int(self.overlap_hi) << 1)

    def to_section(self) -> CrossSection:
        """Segmentation metadata as a CrossSection (point ids are not carried)."""
        return CrossSection(
            axis=Axis(self.cut_axis, self.main_view),
            slab=self.slab,
            ellipse=EllipseParams(self.center, self.a, self.b),
            point_ids=np.zeros(0, np.int64),
            overlap_lo=self.overlap_lo,
            overlap_hi=self.overlap_hi,
            section_id=self.section_id,
        )


@dataclass(frozen=True)
class FrameHeader:
    width: int
    height: int
    point_count: int
    intra: bool
    sections: tuple[SectionRecord, ...] = ()

    @property
    def dims(self) -> tuple[int, int]:
        return self.width, self.height


@dataclass(frozen=True)
class StreamHeader:
    bit_depth: int
    frame_rate: float
    params: CodecParams
    frames: tuple[FrameHeader, ...] = ()
    version: int = VERSION

    @property
    def frame_count(self) -> int:
        return len(self.frames)

    @property
    def point_count(self) -> int:
        return sum(f.point_count for f in self.frames)


def payload_split(sizes: dict[Channel, int]) -> dict[str, int]:
    """Geometry (occupancy + depth) and attribute payload bytes of one frame."""
    geometry = sum(n for ch, n in sizes.items() if not ch.is_attribute)
    attribute = sum(n for ch, n in sizes.items() if ch.is_attribute)
    return {"geometry": geometry, "attribute": attribute, "total": geometry + attribute}


@dataclass(frozen=True)
class Bitstream:
    """Serialized sequence plus what the encoder learned while writing it."""

    data: bytes
    header: StreamHeader
    channel_bytes: tuple[dict[Channel, int], ...] = ()

    def __len__(self) -> int:
        return len(self.data)

    def frame_bytes(self, frame: int) -> dict[str, int]:
        return payload_split(self.channel_bytes[frame])


@dataclass
class DecodedSequence:
    """Atlases rebuilt from a stream, with its header."""

    header: StreamHeader
    atlases: list[Atlas] = field(default_factory=list)
    channel_bytes: list[dict[Channel, int]] = field(default_factory=list)

    def frame_bytes(self, frame: int) -> dict[str, int]:
        return payload_split(self.channel_bytes[frame])

    def sections(self, frame: int) -> list[CrossSection]:
        return [record.to_section() for record in self.header.frames[frame].sections]

    def describe(self) -> dict[str, Any]:
        return {
            "version": self.header.version,
            "frame_count": self.header.frame_count,
            "bit_depth": self.header.bit_depth,
            "frame_rate": self.header.frame_rate,
            "params": self.header.params.model_dump(),
        }
