"""Report schemas written by the commands."""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, Field


class AnalyzeReport(BaseModel):
    """Segmentation diagnostics of one frame."""

    source: str
    points: int
    axis: str
    main_view: str
    reused_layout: bool = False
    section_count: int
    lost_points: int
    sections: list[dict[str, Any]] = Field(default_factory=list)


class EncodeSummary(BaseModel):
    output: str
    frames: int
    bytes: int
    bits_per_second: float
    bits_per_point: float
    lossless: bool


class LadderPoint(BaseModel):
    """One rung of a qstep ladder."""

    qstep: int
    bytes: int
    bits_per_second: float
    bits_per_point: float
    d1_psnr: float
    color_psnr: float
