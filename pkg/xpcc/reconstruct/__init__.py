"""Decoder-side reconstruction: unproject maps, merge sections."""

from xpcc.reconstruct.merge import merge_sections, reconstruct_frame
from xpcc.reconstruct.unproject import SectionPoints, unproject

__all__ = ["SectionPoints", "merge_sections", "reconstruct_frame", "unproject"]
