"""Frame analysis and sequence encode/decode orchestration."""

from xpcc.pipeline.analyzer import analyze_frame
from xpcc.pipeline.models import DecodeResult, EncodeResult, FrameAnalysis, SectionReport
from xpcc.pipeline.runner import analyze_frames, decode_frames, encode_frames, pack_frames

__all__ = [
    "DecodeResult",
    "EncodeResult",
    "FrameAnalysis",
    "SectionReport",
    "analyze_frame",
    "analyze_frames",
    "decode_frames",
    "encode_frames",
    "pack_frames",
]
