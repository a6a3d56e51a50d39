"""Sequence-level encode and decode."""

from __future__ import annotations

import concurrent.futures
from collections.abc import Callable, Iterable, Sequence
from typing import TypeVar

from xpcc.atlas.models import Atlas
from xpcc.atlas.packer import pack
from xpcc.cloud.model import PointCloud
from xpcc.codec.bitstream import decode_sequence, encode_sequence
from xpcc.codec.models import Bitstream
from xpcc.config import PipelineConfig
from xpcc.pipeline.analyzer import analyze_frame
from xpcc.pipeline.models import DecodeResult, EncodeResult, FrameAnalysis
from xpcc.reconstruct.merge import reconstruct_frame
from xpcc.segmentation.models import CrossSection
from xpcc.utils.logging import get_logger

logger = get_logger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def _ordered_map(fn: Callable[[T], R], items: Iterable[T], threads: int) -> list[R]:
    """map() in input order, on a thread pool when threads > 1."""
    if threads <= 1:
        return [fn(item) for item in items]
    with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def analyze_frames(frames: Sequence[PointCloud], config: PipelineConfig, threads: int = 1) -> list[FrameAnalysis]:
    """Analyze every frame; frames are independent unless layouts are reused."""
    if not config.packing.reuse_layout:
        return _ordered_map(lambda cloud: analyze_frame(cloud, config), frames, threads)
    analyses: list[FrameAnalysis] = []
    layout: list[CrossSection] | None = None
    for cloud in frames:
        analysis = analyze_frame(cloud, config, layout)
        analyses.append(analysis)
        layout = analysis.layout
    return analyses


def pack_frames(analyses: Sequence[FrameAnalysis], config: PipelineConfig) -> list[Atlas]:
    atlases: list[Atlas] = []
    for analysis in analyses:
        previous = atlases[-1] if atlases and config.packing.reuse_layout else None
        atlases.append(pack(analysis.mapsets, config.packing.atlas_width, config.packing.alignment, previous))
    return atlases


def encode_frames(frames: Sequence[PointCloud], config: PipelineConfig, threads: int = 1) -> EncodeResult:
    """Analyze, pack and encode a sequence of frames into one stream.

    Args:
        frames: Source clouds in display order.
        config: Segmentation, packing and codec settings.
        threads: Worker threads for frame analysis and channel compression.

    Returns:
        The stream together with the per-frame analyses and atlases.
    """
    analyses = analyze_frames(frames, config, threads)
    atlases = pack_frames(analyses, config)
    stream = encode_sequence(
        atlases,
        config.codec,
        sections=[a.sections for a in analyses],
        point_counts=[len(f) for f in frames],
        bit_depth=frames[0].bit_depth if frames else config.bit_depth,
        frame_rate=config.frame_rate,
        threads=threads,
    )
    return EncodeResult(stream=stream, analyses=analyses, atlases=atlases)


def decode_frames(stream: Bitstream | bytes, dedup_radius: int | None = None, threads: int = 1) -> DecodeResult:
    """Decode a stream and rebuild every frame's cloud.

    dedup_radius defaults to 0 for lossless streams and 1 for lossy ones.
    """
    decoded = decode_sequence(stream)
    header = decoded.header
    radius = dedup_radius if dedup_radius is not None else (0 if header.params.lossless else 1)
    clouds = _ordered_map(
        lambda atlas: reconstruct_frame(atlas, header.bit_depth, radius),
        decoded.atlases,
        threads,
    )
    logger.info("sequence_reconstructed", frames=len(clouds), points=sum(len(c) for c in clouds), radius=radius)
    return DecodeResult(decoded=decoded, clouds=clouds, dedup_radius=radius)
