"""xpcc encode: PLY frames to an XPCC stream."""

from __future__ import annotations

import argparse
from pathlib import Path

from xpcc.cli.context import CommandContext
from xpcc.cli.options import add_codec_flags, add_config_flag, add_segmentation_flags, add_threads_flag, build_config
from xpcc.cli.options import threads as thread_count
from xpcc.cli.schemas import EncodeSummary
from xpcc.cloud.ply import load_sequence
from xpcc.codec.bitstream import bitrate
from xpcc.pipeline.runner import encode_frames
from xpcc.utils.errors import IoFailureError
from xpcc.utils.logging import get_logger

logger = get_logger(__name__)

NAME = "encode"
HELP = "encode PLY frames into a stream"


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("inputs", nargs="+", help="PLY files or glob patterns, in frame order")
    parser.add_argument("-o", "--output", required=True, help="stream file to write")
    add_config_flag(parser)
    add_segmentation_flags(parser)
    add_codec_flags(parser)
    add_threads_flag(parser)


def run(args: argparse.Namespace, context: CommandContext) -> int:
    config = build_config(args, context.settings)
    sequence = load_sequence(args.inputs, config.bit_depth, config.frame_rate)
    context.emitter.emit_status("encoding", frames=len(sequence), lossless=config.codec.lossless)
    result = encode_frames(sequence.frames, config, thread_count(args, context.settings))
    stream = result.stream

    output = context.track(args.output)
    try:
        Path(output).write_bytes(stream.data)
    except OSError as exc:
        raise IoFailureError(f"cannot write {output}: {exc}", details={"path": str(output)}) from exc

    for i, (analysis, atlas) in enumerate(zip(result.analyses, result.atlases, strict=True)):
        context.emitter.emit_frame_encoded(
            frame=i,
            points=len(analysis.cloud),
            sections=len(analysis.reports),
            lost_points=analysis.lost_count,
            occupancy_ratio=atlas.occupancy_ratio,
            bytes_=stream.frame_bytes(i)["total"],
        )
    bps, bpp = bitrate(stream)
    summary = EncodeSummary(
        output=str(output),
        frames=stream.header.frame_count,
        bytes=len(stream),
        bits_per_second=bps,
        bits_per_point=bpp,
        lossless=config.codec.lossless,
    )
    logger.info("encode_finished", **summary.model_dump())
    context.emitter.emit_done(**summary.model_dump())
    return 0
