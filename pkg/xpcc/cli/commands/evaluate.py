"""xpcc evaluate: per-frame quality metrics and rate-distortion curves."""

from __future__ import annotations

import argparse
from collections.abc import Sequence
from pathlib import Path

import numpy as np

from xpcc.atlas.models import Atlas
from xpcc.cli.context import CommandContext
from xpcc.cli.options import add_codec_flags, add_config_flag, add_segmentation_flags, add_threads_flag, build_config
from xpcc.cli.options import threads as thread_count
from xpcc.cli.plot import write_rd_svg
from xpcc.cli.schemas import LadderPoint
from xpcc.cloud.model import PointCloud
from xpcc.cloud.ply import load_sequence
from xpcc.codec.bitstream import bitrate, decode_sequence
from xpcc.codec.models import Bitstream, DecodedSequence
from xpcc.metrics import MetricsRow, RdCurve, color_psnr, frame_pair_mad, geometry_psnr_d1, write_metrics_csv
from xpcc.pipeline.runner import decode_frames, encode_frames
from xpcc.utils.errors import ConfigurationError, DimMismatchError, IoFailureError
from xpcc.utils.logging import get_logger

logger = get_logger(__name__)

NAME = "evaluate"
HELP = "D1/color PSNR, temporal MAD and bitrates; --ladder sweeps qsteps and plots RD curves"


def _ladder(text: str) -> list[int]:
    try:
        steps = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid ladder {text!r}: expected comma-separated integers") from exc
    if not steps or any(q < 1 for q in steps):
        raise argparse.ArgumentTypeError(f"invalid ladder {text!r}: qsteps must be positive")
    return steps


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--original", nargs="+", required=True, help="source PLY files or glob patterns")
    parser.add_argument("--decoded", nargs="+", help="decoded PLY files or glob patterns")
    parser.add_argument("--stream", help="stream the decoded frames came from")
    parser.add_argument("--ladder", type=_ladder, help='encode at every qstep, e.g. "1,2,4,8,16"')
    parser.add_argument("--csv", help="per-frame metrics CSV path")
    parser.add_argument("--svg", help="RD plot path (ladder mode)")
    parser.add_argument("--sequence", help="sequence name for the CSV (default: first input's stem)")
    add_config_flag(parser)
    add_segmentation_flags(parser)
    add_codec_flags(parser)
    add_threads_flag(parser)


def frame_rows(
    sequence: str,
    originals: Sequence[PointCloud],
    decoded: Sequence[PointCloud],
    stream: Bitstream | DecodedSequence,
    atlases: Sequence[Atlas],
) -> list[MetricsRow]:
    """One MetricsRow per frame; temporal MAD compares each A0 frame with its predecessor."""
    if not (len(originals) == len(decoded) == len(atlases)):
        raise DimMismatchError(
            "frame counts differ",
            details={"original": len(originals), "decoded": len(decoded), "stream": len(atlases)},
        )
    qstep = stream.header.params.geometry_qstep
    rows = []
    for i, (reference, degraded) in enumerate(zip(originals, decoded, strict=True)):
        sizes = stream.frame_bytes(i)
        rows.append(
            MetricsRow(
                sequence=sequence,
                frame=i,
                qstep=qstep,
                geom_bits=sizes["geometry"] * 8,
                attr_bits=sizes["attribute"] * 8,
                d1_psnr=geometry_psnr_d1(reference, degraded),
                color_psnr=color_psnr(reference, degraded).average,
                temporal_mad=frame_pair_mad(atlases[i - 1], atlases[i]) if i else 0.0,
                occupancy_ratio=atlases[i].occupancy_ratio,
            )
        )
    return rows


def _curve(label: str, pairs: list[tuple[float, float]]) -> RdCurve:
    """Drop rungs whose rate repeats an earlier one."""
    seen: dict[float, float] = {}
    for rate, psnr in pairs:
        if rate > 0:
            seen.setdefault(rate, psnr)
    return RdCurve.from_pairs(label, list(seen.items()))


def _run_single(
    args: argparse.Namespace,
    context: CommandContext,
    sequence: str,
    originals: list[PointCloud],
) -> list[MetricsRow]:
    if not args.decoded or not args.stream:
        raise ConfigurationError("evaluate needs --decoded and --stream, or --ladder")
    try:
        data = Path(args.stream).read_bytes()
    except OSError as exc:
        raise IoFailureError(f"cannot read {args.stream}: {exc}", details={"path": args.stream}) from exc
    decoded_stream = decode_sequence(data)
    decoded = load_sequence(args.decoded, decoded_stream.header.bit_depth).frames
    rows = frame_rows(sequence, originals, decoded, decoded_stream, decoded_stream.atlases)
    bps, bpp = bitrate(data, args.frame_rate)
    context.emitter.emit_status("stream_rate", bits_per_second=bps, bits_per_point=bpp)
    return rows


def _run_ladder(
    args: argparse.Namespace,
    context: CommandContext,
    sequence: str,
    originals: list[PointCloud],
) -> list[MetricsRow]:
    base = build_config(args, context.settings)
    workers = thread_count(args, context.settings)
    rows: list[MetricsRow] = []
    rungs: list[LadderPoint] = []
    for qstep in args.ladder:
        config = base.with_overrides(geometry_qstep=qstep, attribute_qstep=qstep)
        encoded = encode_frames(originals, config, workers)
        result = decode_frames(encoded.stream, config.reconstruction.dedup_radius, workers)
        rung_rows = frame_rows(sequence, originals, result.clouds, encoded.stream, result.decoded.atlases)
        bps, bpp = bitrate(encoded.stream, args.frame_rate)
        rung = LadderPoint(
            qstep=qstep,
            bytes=len(encoded.stream),
            bits_per_second=bps,
            bits_per_point=bpp,
            d1_psnr=float(np.mean([r.d1_psnr for r in rung_rows])),
            color_psnr=float(np.mean([r.color_psnr for r in rung_rows])),
        )
        logger.info("ladder_rung", **rung.model_dump())
        context.emitter.emit_status("ladder_rung", **rung.model_dump())
        rows.extend(rung_rows)
        rungs.append(rung)

    if args.svg:
        curves = [
            _curve("geometry D1", [(r.bits_per_second, r.d1_psnr) for r in rungs]),
            _curve("color", [(r.bits_per_second, r.color_psnr) for r in rungs]),
        ]
        context.track(args.svg)
        write_rd_svg(curves, args.svg, title=sequence)
    return rows


def run(args: argparse.Namespace, context: CommandContext) -> int:
    config = build_config(args, context.settings)
    source = load_sequence(args.original, config.bit_depth, config.frame_rate)
    sequence = args.sequence or Path(source.metadata["paths"][0]).stem

    if args.ladder:
        rows = _run_ladder(args, context, sequence, source.frames)
    else:
        rows = _run_single(args, context, sequence, source.frames)

    for row in rows:
        context.emitter.emit_metrics(row.model_dump())
    if args.csv:
        context.track(args.csv)
        write_metrics_csv(rows, args.csv)
    context.emitter.emit_done(
        sequence=sequence,
        rows=len(rows),
        mean_d1_psnr=float(np.mean([r.d1_psnr for r in rows])) if rows else 0.0,
    )
    return 0
