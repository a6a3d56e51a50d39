"""xpcc decode: an XPCC stream back to PLY frames."""

from __future__ import annotations

import argparse
from pathlib import Path

from xpcc.cli.context import CommandContext
from xpcc.cli.options import add_threads_flag
from xpcc.cli.options import threads as thread_count
from xpcc.cloud.ply import save_ply
from xpcc.pipeline.runner import decode_frames
from xpcc.utils.errors import IoFailureError

NAME = "decode"
HELP = "decode a stream into frame_NNNN.ply files"


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("stream", help="stream file")
    parser.add_argument("-o", "--output", required=True, help="directory for the decoded frames")
    parser.add_argument(
        "--dedup-radius",
        dest="dedup_radius",
        type=int,
        help="L-inf radius for dropping near duplicates between sections (default 0 lossless, 1 lossy)",
    )
    add_threads_flag(parser)


def run(args: argparse.Namespace, context: CommandContext) -> int:
    try:
        data = Path(args.stream).read_bytes()
    except OSError as exc:
        raise IoFailureError(f"cannot read {args.stream}: {exc}", details={"path": args.stream}) from exc
    result = decode_frames(data, args.dedup_radius, thread_count(args, context.settings))

    out_dir = Path(args.output)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoFailureError(f"cannot create {out_dir}: {exc}", details={"path": str(out_dir)}) from exc
    for i, cloud in enumerate(result.clouds):
        path = context.track(out_dir / f"frame_{i:04d}.ply")
        save_ply(cloud, path)
        context.emitter.emit_frame_decoded(frame=i, points=len(cloud), path=str(path))
    context.emitter.emit_done(frames=len(result.clouds), dedup_radius=result.dedup_radius)
    return 0
