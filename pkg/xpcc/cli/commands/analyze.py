"""xpcc analyze: segmentation diagnostics for one frame."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from xpcc.atlas.packer import pack
from xpcc.cli.context import CommandContext
from xpcc.cli.netpbm import dump_atlas, dump_mapset
from xpcc.cli.options import add_config_flag, add_segmentation_flags, build_config
from xpcc.cli.schemas import AnalyzeReport
from xpcc.cloud.ply import load_ply
from xpcc.pipeline.analyzer import analyze_frame
from xpcc.utils.errors import IoFailureError

NAME = "analyze"
HELP = "report axis, sections, layer profiles and plane scores of one frame"


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("input", help="PLY file")
    parser.add_argument("-o", "--output", help="JSON report path (default: stdout)")
    parser.add_argument("--dump-dir", dest="dump_dir", help="write PGM/PPM maps of every section and the atlas")
    add_config_flag(parser)
    add_segmentation_flags(parser)


def run(args: argparse.Namespace, context: CommandContext) -> int:
    config = build_config(args, context.settings)
    cloud = load_ply(args.input, config.bit_depth)
    analysis = analyze_frame(cloud, config)
    report = AnalyzeReport(source=str(args.input), **analysis.describe())

    if args.dump_dir:
        directory = Path(args.dump_dir)
        try:
            directory.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise IoFailureError(f"cannot create {directory}: {exc}", details={"path": str(directory)}) from exc
        for mapset in analysis.mapsets:
            context.outputs.extend(dump_mapset(mapset, directory))
        atlas = pack(analysis.mapsets, config.packing.atlas_width, config.packing.alignment)
        context.outputs.extend(dump_atlas(atlas, directory))

    text = report.model_dump_json(indent=2) + "\n"
    if args.output:
        path = context.track(args.output)
        try:
            path.write_text(text, encoding="utf-8")
        except OSError as exc:
            raise IoFailureError(f"cannot write {path}: {exc}", details={"path": str(path)}) from exc
        for section in report.sections:
            context.emitter.emit_section(section)
        context.emitter.emit_done(sections=report.section_count, lost_points=report.lost_points)
    else:
        sys.stdout.write(text)
    return 0
