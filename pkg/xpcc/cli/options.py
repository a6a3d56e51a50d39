"""Flags shared between commands and their mapping onto PipelineConfig."""

from __future__ import annotations

import argparse

from xpcc.config import KNOWN_KEYS, PipelineConfig, Settings, load_config_file
from xpcc.segmentation.models import SignedAxis


def add_config_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key=value config file (flags override it)")


def add_segmentation_flags(parser: argparse.ArgumentParser) -> None:
    mode = parser.add_mutually_exclusive_group()
    mode.add_argument("--sections", dest="target_sections", type=int, help="cut into exactly K sections")
    mode.add_argument("--auto", action="store_const", const=True, default=None, help="choose the section count")
    parser.add_argument("--main-view", dest="main_view", type=SignedAxis.parse, help="viewer direction, e.g. +Z")
    parser.add_argument("--overlap-width", dest="overlap_width", type=int)
    parser.add_argument("--ellipse-tolerance", dest="ellipse_tolerance", type=float)
    parser.add_argument("--surface-thickness", dest="surface_thickness", type=int)
    parser.add_argument("--growth-rule", dest="growth_rule", choices=["all", "any"])
    parser.add_argument("--subdivide", dest="subdivide_parts", type=int, help="split lossy sections into N bands")
    parser.add_argument("--bit-depth", dest="bit_depth", type=int)


def add_codec_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--qstep-geom", dest="geometry_qstep", type=int)
    parser.add_argument("--qstep-attr", dest="attribute_qstep", type=int)
    parser.add_argument("--inter-period", dest="inter_period", type=int)
    parser.add_argument("--compressor-level", dest="compressor_level", type=int)
    parser.add_argument(
        "--reuse-layout",
        dest="reuse_layout",
        action="store_const",
        const=True,
        default=None,
        help="keep section layout and atlas placements across frames when they still fit",
    )
    parser.add_argument("--atlas-width", dest="atlas_width", type=int)
    parser.add_argument("--alignment", type=int)
    parser.add_argument("--frame-rate", dest="frame_rate", type=float)


def add_threads_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--threads", type=int, help="worker threads (default: XPCC_THREADS)")


def build_config(args: argparse.Namespace, settings: Settings) -> PipelineConfig:
    """Defaults, then environment, then config file, then flags."""
    config = load_config_file(getattr(args, "config", None), PipelineConfig.from_settings(settings))
    return config.with_overrides(**{key: getattr(args, key, None) for key in KNOWN_KEYS})


def threads(args: argparse.Namespace, settings: Settings) -> int:
    value = getattr(args, "threads", None)
    return max(1, value if value is not None else settings.threads)
