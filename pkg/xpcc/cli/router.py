"""Top-level parser: mounts every subcommand."""

from __future__ import annotations

import argparse
from types import ModuleType

from xpcc import __version__
from xpcc.cli.commands import analyze, decode, encode, evaluate

COMMANDS: dict[str, ModuleType] = {module.NAME: module for module in (encode, decode, analyze, evaluate)}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xpcc", description="Cross-sectional dynamic point cloud codec")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--quiet", action="store_true", help="suppress NDJSON summaries on stdout")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, module in COMMANDS.items():
        command = sub.add_parser(name, help=module.HELP, description=module.HELP)
        module.add_arguments(command)
        command.set_defaults(handler=module.run)
    return parser
