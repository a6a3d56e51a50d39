"""Command-line front end: encode, decode, analyze, evaluate."""

from xpcc.cli.context import CommandContext
from xpcc.cli.router import COMMANDS, build_parser

__all__ = ["COMMANDS", "CommandContext", "build_parser"]
