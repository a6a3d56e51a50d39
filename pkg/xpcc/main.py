"""Entry point for the xpcc command.

Parses arguments, configures logging from XPCC_LOG and dispatches to the
selected command. Any failure becomes a one-line message on stderr, exit
status 1 and removal of the files the command had started writing. Errors
that are not XpccError are also logged with their traceback.
"""

from __future__ import annotations

import sys
from collections.abc import Sequence

from xpcc import __version__
from xpcc.cli.context import CommandContext
from xpcc.cli.router import build_parser
from xpcc.config import get_settings
from xpcc.streaming import SummaryEmitter
from xpcc.utils.errors import XpccError
from xpcc.utils.logging import get_logger, setup_logging


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logger = get_logger("xpcc.main")
    context: CommandContext | None = None
    try:
        settings = get_settings()
        setup_logging(settings.log_level, settings.log_format)
        logger.debug("command_starting", command=args.command, version=__version__)
        context = CommandContext(settings=settings, emitter=SummaryEmitter(quiet=args.quiet))
        status: int = args.handler(args, context)
    except XpccError as exc:
        logger.error(
            "command_failed", command=args.command, error=exc.message, kind=type(exc).__name__, details=exc.details
        )
        return _fail(args.command, exc.message, type(exc).__name__, context)
    except Exception as exc:
        logger.exception("command_crashed", command=args.command, error=str(exc), kind=type(exc).__name__)
        return _fail(args.command, str(exc), type(exc).__name__, context)
    logger.debug("command_finished", command=args.command, status=status)
    return status


def _fail(command: str, message: str, kind: str, context: CommandContext | None) -> int:
    print(f"xpcc {command}: {message}", file=sys.stderr)
    if context is not None:
        context.emitter.emit_error(message, {"kind": kind})
        context.discard_outputs()
    return 1


if __name__ == "__main__":
    sys.exit(main())
