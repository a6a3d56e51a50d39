"""Structured logging setup using structlog.

Log lines go to stderr; stdout belongs to NDJSON summaries and JSON reports.
"""

from __future__ import annotations

import logging
import sys
from collections.abc import Iterator
from contextlib import contextmanager
from typing import Literal

import structlog

LogFormat = Literal["auto", "json", "console"]

_SHARED_PROCESSORS: list[structlog.typing.Processor] = [
    structlog.contextvars.merge_contextvars,
    structlog.stdlib.filter_by_level,
    structlog.stdlib.add_logger_name,
    structlog.stdlib.add_log_level,
    structlog.processors.TimeStamper(fmt="iso"),
    structlog.processors.StackInfoRenderer(),
    structlog.processors.format_exc_info,
]


def _renderer(log_format: LogFormat) -> structlog.typing.Processor:
    console = log_format == "console" or (log_format == "auto" and sys.stderr.isatty())
    return structlog.dev.ConsoleRenderer() if console else structlog.processors.JSONRenderer()


def setup_logging(log_level: str = "INFO", log_format: LogFormat = "auto") -> None:
    """Configure structured logging for the codec.

    Args:
        log_level: The minimum log level (DEBUG, INFO, WARNING, ERROR).
        log_format: "json", "console", or "auto" (console on a terminal).
    """
    structlog.configure(
        processors=[*_SHARED_PROCESSORS, _renderer(log_format)],
        wrapper_class=structlog.stdlib.BoundLogger,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )

    logging.basicConfig(
        format="%(message)s",
        stream=sys.stderr,
        level=getattr(logging, log_level.upper(), logging.INFO),
        force=True,
    )


@contextmanager
def frame_context(frame: int) -> Iterator[None]:
    """Tag every log line emitted inside the block with the frame index."""
    with structlog.contextvars.bound_contextvars(frame=frame):
        yield


def get_logger(name: str) -> structlog.stdlib.BoundLogger:
    """Return a bound structlog logger."""
    return structlog.get_logger(name)  # type: ignore[no-any-return]
