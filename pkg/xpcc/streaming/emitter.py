"""SummaryEmitter: per-frame NDJSON summaries on a text stream."""

from __future__ import annotations

import sys
from collections.abc import Iterator
from typing import Any, TextIO

from xpcc.streaming.events import EventType, StreamEvent
from xpcc.utils.logging import get_logger

logger = get_logger(__name__)


class SummaryEmitter:
    """Writes StreamEvents as NDJSON lines and keeps them for inspection.

    Commands create one emitter and report each finished frame through it;
    stdout receives one JSON object per line.
    """

    def __init__(self, out: TextIO | None = None, quiet: bool = False) -> None:
        self._out = out if out is not None else sys.stdout
        self._quiet = quiet
        self._closed = False
        self.events: list[StreamEvent] = []

    def emit(self, event_type: EventType, data: dict[str, Any]) -> None:
        """Emit an event to the stream."""
        if self._closed:
            logger.debug("event_after_close", event_type=event_type.value)
            return
        event = StreamEvent(event=event_type, data=data)
        self.events.append(event)
        if not self._quiet:
            self._out.write(event.to_ndjson())
            self._out.flush()
        if event_type.terminal:
            self.close()

    def emit_status(self, status: str, **extra: Any) -> None:
        """Emit a status event."""
        self.emit(EventType.STATUS, {"status": status, **extra})

    def emit_frame_encoded(
        self,
        frame: int,
        points: int,
        sections: int,
        lost_points: int,
        occupancy_ratio: float,
        bytes_: int,
    ) -> None:
        """Emit the encode summary line of one frame."""
        self.emit(
            EventType.FRAME_ENCODED,
            {
                "frame": frame,
                "points": points,
                "sections": sections,
                "lost_points": lost_points,
                "occupancy_ratio": round(occupancy_ratio, 6),
                "bytes": bytes_,
            },
        )

    def emit_frame_decoded(self, frame: int, points: int, path: str) -> None:
        self.emit(EventType.FRAME_DECODED, {"frame": frame, "points": points, "path": path})

    def emit_section(self, info: dict[str, Any]) -> None:
        self.emit(EventType.SECTION, info)

    def emit_metrics(self, row: dict[str, Any]) -> None:
        self.emit(EventType.METRICS, row)

    def emit_error(self, error: str, details: dict[str, Any] | None = None) -> None:
        """Emit an error event."""
        self.emit(EventType.ERROR, {"error": error, **(details or {})})

    def emit_done(self, **summary: Any) -> None:
        """Emit a done event; the emitter ignores everything after it."""
        self.emit(EventType.DONE, summary)

    def close(self) -> None:
        self._closed = True

    def __iter__(self) -> Iterator[str]:
        """NDJSON lines of everything emitted so far."""
        return (event.to_ndjson() for event in self.events)
