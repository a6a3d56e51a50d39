"""Run summaries: NDJSON event emission."""

from xpcc.streaming.emitter import SummaryEmitter
from xpcc.streaming.events import EventType, StreamEvent

__all__ = ["EventType", "StreamEvent", "SummaryEmitter"]
