"""Summary events written one per line by the command-line tools."""

from __future__ import annotations

from enum import Enum
from typing import Any

from pydantic import BaseModel, ConfigDict, Field


class EventType(str, Enum):
    STATUS = "status"
    FRAME_ENCODED = "frame_encoded"
    FRAME_DECODED = "frame_decoded"
    SECTION = "section"
    METRICS = "metrics"
    ERROR = "error"
    DONE = "done"

    @property
    def terminal(self) -> bool:
        """Nothing is written after a done event."""
        return self is EventType.DONE


class StreamEvent(BaseModel):
    """One summary line: an event tag plus a flat payload of numbers and strings."""

    model_config = ConfigDict(frozen=True)

    event: EventType
    data: dict[str, Any] = Field(default_factory=dict)

    def to_ndjson(self) -> str:
        return self.model_dump_json() + "\n"
