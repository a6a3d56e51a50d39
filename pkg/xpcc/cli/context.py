"""State shared by every command invocation."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from xpcc.config import Settings
from xpcc.streaming import SummaryEmitter
from xpcc.utils.logging import get_logger

logger = get_logger(__name__)


@dataclass
class CommandContext:
    """Settings, the summary emitter and every file a command has started writing."""

    settings: Settings
    emitter: SummaryEmitter
    outputs: list[Path] = field(default_factory=list)

    def track(self, path: str | Path) -> Path:
        """Register an output so a failed command can remove it."""
        p = Path(path)
        self.outputs.append(p)
        return p

    def discard_outputs(self) -> None:
        for path in reversed(self.outputs):
            try:
                path.unlink(missing_ok=True)
            except OSError as exc:
                logger.warning("partial_output_not_removed", path=str(path), error=str(exc))
            else:
                logger.debug("partial_output_removed", path=str(path))
        self.outputs.clear()
