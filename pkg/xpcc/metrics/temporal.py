"""Mean absolute difference between consecutive atlas frames."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
import numpy.typing as npt

from xpcc.atlas.models import Atlas
from xpcc.utils.errors import DimMismatchError


def temporal_mad(frame_a: npt.NDArray[np.generic], frame_b: npt.NDArray[np.generic]) -> float:
    """Mean over all pixels (occupied or not) of |a − b|."""
    if frame_a.shape != frame_b.shape:
        raise DimMismatchError(
            "frames differ in shape",
            details={"a": list(frame_a.shape), "b": list(frame_b.shape)},
        )
    if frame_a.size == 0:
        return 0.0
    return float(np.abs(frame_a.astype(np.int64) - frame_b.astype(np.int64)).mean())


def _padded(array: npt.NDArray[np.generic], height: int, width: int) -> npt.NDArray[np.generic]:
    pad = [(0, height - array.shape[0]), (0, width - array.shape[1])] + [(0, 0)] * (array.ndim - 2)
    return np.pad(array, pad)


def frame_pair_mad(previous: Atlas, current: Atlas, channel: str = "a0") -> float:
    """temporal_mad of one channel of two atlases, zero-padded to a common size."""
    a, b = previous.channels()[channel], current.channels()[channel]
    height, width = max(a.shape[0], b.shape[0]), max(a.shape[1], b.shape[1])
    return temporal_mad(_padded(a, height, width), _padded(b, height, width))


def sequence_temporal_mad(atlases: Sequence[Atlas], channel: str = "a0") -> float:
    """Average frame_pair_mad over consecutive frames (0 for fewer than two)."""
    if len(atlases) < 2:
        return 0.0
    return float(np.mean([frame_pair_mad(prev, cur, channel) for prev, cur in zip(atlases, atlases[1:])]))
