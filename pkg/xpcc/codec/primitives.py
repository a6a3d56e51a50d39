"""Coding primitives: quantizer, LEB128 varints, occupancy RLE, spatial predictor, DEFLATE."""

from __future__ import annotations

import zlib

import numpy as np
import numpy.typing as npt

from xpcc.utils.errors import CorruptRunsError, TruncatedPayloadError

# --- quantization ---


def quantize(value: int, qstep: int) -> int:
    """Nearest level of a non-negative value (halves round up)."""
    if qstep < 1:
        raise ValueError("qstep must be at least 1")
    return (value + qstep // 2) // qstep


def dequantize(level: int, qstep: int) -> int:
    return level * qstep


def quantize_array(values: npt.NDArray[np.integer], qstep: int) -> npt.NDArray[np.int64]:
    if qstep < 1:
        raise ValueError("qstep must be at least 1")
    v = values.astype(np.int64)
    return v if qstep == 1 else (v + qstep // 2) // qstep


def dequantize_array(levels: npt.NDArray[np.int64], qstep: int, maximum: int) -> npt.NDArray[np.int64]:
    """Reconstruct levels, clipped to the channel's largest value."""
    return np.minimum(levels.astype(np.int64) * qstep, maximum)


# --- LEB128 ---


def leb128_encode(value: int) -> bytes:
    """Encode a non-negative integer as unsigned LEB128."""
    if value < 0:
        raise ValueError("cannot encode negative number as unsigned leb128")
    out = bytearray()
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return bytes(out)


def leb128_decode(data: bytes | memoryview, offset: int = 0) -> tuple[int, int]:
    """Decode one unsigned LEB128 value; returns (value, offset after it)."""
    result = 0
    shift = 0
    while True:
        if offset >= len(data):
            raise TruncatedPayloadError("varint runs past end of data", details={"offset": offset})
        byte = data[offset]
        offset += 1
        result |= (byte & 0x7F) << shift
        if not byte & 0x80:
            return result, offset
        shift += 7


class ByteWriter:
    """Append-only buffer with LEB128 and fixed-width helpers."""

    def __init__(self) -> None:
        self._buf = bytearray()

    def varint(self, value: int) -> ByteWriter:
        self._buf += leb128_encode(value)
        return self

    def u8(self, value: int) -> ByteWriter:
        self._buf.append(value & 0xFF)
        return self

    def raw(self, data: bytes) -> ByteWriter:
        self._buf += data
        return self

    def block(self, data: bytes) -> ByteWriter:
        """Length-prefixed bytes."""
        return self.varint(len(data)).raw(data)

    def getvalue(self) -> bytes:
        return bytes(self._buf)

    def __len__(self) -> int:
        return len(self._buf)


class ByteReader:
    """Cursor over bytes; every read past the end raises TruncatedPayloadError."""

    def __init__(self, data: bytes, offset: int = 0) -> None:
        self._data = data
        self.offset = offset

    def varint(self) -> int:
        value, self.offset = leb128_decode(self._data, self.offset)
        return value

    def u8(self) -> int:
        return self.raw(1)[0]

    def raw(self, n: int) -> bytes:
        if self.offset + n > len(self._data):
            raise TruncatedPayloadError(
                "stream ended early",
                details={"offset": self.offset, "wanted": n, "size": len(self._data)},
            )
        chunk = self._data[self.offset : self.offset + n]
        self.offset += n
        return chunk

    def block(self) -> bytes:
        return self.raw(self.varint())

    @property
    def remaining(self) -> int:
        return len(self._data) - self.offset


# --- occupancy run lengths ---


def rle_encode(bitmap: npt.NDArray[np.integer]) -> bytes:
    """Row-major runs alternating 0/1, starting with a (possibly empty) 0-run."""
    flat = (np.asarray(bitmap).reshape(-1) != 0).astype(np.int8)
    if flat.size == 0:
        return b""
    change = np.flatnonzero(np.diff(flat)) + 1
    edges = np.concatenate(([0], change, [flat.size]))
    runs = np.diff(edges).tolist()
    if flat[0] == 1:
        runs.insert(0, 0)
    return b"".join(leb128_encode(int(r)) for r in runs)


def rle_decode(data: bytes, shape: tuple[int, ...]) -> npt.NDArray[np.uint8]:
    """Inverse of rle_encode for a bitmap of the given shape."""
    area = int(np.prod(shape)) if shape else 0
    runs: list[int] = []
    offset = 0
    try:
        while offset < len(data):
            run, offset = leb128_decode(data, offset)
            runs.append(run)
    except TruncatedPayloadError as exc:
        raise CorruptRunsError("truncated run length", details={"offset": offset}) from exc
    if sum(runs) != area:
        raise CorruptRunsError("run lengths do not cover the bitmap", details={"sum": sum(runs), "area": area})
    values = np.arange(len(runs)) % 2
    flat = np.repeat(values.astype(np.uint8), runs)
    return flat.reshape(shape)


# --- spatial prediction ---


def _predictor_masks(occupancy: npt.NDArray[np.bool_]) -> tuple[npt.NDArray[np.bool_], npt.NDArray[np.bool_]]:
    left = np.zeros_like(occupancy)
    left[:, 1:] = occupancy[:, 1:] & occupancy[:, :-1]
    up = np.zeros_like(occupancy)
    up[1:, :] = occupancy[1:, :] & occupancy[:-1, :] & ~left[1:, :]
    return left, up


def predict_residual(plane: npt.NDArray[np.integer], occupancy: npt.NDArray[np.integer]) -> npt.NDArray[np.int64]:
    """Residual against the occupied left neighbour, else the occupied upper one, else 0."""
    values = plane.astype(np.int64)
    occ = occupancy.astype(bool)
    if values.shape != occ.shape:
        raise ValueError("plane and occupancy differ in shape")
    left, up = _predictor_masks(occ)
    prediction = np.zeros_like(values)
    prediction[:, 1:] = np.where(left[:, 1:], values[:, :-1], 0)
    prediction[1:, :] += np.where(up[1:, :], values[:-1, :], 0)
    return values - prediction


def reconstruct_from_residual(
    residual: npt.NDArray[np.integer],
    occupancy: npt.NDArray[np.integer],
) -> npt.NDArray[np.int64]:
    """Inverse of predict_residual.

    Each row is a set of occupied runs; a run's first pixel is predicted from
    the row above, the rest accumulate along the run.
    """
    res = residual.astype(np.int64)
    occ = occupancy.astype(bool)
    left, up = _predictor_masks(occ)
    out = np.zeros_like(res)
    height, width = res.shape
    index = np.arange(width)
    for y in range(height):
        row = res[y].copy()
        if y:
            row += np.where(up[y], out[y - 1], 0)
        run_start = ~left[y]
        # segmented cumulative sum: restart at every pixel not predicted from its left
        total = np.cumsum(row)
        last_start = np.maximum.accumulate(np.where(run_start, index, 0))
        before = np.where(last_start > 0, total[last_start - 1], 0)
        out[y] = total - before
    return out


# --- entropy stage ---


def deflate(data: bytes, level: int = 9) -> bytes:
    """Raw DEFLATE (RFC 1951) without zlib or gzip framing."""
    compressor = zlib.compressobj(level, zlib.DEFLATED, -15)
    return compressor.compress(data) + compressor.flush()


def inflate(data: bytes) -> bytes:
    decompressor = zlib.decompressobj(-15)
    try:
        out = decompressor.decompress(data) + decompressor.flush()
    except zlib.error as exc:
        raise TruncatedPayloadError(f"corrupt DEFLATE block: {exc}") from exc
    if not decompressor.eof:
        raise TruncatedPayloadError("DEFLATE block ended early")
    return out
