"""XPCC container: atlas sequences to bytes and back.

Layout::

    "XPCC" | u8 version | varint header_length | header | u32le crc32
    payload: per frame, per channel (occupancy, d0, d1, a0, a1) one
             varint-length-prefixed raw DEFLATE block

The CRC covers everything from the magic through the header. Depth and
attribute blocks hold int32 little-endian residuals of quantized levels:
spatial residuals in intra frames, differences from the previous frame's
levels in inter frames. Occupancy is always run-length coded.
"""

from __future__ import annotations

import concurrent.futures
import functools
import zlib
from collections.abc import Callable, Sequence

import numpy as np
import numpy.typing as npt

from xpcc.atlas.models import Atlas
from xpcc.codec.models import (
    MAGIC,
    VERSION,
    Bitstream,
    Channel,
    CodecParams,
    DecodedSequence,
    FrameHeader,
    SectionRecord,
    StreamHeader,
)
from xpcc.codec.primitives import (
    ByteReader,
    ByteWriter,
    deflate,
    dequantize_array,
    inflate,
    predict_residual,
    quantize_array,
    reconstruct_from_residual,
    rle_decode,
    rle_encode,
)
from xpcc.segmentation.models import AxisName, CrossSection, SignedAxis
from xpcc.utils.errors import (
    BadMagicError,
    BitstreamError,
    CrcMismatchError,
    TrailingDataError,
    TruncatedPayloadError,
    UnsupportedVersionError,
)
from xpcc.utils.logging import frame_context, get_logger

logger = get_logger(__name__)

_DTYPES: dict[Channel, type[np.generic]] = {
    Channel.OCCUPANCY: np.uint8,
    Channel.D0: np.uint16,
    Channel.D1: np.uint16,
    Channel.A0: np.uint8,
    Channel.A1: np.uint8,
}

Levels = dict[Channel, npt.NDArray[np.int64]]


# --- header ---


def _write_record(w: ByteWriter, r: SectionRecord) -> None:
    w.varint(r.section_id).u8(int(r.cut_axis)).u8(r.main_view.code)
    w.varint(r.slab[0]).varint(r.slab[1])
    w.varint(int(round(2 * r.center[0]))).varint(int(round(2 * r.center[1])))
    w.varint(int(round(2 * r.a))).varint(int(round(2 * r.b)))
    w.u8(r.overlap_flags).u8(r.plane.code)
    for value in r.origin:
        w.varint(value)
    w.varint(r.width).varint(r.height).varint(r.u).varint(r.v).u8(int(r.rotated))


def _read_record(r: ByteReader) -> SectionRecord:
    section_id = r.varint()
    cut, view = r.u8(), r.u8()
    slab = (r.varint(), r.varint())
    center = (r.varint() / 2, r.varint() / 2)
    a, b = r.varint() / 2, r.varint() / 2
    flags, plane = r.u8(), r.u8()
    origin = (r.varint(), r.varint(), r.varint())
    width, height, u, v = r.varint(), r.varint(), r.varint(), r.varint()
    rotated = r.u8()
    if cut > 2 or view > 5 or plane > 5 or flags > 3 or rotated > 1 or a < b:
        raise BitstreamError("invalid section record", details={"section_id": section_id})
    return SectionRecord(
        section_id=section_id,
        cut_axis=AxisName(cut),
        main_view=SignedAxis.from_code(view),
        slab=slab,
        center=center,
        a=a,
        b=b,
        overlap_lo=bool(flags & 1),
        overlap_hi=bool(flags & 2),
        plane=SignedAxis.from_code(plane),
        origin=origin,
        width=width,
        height=height,
        u=u,
        v=v,
        rotated=bool(rotated),
    )


def write_header(header: StreamHeader) -> bytes:
    """Magic, version, header and CRC: the bytes that precede the payload."""
    body = ByteWriter()
    p = header.params
    body.varint(header.frame_count).varint(header.bit_depth).varint(int(round(header.frame_rate * 1000)))
    body.varint(p.geometry_qstep).varint(p.attribute_qstep).varint(p.inter_period).varint(p.compressor_level)
    for frame in header.frames:
        body.varint(frame.width).varint(frame.height).varint(frame.point_count).u8(int(frame.intra))
        body.varint(len(frame.sections))
        for record in frame.sections:
            _write_record(body, record)
    prefix = ByteWriter().raw(MAGIC).u8(header.version).block(body.getvalue()).getvalue()
    return prefix + zlib.crc32(prefix).to_bytes(4, "little")


def read_header(data: bytes) -> tuple[StreamHeader, int]:
    """Parse and CRC-check the header; returns it with the payload offset."""
    if data[: len(MAGIC)] != MAGIC:
        raise BadMagicError("not an XPCC stream", details={"magic": data[: len(MAGIC)].hex()})
    reader = ByteReader(data, len(MAGIC))
    version = reader.u8()
    if version != VERSION:
        raise UnsupportedVersionError(f"unsupported stream version {version}", details={"version": version})
    body = reader.block()
    crc = int.from_bytes(reader.raw(4), "little")
    computed = zlib.crc32(data[: reader.offset - 4])
    if crc != computed:
        raise CrcMismatchError("header CRC mismatch", details={"stored": crc, "computed": computed})

    r = ByteReader(body)
    frame_count, bit_depth, millihertz = r.varint(), r.varint(), r.varint()
    try:
        params = CodecParams(
            geometry_qstep=r.varint(),
            attribute_qstep=r.varint(),
            inter_period=r.varint(),
            compressor_level=r.varint(),
        )
    except ValueError as exc:
        raise BitstreamError(f"invalid codec parameters: {exc}") from exc
    frames = []
    for _ in range(frame_count):
        width, height, points, intra = r.varint(), r.varint(), r.varint(), r.u8()
        records = tuple(_read_record(r) for _ in range(r.varint()))
        frames.append(FrameHeader(width, height, points, bool(intra), records))
    if r.remaining:
        raise TrailingDataError("bytes left over in header", details={"remaining": r.remaining})
    header = StreamHeader(
        bit_depth=bit_depth,
        frame_rate=millihertz / 1000,
        params=params,
        frames=tuple(frames),
        version=version,
    )
    return header, reader.offset


# --- channel coding ---


def _samples(residual: npt.NDArray[np.int64]) -> bytes:
    if residual.ndim == 3:
        residual = np.moveaxis(residual, 2, 0)
    return np.ascontiguousarray(residual, dtype="<i4").tobytes()


def _spatial(
    levels: npt.NDArray[np.int64],
    occupancy: npt.NDArray[np.uint8],
    fn: Callable[[npt.NDArray[np.int64], npt.NDArray[np.uint8]], npt.NDArray[np.int64]],
) -> npt.NDArray[np.int64]:
    if levels.ndim == 2:
        return fn(levels, occupancy)
    return np.stack([fn(levels[..., c], occupancy) for c in range(levels.shape[2])], axis=-1)


def _encode_channel(channel: Channel, levels: Levels, reference: Levels | None, level: int) -> bytes:
    occupancy = levels[Channel.OCCUPANCY].astype(np.uint8)
    if channel is Channel.OCCUPANCY:
        return deflate(rle_encode(occupancy), level)
    current = levels[channel]
    if reference is None:
        residual = _spatial(current, occupancy, predict_residual)
    else:
        residual = current - reference[channel]
    return deflate(_samples(residual), level)


def _decode_channel(
    channel: Channel,
    block: bytes,
    shape: tuple[int, ...],
    occupancy: npt.NDArray[np.uint8] | None,
    previous: npt.NDArray[np.int64] | None,
) -> npt.NDArray[np.int64]:
    raw = inflate(block)
    if channel is Channel.OCCUPANCY:
        return rle_decode(raw, shape).astype(np.int64)
    expected = int(np.prod(shape)) * 4
    if len(raw) != expected:
        raise TruncatedPayloadError(
            "channel block has the wrong sample count",
            details={"channel": channel.value, "bytes": len(raw), "expected": expected},
        )
    residual = np.frombuffer(raw, dtype="<i4").astype(np.int64)
    if len(shape) == 3:
        residual = np.moveaxis(residual.reshape(shape[2], shape[0], shape[1]), 0, 2)
    else:
        residual = residual.reshape(shape)
    if previous is not None:
        return previous + residual
    assert occupancy is not None
    return _spatial(residual, occupancy, reconstruct_from_residual)


def _shape(channel: Channel, height: int, width: int) -> tuple[int, ...]:
    return (height, width, 3) if channel.is_attribute else (height, width)


def _quantized(atlas: Atlas, params: CodecParams) -> Levels:
    arrays = atlas.channels()
    return {ch: quantize_array(arrays[ch.value], params.qstep(ch)) for ch in Channel}


def _records(atlas: Atlas, sections: Sequence[CrossSection] | None) -> tuple[SectionRecord, ...]:
    by_id = {s.section_id: s for s in sections or ()}
    placements = {p.section_id: p for p in atlas.placements}
    return tuple(
        SectionRecord.build(layout, placements[layout.section_id], by_id.get(layout.section_id))
        for layout in atlas.layouts
    )


# --- public API ---


def encode_sequence(
    atlases: Sequence[Atlas],
    params: CodecParams | None = None,
    *,
    sections: Sequence[Sequence[CrossSection]] | None = None,
    point_counts: Sequence[int] | None = None,
    bit_depth: int = 10,
    frame_rate: float = 30.0,
    threads: int = 1,
) -> Bitstream:
    """Serialize a sequence of atlases.

    Frame i is intra when i is a multiple of inter_period or its dimensions
    differ from frame i-1; otherwise its depth and attribute levels are coded
    as differences from frame i-1's levels. Levels are exactly what the
    decoder rebuilds, so encoder and decoder never drift.

    Args:
        atlases: One packed atlas per frame.
        params: Quantizer and temporal settings (lossless all-intra if None).
        sections: Optional per-frame segmentation metadata carried in the header.
        point_counts: Source point count per frame (for bits per point).
        bit_depth: Voxel grid depth of the source clouds.
        frame_rate: Sequence frame rate in Hz.
        threads: Channel blocks of a frame compress on this many threads.

    Returns:
        The encoded Bitstream.
    """
    params = params or CodecParams()
    if sections is not None and len(sections) != len(atlases):
        raise ValueError("sections must hold one entry per atlas")
    if point_counts is not None and len(point_counts) != len(atlases):
        raise ValueError("point_counts must hold one entry per atlas")

    frames: list[FrameHeader] = []
    blocks: list[list[bytes]] = []
    previous: Levels | None = None
    previous_dims: tuple[int, int] | None = None
    pool = concurrent.futures.ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        for i, atlas in enumerate(atlases):
            dims = (atlas.width, atlas.height)
            intra = i % params.inter_period == 0 or dims != previous_dims
            levels = _quantized(atlas, params)
            encode = functools.partial(
                _encode_channel,
                levels=levels,
                reference=None if intra else previous,
                level=params.compressor_level,
            )
            with frame_context(i):
                coded = list(pool.map(encode, Channel)) if pool else [encode(ch) for ch in Channel]
                logger.debug("frame_encoded", intra=intra, dims=dims, bytes=sum(map(len, coded)))
            blocks.append(coded)
            frames.append(
                FrameHeader(
                    width=atlas.width,
                    height=atlas.height,
                    point_count=point_counts[i] if point_counts is not None else 0,
                    intra=intra,
                    sections=_records(atlas, sections[i] if sections is not None else None),
                )
            )
            previous, previous_dims = levels, dims
    finally:
        if pool is not None:
            pool.shutdown()

    header = StreamHeader(bit_depth=bit_depth, frame_rate=frame_rate, params=params, frames=tuple(frames))
    out = ByteWriter().raw(write_header(header))
    for coded in blocks:
        for block in coded:
            out.block(block)
    sizes = tuple({ch: len(b) for ch, b in zip(Channel, coded, strict=True)} for coded in blocks)
    stream = Bitstream(data=out.getvalue(), header=header, channel_bytes=sizes)
    logger.info("sequence_encoded", frames=len(frames), bytes=len(stream), lossless=params.lossless)
    return stream


def decode_sequence(stream: Bitstream | bytes) -> DecodedSequence:
    """Rebuild every atlas of a stream; raises before returning anything on corrupt input."""
    data = stream.data if isinstance(stream, Bitstream) else bytes(stream)
    header, offset = read_header(data)
    reader = ByteReader(data, offset)
    params = header.params
    atlases: list[Atlas] = []
    previous: Levels | None = None
    sizes: list[dict[Channel, int]] = []
    for index, frame in enumerate(header.frames):
        if not frame.intra and (previous is None or header.frames[index - 1].dims != frame.dims):
            raise BitstreamError("inter frame without a matching reference", details={"frame": index})
        levels: Levels = {}
        frame_sizes: dict[Channel, int] = {}
        with frame_context(index):
            for ch in Channel:
                shape = _shape(ch, frame.height, frame.width)
                occupancy = levels[Channel.OCCUPANCY].astype(np.uint8) if Channel.OCCUPANCY in levels else None
                prior = None if frame.intra or ch is Channel.OCCUPANCY or previous is None else previous[ch]
                block = reader.block()
                frame_sizes[ch] = len(block)
                levels[ch] = _decode_channel(ch, block, shape, occupancy, prior)
            logger.debug("frame_decoded", intra=frame.intra, bytes=sum(frame_sizes.values()))
        sizes.append(frame_sizes)
        atlases.append(_atlas(frame, levels, params))
        previous = levels
    if reader.remaining:
        raise TrailingDataError("bytes after the last block", details={"remaining": reader.remaining})
    logger.debug("sequence_decoded", frames=len(atlases), bytes=len(data))
    return DecodedSequence(header=header, atlases=atlases, channel_bytes=sizes)


def _atlas(frame: FrameHeader, levels: Levels, params: CodecParams) -> Atlas:
    values = {
        ch: dequantize_array(levels[ch], params.qstep(ch), ch.maximum).astype(_DTYPES[ch]) for ch in Channel
    }
    atlas = Atlas(
        width=frame.width,
        height=frame.height,
        placements=[r.placement for r in frame.sections],
        layouts=[r.layout for r in frame.sections],
        occupancy=values[Channel.OCCUPANCY],
        geometry_d0=values[Channel.D0],
        geometry_d1=values[Channel.D1],
        attribute_a0=values[Channel.A0],
        attribute_a1=values[Channel.A1],
    )
    if atlas.area:
        atlas.occupancy_ratio = int(np.count_nonzero(atlas.occupancy)) / atlas.area
    return atlas


def bitrate(stream: Bitstream | bytes, frame_rate: float | None = None) -> tuple[float, float]:
    """Bits per second and bits per source point of a whole stream.

    Args:
        stream: Encoded stream.
        frame_rate: Playback rate in Hz; defaults to the rate in the header.

    Returns:
        (bits per second, bits per point); both 0 for an empty sequence.
    """
    data = stream.data if isinstance(stream, Bitstream) else bytes(stream)
    header = stream.header if isinstance(stream, Bitstream) else read_header(data)[0]
    if header.frame_count == 0:
        return 0.0, 0.0
    bits = len(data) * 8
    rate = header.frame_rate if frame_rate is None else frame_rate
    bps = bits * rate / header.frame_count
    bpp = bits / header.point_count if header.point_count else 0.0
    return bps, bpp

