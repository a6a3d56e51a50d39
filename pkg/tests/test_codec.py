"""Tests for coding primitives and the XPCC container."""

from __future__ import annotations

from dataclasses import replace

import numpy as np
import pydantic
import pytest

from xpcc import synthetic
from xpcc.atlas import Atlas, pack
from xpcc.cloud.model import PointCloud
from xpcc.codec import (
    MAGIC,
    Channel,
    CodecParams,
    SectionRecord,
    bitrate,
    decode_sequence,
    dequantize,
    encode_sequence,
    leb128_decode,
    leb128_encode,
    predict_residual,
    quantize,
    read_header,
    reconstruct_from_residual,
    rle_decode,
    rle_encode,
    write_header,
)
from xpcc.codec.primitives import ByteReader, ByteWriter, deflate, dequantize_array, inflate, quantize_array
from xpcc.projection import project_section
from xpcc.segmentation import SignedAxis
from xpcc.synthetic import whole_section
from xpcc.utils.errors import (
    BadMagicError,
    BitstreamError,
    CorruptRunsError,
    TrailingDataError,
    TruncatedPayloadError,
    UnsupportedVersionError,
)


def _atlas(cloud: PointCloud) -> Atlas:
    return pack([project_section(cloud, whole_section(cloud), SignedAxis.POS_Z)], atlas_width=128, alignment=16)


@pytest.fixture(scope="module")
def shell_atlas() -> Atlas:
    return _atlas(synthetic.elliptic_shell())


# --- quantizer ---


@pytest.mark.parametrize("qstep", [1, 2, 4, 8, 16])
def test_quantizer_error_bound_exhaustive(qstep: int) -> None:
    values = np.arange(1024)
    restored = quantize_array(values, qstep) * qstep
    assert np.all(np.abs(restored - values) * 2 <= qstep)
    for v in range(1024):
        assert abs(dequantize(quantize(v, qstep), qstep) - v) * 2 <= qstep


def test_quantizer_rounds_halves_up() -> None:
    assert quantize(5, 2) == 3
    assert quantize(4, 8) == 1
    assert quantize(3, 8) == 0
    assert quantize(7, 1) == 7


def test_quantizer_rejects_zero_step() -> None:
    with pytest.raises(ValueError):
        quantize(3, 0)
    with pytest.raises(ValueError):
        quantize_array(np.arange(3), 0)


def test_dequantize_clips_to_channel_range() -> None:
    levels = quantize_array(np.array([65535, 255]), 16)
    assert dequantize_array(levels[:1], 16, Channel.D0.maximum).tolist() == [65535]
    assert dequantize_array(levels[1:], 16, Channel.A0.maximum).tolist() == [255]


# --- LEB128 ---


def test_leb128_known_values() -> None:
    assert leb128_encode(0) == b"\x00"
    assert leb128_encode(127) == b"\x7f"
    assert leb128_encode(128) == b"\x80\x01"
    assert leb128_encode(300) == b"\xac\x02"
    assert leb128_decode(b"\xff\xac\x02", 1) == (300, 3)


def test_leb128_round_trip(rng: np.random.Generator) -> None:
    writer = ByteWriter()
    values = [int(v) for v in rng.integers(0, 2**40, size=1000)]
    for v in values:
        writer.varint(v)
    reader = ByteReader(writer.getvalue())
    assert [reader.varint() for _ in values] == values
    assert reader.remaining == 0


def test_leb128_errors() -> None:
    with pytest.raises(ValueError):
        leb128_encode(-1)
    with pytest.raises(TruncatedPayloadError):
        leb128_decode(b"\x80\x80")
    with pytest.raises(TruncatedPayloadError):
        ByteReader(b"\x05ab").block()


# --- occupancy runs ---


def test_rle_known_runs() -> None:
    assert rle_encode(np.zeros((2, 2))) == b"\x04"
    assert rle_encode(np.ones((1, 3))) == b"\x00\x03"
    assert rle_encode(np.array([[0, 1, 1, 0]])) == b"\x01\x02\x01"
    assert rle_encode(np.zeros((0, 5))) == b""


def test_rle_round_trip(rng: np.random.Generator) -> None:
    for _ in range(1000):
        h, w = (int(v) for v in rng.integers(1, 40, size=2))
        bitmap = (rng.random((h, w)) < rng.random()).astype(np.uint8)
        assert np.array_equal(rle_decode(rle_encode(bitmap), (h, w)), bitmap)


def test_rle_rejects_bad_runs() -> None:
    with pytest.raises(CorruptRunsError):
        rle_decode(b"\x03", (2, 2))
    with pytest.raises(CorruptRunsError):
        rle_decode(b"\x80", (2, 2))


# --- spatial predictor ---


def test_predictor_uses_left_then_up() -> None:
    plane = np.array([[5, 7, 0], [6, 9, 4]])
    occupancy = np.array([[1, 1, 0], [1, 0, 1]])
    residual = predict_residual(plane, occupancy)
    assert residual.tolist() == [[5, 2, 0], [1, 9, 4]]


def test_predictor_inverse_identity(rng: np.random.Generator) -> None:
    for _ in range(1000):
        h, w = (int(v) for v in rng.integers(1, 24, size=2))
        occupancy = (rng.random((h, w)) < rng.random()).astype(np.uint8)
        plane = rng.integers(0, 1024, size=(h, w)) * occupancy
        residual = predict_residual(plane, occupancy)
        assert np.array_equal(reconstruct_from_residual(residual, occupancy), plane)


def test_predictor_shape_mismatch() -> None:
    with pytest.raises(ValueError):
        predict_residual(np.zeros((2, 2)), np.zeros((2, 3)))


# --- DEFLATE ---


def test_deflate_round_trip_and_corruption() -> None:
    payload = bytes(range(256)) * 20
    packed = deflate(payload, 9)
    assert inflate(packed) == payload
    assert len(deflate(payload, 0)) > len(packed)
    with pytest.raises(TruncatedPayloadError):
        inflate(packed[: len(packed) // 2])
    with pytest.raises(TruncatedPayloadError):
        inflate(b"\xff\xff\xff\xff")


# --- container ---


def test_lossless_round_trip(shell_atlas: Atlas) -> None:
    stream = encode_sequence([shell_atlas], point_counts=[10080])
    assert stream.data.startswith(MAGIC)
    decoded = decode_sequence(stream.data)
    assert decoded.header.frame_count == 1
    assert decoded.header.params.lossless
    assert decoded.atlases[0].same_channels(shell_atlas)
    assert decoded.atlases[0].placements == shell_atlas.placements
    assert decoded.atlases[0].layouts == shell_atlas.layouts
    assert decoded.atlases[0].occupancy_ratio == pytest.approx(shell_atlas.occupancy_ratio)
    assert decoded.channel_bytes == list(stream.channel_bytes)


@pytest.mark.parametrize("qstep", [2, 4, 8, 16])
def test_lossy_error_bound(shell_atlas: Atlas, qstep: int) -> None:
    params = CodecParams(geometry_qstep=qstep, attribute_qstep=qstep)
    decoded = decode_sequence(encode_sequence([shell_atlas], params)).atlases[0]
    assert np.array_equal(decoded.occupancy, shell_atlas.occupancy)
    for name in ("d0", "d1", "a0", "a1"):
        before = shell_atlas.channels()[name].astype(np.int64)
        after = decoded.channels()[name].astype(np.int64)
        assert np.all(np.abs(after - before) * 2 <= qstep), name


def test_inter_frames_are_exact_and_smaller() -> None:
    sequence = synthetic.translating_sequence(frames=4)
    atlases = [_atlas(frame) for frame in sequence.frames]
    intra = encode_sequence(atlases, CodecParams(inter_period=1))
    inter = encode_sequence(atlases, CodecParams(inter_period=4))
    assert [f.intra for f in inter.header.frames] == [True, False, False, False]
    assert len(inter) < len(intra)
    decoded = decode_sequence(inter)
    for original, back in zip(atlases, decoded.atlases, strict=True):
        assert back.same_channels(original)


def test_dimension_change_forces_intra(shell_atlas: Atlas) -> None:
    other = _atlas(synthetic.flat_plate())
    assert (other.width, other.height) != (shell_atlas.width, shell_atlas.height)
    stream = encode_sequence([shell_atlas, other, other], CodecParams(inter_period=8))
    assert [f.intra for f in stream.header.frames] == [True, True, False]
    assert decode_sequence(stream).atlases[1].same_channels(other)


def test_threads_do_not_change_bytes(shell_atlas: Atlas) -> None:
    params = CodecParams(geometry_qstep=2, inter_period=2)
    single = encode_sequence([shell_atlas, shell_atlas], params)
    pooled = encode_sequence([shell_atlas, shell_atlas], params, threads=4)
    assert single.data == pooled.data


def test_section_records_travel_in_header(shell_atlas: Atlas) -> None:
    cloud = synthetic.elliptic_shell()
    section = replace(whole_section(cloud), ellipse=replace(whole_section(cloud).ellipse, center=(100.5, 99.0)))
    stream = encode_sequence([shell_atlas], sections=[[section]], bit_depth=10, frame_rate=29.97)
    header, _ = read_header(stream.data)
    assert header.frame_rate == pytest.approx(29.97)
    record = header.frames[0].sections[0]
    assert isinstance(record, SectionRecord)
    assert record.center == (100.5, 99.0)
    assert record.slab == (100, 183)
    assert record.plane == SignedAxis.POS_Z
    restored = decode_sequence(stream).sections(0)[0]
    assert restored.slab == section.slab
    assert restored.ellipse.center == (100.5, 99.0)


def test_frame_bytes_account_for_payload(shell_atlas: Atlas) -> None:
    stream = encode_sequence([shell_atlas, shell_atlas], CodecParams(inter_period=2))
    _, offset = read_header(stream.data)
    blocks = sum(len(leb128_encode(n)) + n for sizes in stream.channel_bytes for n in sizes.values())
    assert offset + blocks == len(stream)
    split = stream.frame_bytes(0)
    assert split["geometry"] + split["attribute"] == split["total"]
    assert split["geometry"] == sum(stream.channel_bytes[0][ch] for ch in (Channel.OCCUPANCY, Channel.D0, Channel.D1))


def test_header_crc_catches_single_byte_corruption(shell_atlas: Atlas, rng: np.random.Generator) -> None:
    stream = encode_sequence([shell_atlas], sections=[[whole_section(synthetic.elliptic_shell())]])
    _, offset = read_header(stream.data)
    for _ in range(100):
        position = int(rng.integers(0, offset))
        corrupted = bytearray(stream.data)
        corrupted[position] ^= int(rng.integers(1, 256))
        with pytest.raises(BitstreamError):
            decode_sequence(bytes(corrupted))


def test_decode_rejects_bad_streams(shell_atlas: Atlas) -> None:
    data = encode_sequence([shell_atlas]).data
    with pytest.raises(BadMagicError):
        decode_sequence(b"")
    with pytest.raises(BadMagicError):
        decode_sequence(b"NOPE" + data[4:])
    with pytest.raises(UnsupportedVersionError):
        decode_sequence(data[:4] + b"\x02" + data[5:])
    with pytest.raises(TrailingDataError):
        decode_sequence(data + b"\x00")
    with pytest.raises(TruncatedPayloadError):
        decode_sequence(data[:-3])


def test_decode_rejects_inter_frame_without_reference(shell_atlas: Atlas) -> None:
    stream = encode_sequence([shell_atlas])
    header, offset = read_header(stream.data)
    broken = replace(header, frames=(replace(header.frames[0], intra=False),))
    with pytest.raises(BitstreamError):
        decode_sequence(write_header(broken) + stream.data[offset:])


def test_bitrate(shell_atlas: Atlas) -> None:
    stream = encode_sequence([shell_atlas, shell_atlas], point_counts=[100, 100], frame_rate=30.0)
    bps, bpp = bitrate(stream)
    assert bps == pytest.approx(len(stream) * 8 * 30.0 / 2)
    assert bpp == pytest.approx(len(stream) * 8 / 200)
    assert bitrate(stream.data, frame_rate=10.0)[0] == pytest.approx(len(stream) * 8 * 10.0 / 2)
    assert bitrate(encode_sequence([])) == (0.0, 0.0)


def test_codec_params_validation() -> None:
    with pytest.raises(pydantic.ValidationError):
        CodecParams(geometry_qstep=0)
    with pytest.raises(pydantic.ValidationError):
        CodecParams(compressor_level=10)
    assert CodecParams(attribute_qstep=2).qstep(Channel.A1) == 2
    assert CodecParams(attribute_qstep=2).qstep(Channel.OCCUPANCY) == 1
