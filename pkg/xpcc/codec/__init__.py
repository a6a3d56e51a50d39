"""Atlas sequence codec: quantize, predict, run-length and DEFLATE into an XPCC stream."""

from xpcc.codec.bitstream import bitrate, decode_sequence, encode_sequence, read_header, write_header
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
    dequantize,
    leb128_decode,
    leb128_encode,
    predict_residual,
    quantize,
    reconstruct_from_residual,
    rle_decode,
    rle_encode,
)

__all__ = [
    "MAGIC",
    "VERSION",
    "Bitstream",
    "Channel",
    "CodecParams",
    "DecodedSequence",
    "FrameHeader",
    "SectionRecord",
    "StreamHeader",
    "bitrate",
    "decode_sequence",
    "dequantize",
    "encode_sequence",
    "leb128_decode",
    "leb128_encode",
    "predict_residual",
    "quantize",
    "read_header",
    "reconstruct_from_residual",
    "rle_decode",
    "rle_encode",
    "write_header",
]
