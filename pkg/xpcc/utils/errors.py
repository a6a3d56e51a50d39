"""Custom exception hierarchy for the codec."""

from __future__ import annotations

from typing import Any


class XpccError(Exception):
    """Base exception for all codec errors."""

    def __init__(self, message: str, details: dict[str, Any] | None = None) -> None:
        super().__init__(message)
        self.message = message
        self.details = details or {}


class ConfigurationError(XpccError):
    """Raised when configuration is invalid or missing."""


# --- point clouds and PLY ---


class PointCloudError(XpccError):
    """Raised for invalid point clouds or unreadable PLY files."""


class MissingPropertyError(PointCloudError):
    """PLY header lacks x/y/z or red/green/blue."""


class UnsupportedFormatError(PointCloudError):
    """PLY format other than ascii or binary_little_endian."""


class MalformedHeaderError(PointCloudError):
    """PLY header cannot be parsed."""


class IoFailureError(PointCloudError):
    """Reading or writing a file failed."""


class CoordinateRangeError(PointCloudError):
    """A coordinate lies outside [0, 2^bit_depth)."""


class DuplicatePointError(PointCloudError):
    """Two points share identical coordinates."""


class EmptyCloudError(PointCloudError):
    """An operation needs at least one point."""


# --- segmentation ---


class SegmentationError(XpccError):
    """Raised when cross-sectional segmentation fails."""


class EmptySlabError(SegmentationError):
    """A slab range holds no points."""


class InvalidSectionCountError(SegmentationError):
    """Requested section count exceeds the non-empty slab count."""


class TooManyPartsError(SegmentationError):
    """A section has fewer slabs than requested parts."""


class InvalidPartCountError(SegmentationError):
    """Subdivision asked for fewer than two parts."""


# --- projection / atlas ---


class ProjectionError(XpccError):
    """Raised when a section cannot be projected."""


class EmptySectionError(ProjectionError):
    """A section holds no points."""


class AtlasError(XpccError):
    """Raised for packing and unpacking failures."""


class MapTooWideError(AtlasError):
    """A map does not fit the atlas width in either orientation."""


class ZeroAreaError(AtlasError):
    """The atlas has no pixels."""


class InconsistentMetadataError(AtlasError):
    """Placements and map dimensions disagree."""


# --- bitstream ---


class BitstreamError(XpccError):
    """Raised when a bitstream cannot be decoded."""


class BadMagicError(BitstreamError):
    """Stream does not start with the XPCC magic."""


class UnsupportedVersionError(BitstreamError):
    """Stream version is not understood."""


class CrcMismatchError(BitstreamError):
    """Header CRC-32 does not match."""


class CorruptRunsError(BitstreamError):
    """Run lengths do not sum to the bitmap area."""


class TruncatedPayloadError(BitstreamError):
    """Stream ended before all declared data was read."""


class TrailingDataError(BitstreamError):
    """Bytes remain after the last declared block."""


# --- reconstruction / metrics ---


class ReconstructionError(XpccError):
    """Raised when decoded maps cannot be turned back into points."""


class InconsistentMapsError(ReconstructionError):
    """Occupancy and depth maps disagree."""


class MetricsError(XpccError):
    """Raised when a quality metric cannot be computed."""


class DimMismatchError(MetricsError):
    """Two frames or frame lists have different shapes."""


class InsufficientPointsError(MetricsError):
    """An RD curve has fewer than four points."""


class NoOverlapError(MetricsError):
    """Two RD curves share no common interval."""
