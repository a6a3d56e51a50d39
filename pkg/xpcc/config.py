"""Pydantic Settings for the environment, and key=value pipeline configuration."""

from __future__ import annotations

from functools import lru_cache
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, Field, ValidationError
from pydantic_settings import BaseSettings

from xpcc.atlas.packer import DEFAULT_ALIGNMENT, DEFAULT_ATLAS_WIDTH
from xpcc.cloud.model import DEFAULT_BIT_DEPTH
from xpcc.codec.models import CodecParams
from xpcc.segmentation.models import SegmentationConfig, SignedAxis
from xpcc.utils.errors import ConfigurationError, IoFailureError


class Settings(BaseSettings):
    """Process-wide configuration loaded from environment variables."""

    model_config = {"env_file": ".env", "env_file_encoding": "utf-8", "extra": "ignore"}

    log_level: str = Field(default="INFO", alias="XPCC_LOG")
    log_format: Literal["auto", "json", "console"] = Field(default="auto", alias="XPCC_LOG_FORMAT")
    threads: int = Field(default=1, ge=1, alias="XPCC_THREADS")
    atlas_width: int = Field(default=DEFAULT_ATLAS_WIDTH, ge=1, alias="XPCC_ATLAS_WIDTH")
    alignment: int = Field(default=DEFAULT_ALIGNMENT, ge=1, alias="XPCC_ALIGNMENT")


@lru_cache
def get_settings() -> Settings:
    """Return a cached Settings instance."""
    return Settings()


class PackingConfig(BaseModel):
    atlas_width: int = Field(default=DEFAULT_ATLAS_WIDTH, ge=1)
    alignment: int = Field(default=DEFAULT_ALIGNMENT, ge=1)
    reuse_layout: bool = False


class ReconstructionConfig(BaseModel):
    """dedup_radius None means 0 for lossless streams and 1 for lossy ones."""

    dedup_radius: int | None = Field(default=None, ge=0)


class PipelineConfig(BaseModel):
    """Everything encode and decode need besides the input files."""

    segmentation: SegmentationConfig = Field(default_factory=SegmentationConfig)
    codec: CodecParams = Field(default_factory=CodecParams)
    packing: PackingConfig = Field(default_factory=PackingConfig)
    reconstruction: ReconstructionConfig = Field(default_factory=ReconstructionConfig)
    subdivide_parts: int = Field(default=1, ge=1)
    bit_depth: int = Field(default=DEFAULT_BIT_DEPTH, ge=1, le=21)
    frame_rate: float = Field(default=30.0, gt=0)

    @property
    def dedup_radius(self) -> int:
        radius = self.reconstruction.dedup_radius
        if radius is not None:
            return radius
        return 0 if self.codec.lossless else 1

    def to_flat(self) -> dict[str, Any]:
        """One dict keyed the way config files name things."""
        flat: dict[str, Any] = {}
        for section in _SECTIONS:
            flat.update(getattr(self, section).model_dump())
        for key in _TOP_LEVEL:
            flat[key] = getattr(self, key)
        return flat

    def with_overrides(self, **overrides: Any) -> PipelineConfig:
        """Copy with flat keys replaced; None values are ignored."""
        return _merged(self, {k: v for k, v in overrides.items() if v is not None})

    @classmethod
    def from_settings(cls, settings: Settings | None = None) -> PipelineConfig:
        settings = settings or get_settings()
        return cls(packing=PackingConfig(atlas_width=settings.atlas_width, alignment=settings.alignment))


_SECTIONS: dict[str, type[BaseModel]] = {
    "segmentation": SegmentationConfig,
    "codec": CodecParams,
    "packing": PackingConfig,
    "reconstruction": ReconstructionConfig,
}
_TOP_LEVEL = ("subdivide_parts", "bit_depth", "frame_rate")

KNOWN_KEYS: dict[str, str] = {
    **{key: section for section, model in _SECTIONS.items() for key in model.model_fields},
    **{key: "" for key in _TOP_LEVEL},
}


def from_flat(flat: dict[str, Any]) -> PipelineConfig:
    """Build a PipelineConfig from flat config-file keys."""
    unknown = sorted(set(flat) - set(KNOWN_KEYS))
    if unknown:
        raise ConfigurationError(f"unknown config key: {unknown[0]}", details={"keys": unknown})
    grouped: dict[str, Any] = {section: {} for section in _SECTIONS}
    for key, value in flat.items():
        if isinstance(value, SignedAxis):
            value = value.value
        section = KNOWN_KEYS[key]
        if section:
            grouped[section][key] = value
        else:
            grouped[key] = value
    try:
        return PipelineConfig.model_validate(grouped)
    except ValidationError as exc:
        first = exc.errors()[0]
        key = next((str(part) for part in reversed(first["loc"]) if str(part) in KNOWN_KEYS), "")
        raise ConfigurationError(
            f"invalid value for {key or 'config'}: {first['msg']}",
            details={"key": key, "errors": [e["msg"] for e in exc.errors()]},
        ) from exc


def _truthy(value: Any) -> bool:
    return value is True or str(value).strip().lower() in ("true", "1", "yes", "on")


def _merged(base: PipelineConfig, values: dict[str, Any]) -> PipelineConfig:
    """Apply flat values over base; choosing one section-count mode clears the other."""
    values = dict(values)
    if values.get("target_sections") is not None and "auto" not in values:
        values["auto"] = False
    if _truthy(values.get("auto")) and "target_sections" not in values:
        values["target_sections"] = None
    return from_flat({**base.to_flat(), **values})


def parse_config_text(text: str, source: str = "<config>") -> dict[str, Any]:
    """Parse key=value lines; '#' starts a comment, blank lines are skipped."""
    values: dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(
                f"{source}:{lineno}: expected key=value",
                details={"line": lineno, "text": raw},
            )
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigurationError(
                f"{source}:{lineno}: unknown config key {key!r}",
                details={"line": lineno, "key": key},
            )
        values[key] = None if value.lower() in ("", "none") else value
    return values


def load_config_file(path: str | Path | None, base: PipelineConfig | None = None) -> PipelineConfig:
    """Read a key=value config file on top of base (defaults when None)."""
    base = base or PipelineConfig()
    if path is None:
        return base
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoFailureError(f"cannot read config {path}: {exc}", details={"path": str(path)}) from exc
    return _merged(base, parse_config_text(text, str(path)))
