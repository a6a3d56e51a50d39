"""Axes, ellipse parameters, cross-sections and segmentation config."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum, IntEnum
from typing import Any, Literal

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, Field, field_validator, model_validator

from xpcc.utils.errors import ConfigurationError


class AxisName(IntEnum):
    """Unsigned coordinate axis; the value is the column index in a point array."""

    X = 0
    Y = 1
    Z = 2

    @property
    def orthogonal(self) -> tuple[AxisName, AxisName]:
        """The two other axes, in increasing order: the (u, w) plane of a cut."""
        a, b = (ax for ax in AxisName if ax != self)
        return a, b


class SignedAxis(str, Enum):
    """A viewing or projection direction along one axis."""

    POS_X = "+X"
    NEG_X = "-X"
    POS_Y = "+Y"
    NEG_Y = "-Y"
    POS_Z = "+Z"
    NEG_Z = "-Z"

    @property
    def axis(self) -> AxisName:
        return AxisName("XYZ".index(self.value[1]))

    @property
    def sign(self) -> int:
        return 1 if self.value[0] == "+" else -1

    @property
    def code(self) -> int:
        """Wire code: 2 * axis + (1 if negative)."""
        return 2 * int(self.axis) + (0 if self.sign > 0 else 1)

    @classmethod
    def from_code(cls, code: int) -> SignedAxis:
        return list(cls)[code]

    @classmethod
    def parse(cls, text: str) -> SignedAxis:
        """Accept '+Z', 'Z', '-x' and similar spellings."""
        value = text.strip().upper()
        if len(value) == 1:
            value = "+" + value
        try:
            return cls(value)
        except ValueError as exc:
            raise ConfigurationError(f"invalid signed axis: {text!r}") from exc


def candidate_planes(main_view: SignedAxis) -> list[SignedAxis]:
    """Default plane candidates: the main view first, then the rest in declaration order."""
    return [main_view, *(p for p in SignedAxis if p != main_view)]


@dataclass(frozen=True)
class Axis:
    """Cut axis of a segmentation plus the viewer-facing direction."""

    cut: AxisName
    main_view: SignedAxis = SignedAxis.POS_Z


@dataclass(frozen=True)
class EllipseParams:
    """Elliptic-cylinder cross-section fitted to a slab (a is semi-major)."""

    center: tuple[float, float]
    a: float
    b: float

    def __post_init__(self) -> None:
        if self.b < 0 or self.a < self.b:
            raise ValueError(f"ellipse requires a >= b >= 0, got a={self.a}, b={self.b}")


@dataclass(frozen=True, eq=False)
class CrossSection:
    """A slab of the cloud along the cut axis and the points it holds."""

    axis: Axis
    slab: tuple[int, int]
    ellipse: EllipseParams
    point_ids: npt.NDArray[np.int64]
    overlap_lo: bool = False
    overlap_hi: bool = False
    section_id: int = 0

    def __len__(self) -> int:
        return len(self.point_ids)

    def with_id(self, section_id: int) -> CrossSection:
        return replace(self, section_id=section_id)

    def describe(self) -> dict[str, Any]:
        """JSON-ready layout row (section_id, axis, slab, ellipse, overlap flags)."""
        return {
            "section_id": self.section_id,
            "axis": self.axis.cut.name,
            "main_view": self.axis.main_view.value,
            "slab": list(self.slab),
            "ellipse": {
                "center": list(self.ellipse.center),
                "a": self.ellipse.a,
                "b": self.ellipse.b,
            },
            "overlap_lo": self.overlap_lo,
            "overlap_hi": self.overlap_hi,
            "points": len(self.point_ids),
        }


@dataclass(frozen=True, eq=False)
class LayerProfile:
    """Per-slab maximum depth-cluster count along one projection direction."""

    lo: int
    max_layers: npt.NDArray[np.int64] = field(default_factory=lambda: np.zeros(0, np.int64))

    def __len__(self) -> int:
        return len(self.max_layers)

    def at(self, slab: int) -> int:
        return int(self.max_layers[slab - self.lo])

    def mean_nonempty(self) -> float:
        occupied = self.max_layers[self.max_layers > 0]
        return float(occupied.mean()) if len(occupied) else 0.0


class SegmentationConfig(BaseModel):
    """How a frame is cut into cross-sections."""

    target_sections: int | None = Field(default=None, ge=1)
    auto: bool = True
    ellipse_tolerance: float = Field(default=2.0, ge=0)
    overlap_width: int = Field(default=1, ge=0)
    surface_thickness: int = Field(default=4, ge=1)
    main_view: SignedAxis = SignedAxis.POS_Z
    growth_rule: Literal["all", "any"] = "all"

    @field_validator("main_view", mode="before")
    @classmethod
    def _parse_view(cls, value: Any) -> Any:
        return SignedAxis.parse(value) if isinstance(value, str) else value

    @model_validator(mode="before")
    @classmethod
    def _manual_disables_auto(cls, data: Any) -> Any:
        if isinstance(data, dict) and data.get("target_sections") is not None and "auto" not in data:
            data = {**data, "auto": False}
        return data

    @model_validator(mode="after")
    def _one_mode(self) -> SegmentationConfig:
        if self.auto == (self.target_sections is not None):
            raise ValueError("exactly one of target_sections / auto must govern the section count")
        return self

    def to_config_text(self) -> str:
        """Serialize as key=value lines, the format load_config_file reads."""
        lines = []
        for key, value in self.model_dump().items():
            if value is None:
                continue
            if isinstance(value, SignedAxis):
                value = value.value
            elif isinstance(value, bool):
                value = str(value).lower()
            lines.append(f"{key}={value}")
        return "\n".join(lines) + "\n"
