"""RD curve and metrics report models."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, Field, model_validator

from xpcc.utils.errors import IoFailureError


class RdPoint(BaseModel):
    rate: float = Field(gt=0)
    psnr: float
    unit: Literal["bps", "bpp"] = "bps"


class RdCurve(BaseModel):
    """Rate-distortion points sorted by strictly increasing rate."""

    label: str = ""
    points: list[RdPoint] = Field(default_factory=list)

    @model_validator(mode="after")
    def _sorted(self) -> RdCurve:
        self.points = sorted(self.points, key=lambda p: p.rate)
        rates = [p.rate for p in self.points]
        if any(b <= a for a, b in zip(rates, rates[1:])):
            raise ValueError("RD curve rates must be distinct")
        if len({p.unit for p in self.points}) > 1:
            raise ValueError("RD curve mixes rate units")
        return self

    @classmethod
    def from_pairs(cls, label: str, pairs: list[tuple[float, float]], unit: Literal["bps", "bpp"] = "bps") -> RdCurve:
        return cls(label=label, points=[RdPoint(rate=r, psnr=p, unit=unit) for r, p in pairs])


class MetricsRow(BaseModel):
    """One CSV row per decoded frame."""

    sequence: str
    frame: int
    qstep: int
    geom_bits: int
    attr_bits: int
    d1_psnr: float
    color_psnr: float
    temporal_mad: float
    occupancy_ratio: float


CSV_COLUMNS = list(MetricsRow.model_fields)


def write_metrics_csv(rows: list[MetricsRow], path: str | Path) -> None:
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
            writer.writeheader()
            for row in rows:
                writer.writerow(row.model_dump())
    except OSError as exc:
        raise IoFailureError(f"cannot write {path}: {exc}", details={"path": str(path)}) from exc


def read_metrics_csv(path: str | Path) -> list[MetricsRow]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            return [MetricsRow.model_validate(record) for record in csv.DictReader(fh)]
    except OSError as exc:
        raise IoFailureError(f"cannot read {path}: {exc}", details={"path": str(path)}) from exc
