"""Objective quality metrics: D1 and color PSNR, temporal MAD, Bjontegaard deltas."""

from xpcc.metrics.bjontegaard import bd_psnr, bd_rate
from xpcc.metrics.models import CSV_COLUMNS, MetricsRow, RdCurve, RdPoint, read_metrics_csv, write_metrics_csv
from xpcc.metrics.psnr import PSNR_CAP, ColorPsnr, color_psnr, geometry_psnr_d1, nearest_neighbours, symmetric_mse
from xpcc.metrics.temporal import frame_pair_mad, sequence_temporal_mad, temporal_mad

__all__ = [
    "CSV_COLUMNS",
    "PSNR_CAP",
    "ColorPsnr",
    "MetricsRow",
    "RdCurve",
    "RdPoint",
    "bd_psnr",
    "bd_rate",
    "color_psnr",
    "frame_pair_mad",
    "geometry_psnr_d1",
    "nearest_neighbours",
    "read_metrics_csv",
    "sequence_temporal_mad",
    "symmetric_mse",
    "temporal_mad",
    "write_metrics_csv",
]
