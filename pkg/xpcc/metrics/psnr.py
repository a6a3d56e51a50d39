"""Point-to-point geometry PSNR and nearest-neighbour color PSNR."""

from __future__ import annotations

import math

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel
from scipy.spatial import cKDTree

from xpcc.cloud.model import PointCloud
from xpcc.utils.errors import DimMismatchError, EmptyCloudError

PSNR_CAP = 999.99
_CANDIDATES = 8


def _psnr(peak_squared: float, mse: float) -> float:
    if mse <= 0:
        return PSNR_CAP
    return min(PSNR_CAP, 10 * math.log10(peak_squared / mse))


def nearest_neighbours(
    reference: npt.NDArray[np.int64],
    query: npt.NDArray[np.int64],
) -> tuple[npt.NDArray[np.int64], npt.NDArray[np.int64]]:
    """Exact nearest reference point for every query point.

    Returns (index, squared distance). Equidistant neighbours resolve to the
    lowest reference index.
    """
    tree = cKDTree(reference)
    k = min(_CANDIDATES, len(reference))
    _, idx = tree.query(query, k=k)
    idx = np.asarray(idx, dtype=np.int64).reshape(len(query), k)
    sq = ((reference[idx] - query[:, None, :]) ** 2).sum(axis=-1)
    best = sq.min(axis=1)
    tied = sq == best[:, None]
    choice = np.where(tied, idx, np.iinfo(np.int64).max).min(axis=1)
    if k < len(reference):
        # the k-th candidate still tied: more equidistant points may lie beyond it
        for row in np.flatnonzero(tied[:, -1]):
            ball = np.asarray(tree.query_ball_point(query[row], r=math.sqrt(best[row]) + 1e-6), dtype=np.int64)
            d = ((reference[ball] - query[row]) ** 2).sum(axis=-1)
            choice[row] = ball[d == best[row]].min()
    return choice, best


def _check_pair(reference: PointCloud, degraded: PointCloud) -> None:
    if len(reference) == 0 or len(degraded) == 0:
        raise EmptyCloudError(
            "PSNR needs two non-empty clouds",
            details={"reference": len(reference), "degraded": len(degraded)},
        )
    if reference.bit_depth != degraded.bit_depth:
        raise DimMismatchError(
            "clouds differ in bit depth",
            details={"reference": reference.bit_depth, "degraded": degraded.bit_depth},
        )


def symmetric_mse(reference: PointCloud, degraded: PointCloud) -> float:
    """max of the two one-way mean squared nearest-neighbour distances."""
    _check_pair(reference, degraded)
    _, ab = nearest_neighbours(degraded.points, reference.points)
    _, ba = nearest_neighbours(reference.points, degraded.points)
    return max(float(ab.mean()), float(ba.mean()))


def geometry_psnr_d1(reference: PointCloud, degraded: PointCloud) -> float:
    """D1 PSNR with peak 3·p², p = 2^bit_depth − 1; zero error gives PSNR_CAP."""
    mse = symmetric_mse(reference, degraded)
    peak = (1 << reference.bit_depth) - 1
    return _psnr(3.0 * peak * peak, mse)


class ColorPsnr(BaseModel):
    """Per-channel and averaged color PSNR in dB."""

    r: float
    g: float
    b: float

    @property
    def average(self) -> float:
        return (self.r + self.g + self.b) / 3


def _color_mse(source: PointCloud, target: PointCloud) -> npt.NDArray[np.float64]:
    idx, _ = nearest_neighbours(target.points, source.points)
    diff = source.colors.astype(np.int64) - target.colors[idx].astype(np.int64)
    return (diff**2).mean(axis=0)


def color_psnr(reference: PointCloud, degraded: PointCloud) -> ColorPsnr:
    """Color PSNR over nearest-neighbour pairs, worst of both directions per channel."""
    _check_pair(reference, degraded)
    mse = np.maximum(_color_mse(reference, degraded), _color_mse(degraded, reference))
    r, g, b = (_psnr(255.0**2, float(m)) for m in mse)
    return ColorPsnr(r=r, g=g, b=b)
