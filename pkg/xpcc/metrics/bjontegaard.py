"""Bjontegaard delta rate and delta PSNR between two RD curves."""

from __future__ import annotations

from typing import Literal

import numpy as np
import numpy.typing as npt
from scipy.integrate import trapezoid

from xpcc.metrics.models import RdCurve
from xpcc.utils.errors import InsufficientPointsError, NoOverlapError

Method = Literal["cubic", "piecewise"]

MIN_POINTS = 4
SAMPLES = 10_000


def _arrays(curve: RdCurve) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    if len(curve.points) < MIN_POINTS:
        raise InsufficientPointsError(
            f"BD metrics need at least {MIN_POINTS} points",
            details={"label": curve.label, "points": len(curve.points)},
        )
    log_rate = np.log10([p.rate for p in curve.points])
    psnr = np.array([p.psnr for p in curve.points], dtype=np.float64)
    return log_rate, psnr


def _interval(x1: npt.NDArray[np.float64], x2: npt.NDArray[np.float64], what: str) -> tuple[float, float]:
    lo = max(float(x1.min()), float(x2.min()))
    hi = min(float(x1.max()), float(x2.max()))
    if hi <= lo:
        raise NoOverlapError(f"curves share no {what} interval", details={"lo": lo, "hi": hi})
    return lo, hi


def _mean_value(x: npt.NDArray[np.float64], y: npt.NDArray[np.float64], lo: float, hi: float, method: Method) -> float:
    """Average of y(x) over [lo, hi], y fitted as a cubic or linearly interpolated."""
    if method == "cubic":
        integral = np.polyint(np.polyfit(x, y, 3))
        return float((np.polyval(integral, hi) - np.polyval(integral, lo)) / (hi - lo))
    if method == "piecewise":
        order = np.argsort(x, kind="stable")
        grid = np.linspace(lo, hi, SAMPLES)
        return float(trapezoid(np.interp(grid, x[order], y[order]), grid) / (hi - lo))
    raise ValueError(f"unknown BD method: {method!r}")


def bd_rate(anchor: RdCurve, test: RdCurve, method: Method = "cubic") -> float:
    """Average bitrate difference of test over anchor at equal PSNR, in percent.

    Negative values mean the test curve needs fewer bits.
    """
    rate_a, psnr_a = _arrays(anchor)
    rate_t, psnr_t = _arrays(test)
    lo, hi = _interval(psnr_a, psnr_t, "PSNR")
    delta = _mean_value(psnr_t, rate_t, lo, hi, method) - _mean_value(psnr_a, rate_a, lo, hi, method)
    return float((10**delta - 1) * 100)


def bd_psnr(anchor: RdCurve, test: RdCurve, method: Method = "cubic") -> float:
    """Average PSNR difference of test over anchor at equal rate, in dB."""
    rate_a, psnr_a = _arrays(anchor)
    rate_t, psnr_t = _arrays(test)
    lo, hi = _interval(rate_a, rate_t, "rate")
    return _mean_value(rate_t, psnr_t, lo, hi, method) - _mean_value(rate_a, psnr_a, lo, hi, method)
