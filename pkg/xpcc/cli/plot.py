"""Rate-distortion plot as SVG."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from xpcc.metrics.models import RdCurve  # noqa: E402
from xpcc.utils.errors import IoFailureError  # noqa: E402


def write_rd_svg(curves: list[RdCurve], path: str | Path, title: str = "") -> Path:
    """Rate on x, PSNR on y, one marked polyline per curve."""
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    try:
        for curve in curves:
            ax.plot(
                [p.rate for p in curve.points],
                [p.psnr for p in curve.points],
                marker="o",
                linewidth=1.5,
                label=curve.label,
            )
        unit = curves[0].points[0].unit if curves and curves[0].points else "bps"
        ax.set_xlabel(f"rate ({unit})")
        ax.set_ylabel("PSNR (dB)")
        if title:
            ax.set_title(title)
        ax.grid(True, linestyle=":", linewidth=0.5)
        if curves:
            ax.legend(loc="lower right")
        fig.tight_layout()
        try:
            fig.savefig(path, format="svg")
        except OSError as exc:
            raise IoFailureError(f"cannot write {path}: {exc}", details={"path": str(path)}) from exc
    finally:
        plt.close(fig)
    return Path(path)
