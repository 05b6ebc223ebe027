"""PNG figures drawn with matplotlib (Agg backend, no display needed)."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .render import RasterSpec  # noqa: E402


def _extent(spec: RasterSpec) -> list[float]:
    w, h = spec.pixels
    s = spec.pixel_size
    return [
        spec.center.real - w * s / 2,
        spec.center.real + w * s / 2,
        spec.center.imag - h * s / 2,
        spec.center.imag + h * s / 2,
    ]


def rays_figure(raster: np.ndarray, spec: RasterSpec, traces, path, markers=()) -> Path:
    """Escape-time raster with parameter rays and their landing points."""
    x0, x1, y0, y1 = _extent(spec)
    fig, ax = plt.subplots(figsize=(6, 6 * raster.shape[0] / raster.shape[1]), dpi=150)
    ax.imshow(raster, cmap="gray", extent=[x0, x1, y0, y1], origin="upper", interpolation="nearest")
    for tr in traces:
        pts = np.array([p for p in tr.points if x0 - 10 < p.real < x1 + 10 and y0 - 10 < p.imag < y1 + 10])
        if len(pts):
            ax.plot(pts.real, pts.imag, lw=1.0, label=f"ray {tr.theta}")
        ax.plot(tr.landing_estimate.real, tr.landing_estimate.imag, "o", ms=3, color="red")
    for label, z in markers:
        ax.plot(z.real, z.imag, "x", ms=4, color="yellow")
    ax.set_xlim(x0, x1)
    ax.set_ylim(y0, y1)
    ax.set_xlabel("Re c")
    ax.set_ylabel("Im c")
    ax.set_title(f"M_{spec.d}")
    if traces:
        ax.legend(loc="lower left", fontsize=7)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path


def points_figure(points, d: int, path, title: str = "") -> Path:
    """Scatter of PCF parameters (list of PCFPoint) coloured by kind."""
    fig, ax = plt.subplots(figsize=(5, 5), dpi=150)
    kinds = sorted({p.kind for p in points})
    for kind in kinds:
        zs = np.array([p.c for p in points if p.kind == kind])
        ax.scatter(zs.real, zs.imag, s=6, label=kind)
    ax.set_aspect("equal")
    ax.set_xlabel("Re c")
    ax.set_ylabel("Im c")
    ax.set_title(title or f"PCF parameters, d = {d}")
    if kinds:
        ax.legend(fontsize=7)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path
