"""Escape-time rasters of M_d with ray and point overlays (PPM and SVG)."""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

log = logging.getLogger(__name__)

ROW_CHUNK = 32


@dataclass(frozen=True)
class RasterSpec:
    center: complex = -0.75 + 0j
    width: float = 3.0
    pixels: tuple[int, int] = (300, 200)
    max_iter: int = 200
    d: int = 2

    def __post_init__(self):
        w, h = self.pixels
        if w <= 0 or h <= 0:
            raise ValueError("pixel dimensions must be positive")
        if not self.width > 0:
            raise ValueError("width must be positive")
        if self.d < 2:
            raise ValueError("degree must be >= 2")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")

    @property
    def pixel_size(self) -> float:
        return self.width / self.pixels[0]

    def pixel_to_point(self, col: float, row: float) -> complex:
        w, h = self.pixels
        s = self.pixel_size
        return complex(self.center.real + (col + 0.5 - w / 2) * s, self.center.imag - (row + 0.5 - h / 2) * s)

    def point_to_pixel(self, z: complex) -> tuple[float, float]:
        """Continuous (x, y) image coordinates, pixel centres at half-integers."""
        w, h = self.pixels
        s = self.pixel_size
        return (z.real - self.center.real) / s + w / 2, -(z.imag - self.center.imag) / s + h / 2

    def grid(self, rows: slice | None = None) -> np.ndarray:
        w, h = self.pixels
        s = self.pixel_size
        cols = np.arange(w, dtype=float)
        rr = np.arange(h, dtype=float)[rows if rows is not None else slice(None)]
        # offsets are symmetric about the centre, so a real-centred view is
        # exactly conjugation-symmetric row by row
        x = self.center.real + (cols + 0.5 - w / 2) * s
        y = self.center.imag - (rr + 0.5 - h / 2) * s
        return x[None, :] + 1j * y[:, None]

    def to_dict(self) -> dict:
        return {
            "center": [self.center.real, self.center.imag],
            "width": self.width,
            "pixels": list(self.pixels),
            "max_iter": self.max_iter,
            "d": self.d,
        }


def _ipow(z: np.ndarray, d: int) -> np.ndarray:
    # repeated multiplication keeps conj(z)^d == conj(z^d) bit for bit
    out = z
    for _ in range(d - 1):
        out = out * z
    return out


def smooth_escape(d: int, c: np.ndarray, max_iter: int, radius: float) -> np.ndarray:
    """Smoothed escape count n + 1 - log_d(log|z_n| / log R); NaN if bounded."""
    z = np.zeros_like(c)
    nu = np.full(c.shape, np.nan)
    alive = np.ones(c.shape, dtype=bool)
    log_r = math.log(radius)
    for n in range(max_iter):
        z[alive] = _ipow(z[alive], d) + c[alive]
        mag = np.abs(z)
        done = alive & (mag > radius)
        if done.any():
            nu[done] = n + 1 - np.log(np.log(mag[done]) / log_r) / math.log(d)
            alive &= ~done
            if not alive.any():
                break
    return nu


def _shade(nu: np.ndarray, max_iter: int) -> np.ndarray:
    """Interior black; exterior grey levels 1..255 brightening toward M_d."""
    out = np.zeros(nu.shape, dtype=np.uint8)
    ext = ~np.isnan(nu)
    level = np.log1p(np.clip(nu[ext], 0, None)) / math.log1p(max_iter + 1)
    out[ext] = (1 + np.floor(254 * np.clip(level, 0, 1))).astype(np.uint8)
    return out


def render_multibrot(spec: RasterSpec, threads: int = 1) -> np.ndarray:
    """Grey-scale raster of shape (h, w); pixel rows are rendered in chunks."""
    w, h = spec.pixels
    corner = max(abs(spec.pixel_to_point(x, y)) for x in (0, w) for y in (0, h))
    radius = max(256.0, 2.0 * corner)

    def work(start: int) -> np.ndarray:
        c = spec.grid(slice(start, min(start + ROW_CHUNK, h)))
        return _shade(smooth_escape(spec.d, c, spec.max_iter, radius), spec.max_iter)

    starts = list(range(0, h, ROW_CHUNK))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, starts))
    else:
        parts = [work(s) for s in starts]
    return np.vstack(parts)


# ---------------------------------------------------------------------------
# Overlays
# ---------------------------------------------------------------------------


@dataclass
class Overlay:
    """Polylines and marked points in parameter-plane coordinates."""

    polylines: list  # list of (label, [complex, ...])
    markers: list  # list of (label, complex)
    warnings: list


def _draw_segment(img: np.ndarray, p0, p1, value: int) -> bool:
    """Rasterize a segment by dense sampling; returns False if fully clipped."""
    h, w = img.shape
    (x0, y0), (x1, y1) = p0, p1
    n = int(max(abs(x1 - x0), abs(y1 - y0))) + 1
    drew = False
    for k in range(n + 1):
        s = k / n
        x = int(math.floor(x0 + s * (x1 - x0)))
        y = int(math.floor(y0 + s * (y1 - y0)))
        if 0 <= x < w and 0 <= y < h:
            img[y, x] = value
            drew = True
    return drew


def overlay_rays(raster: np.ndarray, traces, spec: RasterSpec, points=()) -> tuple[np.ndarray, Overlay]:
    """Draw ray polylines, landing points and extra markers onto a copy of raster.

    Off-screen parts are clipped; traces that miss the viewport entirely are
    reported in ``Overlay.warnings``.
    """
    img = raster.copy()
    overlay = Overlay([], [], [])
    for tr in traces:
        if tr.d != spec.d:
            raise ValueError(f"trace degree {tr.d} does not match raster degree {spec.d}")
        pts = tr.points + [tr.landing_estimate]
        pix = [spec.point_to_pixel(z) for z in pts]
        visible = False
        for a, b in zip(pix, pix[1:]):
            # skip the far-field part, which is off-screen for any sane viewport
            if max(abs(a[0]), abs(a[1]), abs(b[0]), abs(b[1])) > 1e6:
                continue
            visible |= _draw_segment(img, a, b, 255)
        label = str(tr.theta)
        if not visible:
            msg = f"ray {label} lies outside the viewport"
            log.warning(msg)
            overlay.warnings.append(msg)
        overlay.polylines.append((label, pts))
        overlay.markers.append((f"landing {label}", tr.landing_estimate))
    for label, z in points:
        overlay.markers.append((label, z))
    h, w = img.shape
    for _, z in overlay.markers:
        x, y = spec.point_to_pixel(z)
        xi, yi = int(math.floor(x)), int(math.floor(y))
        img[max(0, yi - 1) : min(h, yi + 2), max(0, xi - 1) : min(w, xi + 2)] = 255
    return img, overlay


def write_ppm(path, raster: np.ndarray) -> None:
    """8-bit binary grey map with header "P5\\n{w} {h}\\n255\\n"."""
    h, w = raster.shape
    data = np.ascontiguousarray(raster, dtype=np.uint8).tobytes()
    Path(path).write_bytes(f"P5\n{w} {h}\n255\n".encode("ascii") + data)


def read_ppm(path) -> np.ndarray:
    blob = Path(path).read_bytes()
    parts = blob.split(b"\n", 3)
    if parts[0] != b"P5" or parts[2] != b"255":
        raise ValueError("not an 8-bit P5 file")
    w, h = map(int, parts[1].split())
    return np.frombuffer(parts[3], dtype=np.uint8).reshape(h, w)


def overlay_svg(spec: RasterSpec, overlay: Overlay, background: str | None = None) -> str:
    """Vector version of an overlay in pixel coordinates of ``spec``."""
    w, h = spec.pixels
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f'<rect width="{w}" height="{h}" fill="black"/>',
    ]
    if background:
        lines.append(f'<image href="{background}" width="{w}" height="{h}"/>')
    lines.append(f'<clipPath id="view"><rect width="{w}" height="{h}"/></clipPath>')
    lines.append('<g clip-path="url(#view)" fill="none" stroke="white" stroke-width="1">')
    for label, pts in overlay.polylines:
        coords = []
        for z in pts:
            x, y = spec.point_to_pixel(z)
            if abs(x) > 1e6 or abs(y) > 1e6:
                continue
            coords.append(f"{x:.3f},{y:.3f}")
        lines.append(f'<polyline data-label="{label}" points="{" ".join(coords)}"/>')
    lines.append("</g>")
    for label, z in overlay.markers:
        x, y = spec.point_to_pixel(z)
        lines.append(f'<circle data-label="{label}" cx="{x:.3f}" cy="{y:.3f}" r="2" fill="red"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
