import math

import numpy as np
import pytest

from multibrot.angles import angle
from multibrot.boettcher import green_parameter
from multibrot.rays import trace_parameter_ray
from multibrot.render import (
    RasterSpec,
    overlay_rays,
    overlay_svg,
    read_ppm,
    render_multibrot,
    smooth_escape,
    write_ppm,
)

SPEC = RasterSpec(center=-0.75 + 0j, width=3.0, pixels=(120, 80), max_iter=200, d=2)


@pytest.fixture(scope="module")
def raster():
    return render_multibrot(SPEC)


def pixel_of(spec, z):
    x, y = spec.point_to_pixel(z)
    return int(math.floor(y)), int(math.floor(x))


def test_interior_and_exterior(raster):
    assert raster[pixel_of(SPEC, -0.1 + 0j)] == 0
    assert raster[pixel_of(SPEC, 0.6 + 0j)] > 0
    wide = RasterSpec(center=0j, width=6.0, pixels=(60, 60), max_iter=100)
    img = render_multibrot(wide)
    assert img[pixel_of(wide, 1 + 0j)] > 0
    assert img[pixel_of(wide, -1 + 0j)] == 0


def test_pixel_round_trip():
    for col, row in [(0, 0), (17, 40), (119, 79)]:
        x, y = SPEC.point_to_pixel(SPEC.pixel_to_point(col, row))
        assert (x, y) == pytest.approx((col + 0.5, row + 0.5))


def test_ppm_header_and_round_trip(tmp_path, raster):
    path = tmp_path / "m.ppm"
    write_ppm(path, raster)
    blob = path.read_bytes()
    assert blob.startswith(b"P5\n120 80\n255\n")
    assert len(blob) == len(b"P5\n120 80\n255\n") + 120 * 80
    assert (read_ppm(path) == raster).all()


def test_mirror_symmetry_is_exact(raster):
    assert (raster == raster[::-1]).all()


def test_cubic_rotation_symmetry():
    spec = RasterSpec(center=0j, width=3.0, pixels=(90, 90), max_iter=100, d=3)
    img = render_multibrot(spec)
    # M_3 is symmetric under c -> -c, a half turn of the image; negation is
    # exact in floating point so the raster is too
    assert (img == img[::-1, ::-1]).all()


def test_thread_count_does_not_change_output(raster):
    for threads in (2, 4):
        assert (render_multibrot(SPEC, threads=threads) == raster).all()


def test_spec_validation():
    with pytest.raises(ValueError):
        RasterSpec(pixels=(0, 10))
    with pytest.raises(ValueError):
        RasterSpec(width=0)
    with pytest.raises(ValueError):
        RasterSpec(d=1)


def test_smooth_escape_tracks_green():
    radius = 256.0
    pts = np.array([0.6 + 0.1j, -2.1 + 0j, 0.3 + 0.6j, -0.8 + 0.4j, 1.5j])
    nu = smooth_escape(2, pts, 500, radius)
    for c, v in zip(pts, nu):
        estimate = math.log(radius) * 2 ** (1 - v)
        assert estimate == pytest.approx(green_parameter(2, c), rel=1e-3)


def test_empty_overlay_is_identity(raster):
    img, overlay = overlay_rays(raster, [], SPEC)
    assert (img == raster).all() and img is not raster
    assert overlay.polylines == [] and overlay.warnings == []


def test_ray_overlay(raster):
    traces = [trace_parameter_ray(2, angle(1, 3)), trace_parameter_ray(2, angle(2, 3))]
    img, overlay = overlay_rays(raster, traces, SPEC, points=[("root", -0.75 + 0j)])
    assert (img != raster).any()
    assert img[pixel_of(SPEC, -0.75 + 0j)] == 255
    assert overlay.warnings == []
    svg = overlay_svg(SPEC, overlay, "m.ppm")
    assert svg.count("<polyline") == 2 and 'data-label="root"' in svg


def test_offscreen_ray_warns(raster):
    far = RasterSpec(center=-1.75 + 0j, width=0.05, pixels=(40, 40), max_iter=50)
    tr = trace_parameter_ray(2, angle(1, 3))
    _, overlay = overlay_rays(render_multibrot(far), [tr], far)
    assert overlay.warnings and "outside" in overlay.warnings[0]


def test_degree_mismatch(raster):
    tr = trace_parameter_ray(3, angle(1, 8))
    with pytest.raises(ValueError):
        overlay_rays(raster, [tr], SPEC)
