"""SVG renderers: path counts, determinism, conformality, field colors."""

import numpy as np
import pytest

from confmap.errors import RenderError, WrongTarget
from confmap.maps import disk_map, evaluate_map, invert_map, rectangle_map
from confmap.render import (
    RenderSpec,
    field_color,
    lightness_factor,
    render_field_svg,
    render_grid_svg,
)
from conftest import rectangle_quad


@pytest.fixture(scope="module")
def blob_map(blob_domain):
    return disk_map(blob_domain, center=0j, tol=1e-9)


@pytest.fixture(scope="module")
def rect_map():
    return rectangle_map(rectangle_quad(2.0), tol=1e-9)


class TestGridSvg:
    def test_path_count(self, unit_disk):
        m = disk_map(unit_disk, center=0j, tol=1e-10)
        svg = render_grid_svg(m, RenderSpec(n_radial=4, n_angular=8, samples=40))
        assert svg.count("<path") == 4 + 8 + 1

    def test_deterministic(self, blob_map):
        spec = RenderSpec(n_radial=3, n_angular=4, samples=24)
        assert render_grid_svg(blob_map, spec) == render_grid_svg(blob_map, spec)

    def test_counts_below_two_rejected(self, blob_map):
        with pytest.raises(RenderError):
            render_grid_svg(blob_map, RenderSpec(n_radial=1, n_angular=8))

    def test_grid_curves_meet_at_right_angles(self, blob_map):
        # conformality: images of orthogonal canonical curves stay orthogonal
        for w in (0.3 + 0.2j, -0.4 + 0.35j, 0.1 - 0.5j):
            z = invert_map(blob_map, [w])[0]
            _, df = evaluate_map(blob_map, [z])
            assert abs(df[0]) > 1e-3
            # tangent of the circle |w| = const is i*w; of the ray, w itself;
            # their preimages' tangents are those divided by f', so the
            # angle between them is exactly preserved wherever f' != 0
            t_circle = 1j * w / df[0]
            t_ray = w / df[0]
            ang = np.angle(t_circle / t_ray)
            assert abs(abs(ang) - np.pi / 2) < np.pi / 180


class TestFieldSvg:
    def test_wrong_target(self, blob_map):
        with pytest.raises(WrongTarget):
            render_field_svg(blob_map)

    def test_deterministic_and_filled(self, rect_map):
        a = render_field_svg(rect_map, resolution=20)
        assert a == render_field_svg(rect_map, resolution=20)
        assert a.count("<rect") > 100


class TestColors:
    def test_midline_full_factor(self):
        mu = 2.0
        assert lightness_factor(0.5 / mu, mu) == pytest.approx(1.0)

    def test_walls_dark(self):
        mu = 2.0
        assert lightness_factor(0.0, mu) == pytest.approx(0.0)
        assert lightness_factor(1.0 / mu, mu) == pytest.approx(0.0)

    def test_factor_in_unit_interval(self):
        mu = 3.0
        ys = np.linspace(0, 1 / mu, 33)
        vals = [lightness_factor(y, mu) for y in ys]
        assert min(vals) >= 0.0 and max(vals) <= 1.0

    def test_hue_endpoints(self):
        mu = 1.0
        assert field_color(0.0 + 0.5j, mu) == pytest.approx((1.0, 0.0, 0.0))
        assert field_color(1.0 + 0.5j, mu) == pytest.approx((0.0, 0.0, 1.0))
