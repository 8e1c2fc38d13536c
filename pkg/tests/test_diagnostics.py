"""Elongation, crowding forecasts, hitting probabilities, resistance."""

import math

import numpy as np
import pytest

from confmap.diagnostics import (
    crowding_forecast,
    elongation_estimate,
    end_hitting_probability,
    resistance_of_quadrilateral,
)
from confmap.errors import NegativeL, NonpositiveInput, NonpositiveMu
from confmap.geometry import ArcSegment, build_domain, disk_domain, polygon


class TestElongationEstimate:
    def test_five_by_one_rectangle(self):
        e = elongation_estimate(polygon([0, 5, 5 + 1j, 1j]))
        assert 4.5 <= e.L <= 5.5
        assert e.method == "width-of-best-strip"

    def test_unit_disk(self):
        e = elongation_estimate(disk_domain())
        assert 0.9 <= e.L <= 1.1

    def test_ellipse_close_to_brute_force(self):
        # ellipse with semi-axes 10 and 1: 5.5 e^{it} + 4.5 e^{-it};
        # exact width 20, exact inradius 1, so the true aspect is 10
        dom = build_domain([ArcSegment.trig([0j, 5.5 + 0j, 4.5 + 0j])])
        e = elongation_estimate(dom)
        assert abs(e.L - 10.0) / 10.0 < 0.2


class TestCrowdingForecast:
    def test_zero_elongation(self):
        f = crowding_forecast(0.0)
        assert f.scale == 1.0 and f.representable_in_double

    def test_scale_arithmetic(self):
        assert crowding_forecast(3.0).scale == pytest.approx(1.2392e4, rel=1e-4)

    def test_double_precision_exhausted(self):
        f = crowding_forecast(12.0)
        assert f.scale == pytest.approx(2.4e16, rel=0.03)
        assert not f.representable_in_double

    def test_negative_rejected(self):
        with pytest.raises(NegativeL):
            crowding_forecast(-0.1)


class TestEndHittingProbability:
    def test_deep_channel_asymptotic(self):
        p = end_hitting_probability(18.20539)
        assert p.asymptotic == pytest.approx(9.692555e-13, rel=5e-7)
        assert p.series_value == pytest.approx(p.asymptotic, rel=1e-3)

    def test_square_symmetry(self):
        assert end_hitting_probability(1.0).series_value == pytest.approx(
            0.5, abs=1e-12)

    def test_asymptotic_sharp_by_mu_four(self):
        p = end_hitting_probability(4.0)
        assert abs(p.series_value - p.asymptotic) / p.series_value < 1e-4

    def test_series_monotone_decreasing(self):
        vals = [end_hitting_probability(mu).series_value
                for mu in (0.5, 1.0, 2.0, 4.0, 8.0)]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_relative_gap_shrinks(self):
        gaps = []
        for mu in (1.0, 2.0, 4.0, 8.0):
            p = end_hitting_probability(mu)
            gaps.append(abs(p.series_value - p.asymptotic) / p.series_value)
        assert all(a > b for a, b in zip(gaps, gaps[1:]))

    def test_values_are_probabilities(self):
        for mu in (0.3, 1.0, 5.0):
            p = end_hitting_probability(mu)
            assert 0.0 <= p.series_value <= 1.0
            assert 0.0 <= min(p.asymptotic, 1.0) <= 1.0

    def test_nonpositive_mu(self):
        with pytest.raises(NonpositiveMu):
            end_hitting_probability(0.0)


class TestResistance:
    def test_values(self):
        assert resistance_of_quadrilateral(1.0, 1.0) == 1.0
        assert resistance_of_quadrilateral(3.0, 2.0) == 6.0
        assert resistance_of_quadrilateral(18.20539) == pytest.approx(18.20539)

    def test_nonpositive_inputs(self):
        with pytest.raises(NonpositiveInput):
            resistance_of_quadrilateral(-1.0, 1.0)
        with pytest.raises(NonpositiveInput):
            resistance_of_quadrilateral(1.0, 0.0)
