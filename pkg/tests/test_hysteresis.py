"""Loop segmentation and form-factor geometry on synthetic polylines."""

import numpy as np
import pytest

import qmemnet as qm
from qmemnet.hysteresis import ZeroPerimeterError, build_loop, has_self_intersection


def circle_polyline(n=1000, center=(0.0, 0.0), radius=1.0):
    t = np.linspace(0.0, 2 * np.pi, n + 1)
    return np.column_stack([center[0] + radius * np.cos(t), center[1] + radius * np.sin(t)])


def figure_eight(n=1000):
    """Two unit circles tangent at the origin, traversed as one closed curve."""
    t = np.linspace(0.0, 2 * np.pi, n + 1)
    right = np.column_stack([1 + np.cos(t + np.pi), np.sin(t + np.pi)])
    left = np.column_stack([-1 + np.cos(t), np.sin(t)])
    return np.vstack([right, left[1:]])


class TestGeometry:
    def test_circle_area_perimeter(self):
        pts = circle_polyline(1000)
        assert qm.loop_area(pts) == pytest.approx(np.pi, rel=1e-4)
        assert qm.loop_perimeter(pts) == pytest.approx(2 * np.pi, rel=1e-4)

    def test_figure_eight_absolute_lobes(self):
        pts = figure_eight(1000)
        assert qm.loop_area(pts) == pytest.approx(2 * np.pi, rel=1e-3)
        assert qm.loop_perimeter(pts) == pytest.approx(4 * np.pi, rel=1e-4)

    def test_out_and_back_segment(self):
        ell = 0.7
        pts = np.array([[0.0, 0.0], [ell / 2, 0.0], [ell, 0.0], [ell / 2, 0.0], [0.0, 0.0]])
        assert qm.loop_area(pts) == 0.0
        assert qm.loop_perimeter(pts) == pytest.approx(2 * ell, rel=1e-12)

    def test_form_factor_circle_line_joined(self):
        assert qm.form_factor(circle_polyline(1000)) == pytest.approx(1.0, abs=1e-4)
        line = np.array([[0.0, 0.0], [0.5, 0.25], [1.0, 0.5], [0.5, 0.25], [0.0, 0.0]])
        assert qm.form_factor(line) == pytest.approx(0.0, abs=1e-12)
        assert qm.form_factor(figure_eight(2000)) == pytest.approx(0.5, abs=1e-4)

    def test_zero_perimeter_rejected(self):
        with pytest.raises(ZeroPerimeterError):
            qm.form_factor(np.zeros((4, 2)))

    def test_refinement_stability(self):
        coarse = circle_polyline(400, center=(0.3, 1.0), radius=0.8)
        fine = circle_polyline(800, center=(0.3, 1.0), radius=0.8)
        assert qm.loop_area(fine) == pytest.approx(qm.loop_area(coarse), rel=1e-3)
        assert qm.loop_perimeter(fine) == pytest.approx(qm.loop_perimeter(coarse), rel=1e-3)

    def test_self_intersection_flag(self):
        bow = np.array([[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
        assert has_self_intersection(bow)
        assert not has_self_intersection(circle_polyline(64))
        loop = build_loop(bow, 0.0, 1.0, check_intersections=True)
        assert loop.self_intersecting


class TestSegmentLoops:
    def test_circle_through_origin_single_loop(self):
        # circle centered (0, 1): starts and ends at the origin, crosses the
        # V axis at I = 2 mid-way (not an origin crossing)
        t = np.linspace(0.0, 2 * np.pi, 2001)
        v = np.sin(t)
        i = 1.0 - np.cos(t)
        series = qm.segment_loops(v, i, t)
        assert len(series) == 1
        lp = series.loops[0]
        assert lp.t_start == pytest.approx(0.0, abs=1e-12)
        assert lp.t_end == pytest.approx(2 * np.pi, rel=1e-9)

    def test_pinched_sine_two_loops(self):
        # V = sin t, I = sin t (1 + cos t)/2: origin crossings at t = 0, pi, 2 pi
        t = np.linspace(0.0, 2 * np.pi, 2001)
        v = np.sin(t)
        i = np.sin(t) * (1 + np.cos(t)) / 2.0
        series = qm.segment_loops(v, i, t)
        assert len(series) == 2
        assert series.loops[0].t_end == pytest.approx(np.pi, abs=1e-3)
        assert series.loops[1].t_start == pytest.approx(np.pi, abs=1e-3)
        # consecutive loops contiguous
        assert series.loops[0].t_end == pytest.approx(series.loops[1].t_start, abs=1e-12)

    def test_constant_zero_series_empty(self):
        t = np.linspace(0.0, 1.0, 100)
        assert len(qm.segment_loops(np.zeros(100), np.zeros(100), t)) == 0

    def test_fewer_than_two_crossings_empty(self):
        t = np.linspace(0.0, 1.0, 100)
        v = 1.0 + 0.1 * np.sin(2 * np.pi * t)  # never crosses zero
        i = 0.5 * v
        assert len(qm.segment_loops(v, i, t)) == 0

    def test_loop_endpoints_at_origin(self):
        t = np.linspace(0.0, 4 * np.pi, 4001)
        v = np.sin(t) * np.exp(-0.05 * t)
        i = v * (1 + np.cos(2 * t - np.pi / 2)) / 2.0
        series = qm.segment_loops(v, i, t)
        assert len(series) >= 3
        for lp in series.loops:
            assert lp.points[0, 0] == 0.0 and lp.points[0, 1] == 0.0
            assert lp.points[-1, 0] == 0.0 and lp.points[-1, 1] == 0.0
            vmax = np.abs(lp.points[:, 0]).max()
            imax = np.abs(lp.points[:, 1]).max()
            assert abs(lp.points[0, 0]) <= 1e-9 * vmax
            assert abs(lp.points[0, 1]) <= 1e-9 * imax

    def test_form_factor_invariants_on_loops(self):
        t = np.linspace(0.0, 6 * np.pi, 6001)
        v = np.sin(t) * np.exp(-0.03 * t)
        i = v * (1 + np.cos(2 * t - np.pi / 2)) / 2.0
        for lp in qm.segment_loops(v, i, t).loops:
            assert 0.0 <= lp.form_factor <= 1.0 + 1e-9
            assert lp.area >= 0.0
            assert lp.perimeter > 0.0
            assert lp.form_factor == pytest.approx(
                4 * np.pi * lp.area / lp.perimeter**2, rel=1e-12)

    def test_scale_invariance(self):
        t = np.linspace(0.0, 6 * np.pi, 6001)
        v = np.sin(t) * np.exp(-0.03 * t)
        i = v * (1 + np.cos(2 * t - np.pi / 2)) / 2.0
        base = qm.segment_loops(v, i, t).form_factors()
        scaled = qm.segment_loops(3.7e4 * v, 2.2e-6 * i, t).form_factors()
        assert np.allclose(base, scaled, atol=1e-9)

    def test_isoperimetric_bound_random_walk_loops(self, rng):
        for _ in range(10):
            t = np.linspace(0.0, 2 * np.pi, 501)
            r = 1.0 + 0.3 * np.sin(rng.integers(2, 6) * t + rng.uniform(0, np.pi))
            pts = np.column_stack([r * np.cos(t), r * np.sin(t)])
            assert qm.form_factor(pts) <= 1.0 + 1e-9

    def test_series_misaligned_rejected(self):
        with pytest.raises(ValueError, match="aligned"):
            qm.segment_loops(np.zeros(5), np.zeros(5), np.zeros(4))
