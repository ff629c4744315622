import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.engine.geometry import (arc_center, arc_radius, arc_span, boundary_x, boundary_x_prime, boundary_x_second,
                                 build_boundary, center_offset, chord_length, half_angle, half_chord, kite_angles,
                                 midpoint_T, midpoint_offset, radius_asymptotic_gap, sample_boundary, tangency_S,
                                 tangency_offset, vertex_A, vertex_offset)
from src.engine.sequences import alpha, alpha_diff, make_sequence
from src.models.enums import BoundaryVariant, PieceKind
from src.models.errors import GeometryError
from src.models.geometry import Point2


def _angle_between(u: Point2, v: Point2) -> float:
    return math.atan2(u.cross(v), u.dot(v))


class TestPoints:
    """Vertices, midpoints, tangency points and arc centers"""

    def test_first_vertex_on_imaginary_axis(self, seq_b):
        a1 = vertex_A(seq_b, 1)
        assert a1.x == pytest.approx(0.0, abs=1e-15)
        assert a1.y == pytest.approx(1.0)

    @pytest.mark.parametrize("n", range(2, 11))
    def test_tangency_points_equidistant_from_vertex(self, seq_b, n):
        a = vertex_offset(seq_b, n)
        t = midpoint_offset(seq_b, n)
        s = tangency_offset(seq_b, n)
        assert (a - s).norm() == pytest.approx(half_chord(seq_b, n), rel=1e-12)
        assert (a - t).norm() == pytest.approx(half_chord(seq_b, n), rel=1e-12)

    @pytest.mark.parametrize("n", range(2, 11))
    def test_tangency_point_on_previous_edge(self, seq_b, n):
        edge = vertex_offset(seq_b, n - 1) - vertex_offset(seq_b, n)
        s = tangency_offset(seq_b, n) - vertex_offset(seq_b, n)
        assert abs(edge.cross(s)) <= 1e-12 * edge.norm() * s.norm()
        assert edge.dot(s) > 0.0

    @pytest.mark.parametrize("seq_name,n_values", [
        ("seq_b", range(2, 16)),
        ("seq_c", range(2, 9)),
        ("seq_a", [2, 5, 50, 500]),
    ])
    def test_kite(self, request, seq_name, n_values):
        seq = request.getfixturevalue(seq_name)
        for n in n_values:
            center = center_offset(seq, n)
            s, t = tangency_offset(seq, n), midpoint_offset(seq, n)
            r = arc_radius(seq, n)
            assert (s - center).norm() == pytest.approx(r, rel=1e-10)
            assert (t - center).norm() == pytest.approx(r, rel=1e-10)

    @pytest.mark.parametrize("n", range(2, 12))
    def test_arcs_tangent_to_both_edges(self, seq_b, n):
        center = center_offset(seq_b, n)
        incoming = vertex_offset(seq_b, n) - vertex_offset(seq_b, n - 1)
        outgoing = vertex_offset(seq_b, n + 1) - vertex_offset(seq_b, n)
        radial_s = tangency_offset(seq_b, n) - center
        radial_t = midpoint_offset(seq_b, n) - center
        assert abs(radial_s.dot(incoming)) <= 1e-10 * radial_s.norm() * incoming.norm()
        assert abs(radial_t.dot(outgoing)) <= 1e-10 * radial_t.norm() * outgoing.norm()

    @pytest.mark.parametrize("n", range(2, 12))
    def test_arc_span_is_angle_between_radii(self, seq_b, n):
        center = center_offset(seq_b, n)
        radial_s = tangency_offset(seq_b, n) - center
        radial_t = midpoint_offset(seq_b, n) - center
        assert _angle_between(radial_t, radial_s) == pytest.approx(arc_span(seq_b, n), rel=1e-10)
        assert arc_span(seq_b, n) == pytest.approx(0.5 * (alpha(seq_b, n - 1) - alpha(seq_b, n + 1)), rel=1e-12)

    def test_kite_angles(self, seq_b):
        phi, psi = kite_angles(seq_b, 3)
        assert psi == pytest.approx(phi / 2)
        assert math.pi - psi == pytest.approx(arc_span(seq_b, 3), rel=1e-12)

    @pytest.mark.parametrize("n", range(3, 13))
    def test_chord_length_matches_points(self, seq_b, n):
        chord = midpoint_offset(seq_b, n - 1) - tangency_offset(seq_b, n)
        assert chord.norm() == pytest.approx(chord_length(seq_b, n), rel=1e-10)

    @pytest.mark.parametrize("n", range(2, 12))
    def test_arc_chord(self, seq_b, n):
        r = arc_radius(seq_b, n)
        chord = (tangency_offset(seq_b, n) - midpoint_offset(seq_b, n)).norm()
        assert chord == pytest.approx(2.0 * r * math.sin(0.5 * arc_span(seq_b, n)), rel=1e-10)

    def test_absolute_points_agree_with_offsets(self, seq_b):
        for n in range(2, 6):
            assert (midpoint_T(seq_b, n) - Point2(1.0, 0.0) - midpoint_offset(seq_b, n)).norm() <= 1e-14
            assert (tangency_S(seq_b, n) - Point2(1.0, 0.0) - tangency_offset(seq_b, n)).norm() <= 1e-14
            assert (arc_center(seq_b, n) - Point2(1.0, 0.0) - center_offset(seq_b, n)).norm() <= 1e-14

    def test_midpoint_polar_angle(self, seq_b):
        t = midpoint_T(seq_b, 3)
        assert t.angle() == pytest.approx(half_angle(seq_b, 3), rel=1e-14)
        assert t.norm() == pytest.approx(math.cos(0.5 * alpha_diff(seq_b, 3, 4)), rel=1e-14)

    def test_tangency_needs_previous_vertex(self, seq_b):
        with pytest.raises(GeometryError):
            tangency_S(seq_b, 1)
        with pytest.raises(GeometryError):
            arc_radius(seq_b, 1)


class TestRadii:
    """Limits of r_n for the three families"""

    def test_case_b_limit(self, seq_b):
        assert arc_radius(seq_b, 30) == pytest.approx(2.0 / 3.0, abs=1e-8)

    def test_case_a_limit(self, seq_a):
        assert abs(arc_radius(seq_a, 1000) - 1.0) < 2e-3

    def test_case_c_limit(self, seq_c):
        assert arc_radius(seq_c, 10) < 1e-3
        assert arc_radius(seq_c, 10) < arc_radius(seq_c, 9)

    def test_asymptotic_gap_case_a(self, seq_a):
        assert radius_asymptotic_gap(seq_a, 1000) < 1e-6

    def test_asymptotic_gap_case_b(self, seq_b):
        assert radius_asymptotic_gap(seq_b, 25) < 1e-12


class TestBuildBoundary:
    """Chain layout, junction continuity and construction guards"""

    def test_piece_count(self, seq_b):
        model = build_boundary(seq_b, 12)
        assert len(model.pieces) == 23
        assert len(model.arcs()) == 11
        assert model.closure.kind == PieceKind.CLOSURE
        assert model.closure.end == Point2(0.0, 0.0)

    def test_pieces_connect(self, model_b):
        for before, after in zip(model_b.pieces, model_b.pieces[1:]):
            assert (before.end - after.start).norm() <= 1e-15

    def test_normals_continuous_at_junctions(self, model_b):
        pieces = model_b.pieces[:-1]
        for before, after in zip(pieces, pieces[1:]):
            if before.kind == PieceKind.SEGMENT and after.kind == PieceKind.ARC:
                assert before.normal_angle == pytest.approx(after.start_angle, abs=1e-10)
            elif before.kind == PieceKind.ARC and after.kind == PieceKind.SEGMENT:
                assert before.end_angle == pytest.approx(after.normal_angle, abs=1e-10)

    def test_polar_angles_decrease_along_chain(self, model_b):
        angles = [Point2(1.0 + p.end.x, p.end.y).angle() for p in model_b.pieces]
        assert all(b < a for a, b in zip(angles, angles[1:]))
        assert angles[-1] == 0.0

    def test_top(self, model_b):
        assert model_b.top == pytest.approx(1.0)
        assert model_b.pieces[0].start.x == pytest.approx(-1.0)

    def test_depth_guards(self, seq_b, seq_c):
        with pytest.raises(GeometryError):
            build_boundary(seq_b, 2)
        with pytest.raises(GeometryError):
            build_boundary(seq_c, 13)
        with pytest.raises(GeometryError):
            build_boundary(seq_b, 499)

    def test_flat_top(self):
        seq = make_sequence("C", lam=0.9)
        model = build_boundary(seq, 10)
        top = model.pieces[0]
        assert top.index == 0
        assert top.kind == PieceKind.SEGMENT
        assert top.start.y == top.end.y
        assert model.top == pytest.approx(math.sin(alpha(seq, 2)), rel=1e-14)
        assert boundary_x_prime(model, 0.5 * (model.top + model.pieces[1].end.y)) < 0.0

    def test_polygon_variant(self, seq_b):
        model = build_boundary(seq_b, 12, variant=BoundaryVariant.POLYGON)
        assert len(model.pieces) == 12
        assert not model.arcs()
        assert model.pieces[-2].end == vertex_offset(seq_b, 12)

    def test_smooth_apex(self, seq_b):
        model = build_boundary(seq_b, 12, smooth_apex=True)
        apex = model.pieces[0]
        assert apex.kind == PieceKind.ARC
        assert apex.center == Point2(-1.0, 0.0)
        assert model.top == pytest.approx(math.cos(0.5 * alpha_diff(seq_b, 1, 2)))
        assert apex.end_angle == pytest.approx(model.pieces[1].normal_angle, abs=1e-12)
        y = 0.999 * model.top
        assert boundary_x(model, y) == pytest.approx(math.sqrt(model.top ** 2 - y * y), abs=1e-12)

    def test_smooth_apex_needs_first_index(self):
        seq = make_sequence("C", lam=0.9)
        with pytest.raises(GeometryError):
            build_boundary(seq, 10, smooth_apex=True)

    def test_smooth_apex_needs_smooth_variant(self, seq_b):
        with pytest.raises(GeometryError):
            build_boundary(seq_b, 12, variant=BoundaryVariant.POLYGON, smooth_apex=True)

    def test_truncation_safety(self, model_b):
        safe = [model_b.is_truncation_safe(i) for i in range(len(model_b.pieces))]
        assert safe[0]
        assert not safe[-1]
        arcs = {piece.index: position for position, piece in enumerate(model_b.pieces)
                if piece.kind == PieceKind.ARC}
        assert safe[arcs[30]]
        assert not safe[arcs[31]]
        assert not safe[arcs[32]]


class TestBoundaryFunction:
    """x(y) with its first and second derivatives"""

    def test_endpoints(self, model_b):
        assert boundary_x(model_b, 0.0) == 1.0
        assert boundary_x_prime(model_b, 0.0) == 0.0
        assert boundary_x(model_b, 1.0) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("n", range(2, 20))
    def test_slope_at_midpoints(self, model_b, seq_b, n):
        y_n = midpoint_offset(seq_b, n).y
        assert boundary_x_prime(model_b, y_n) == pytest.approx(-math.tan(half_angle(seq_b, n)), abs=1e-12)

    @given(y=st.floats(min_value=0.0, max_value=1.0))
    @settings(max_examples=200, deadline=None)
    def test_symmetry(self, model_b, y):
        assert boundary_x(model_b, -y) == boundary_x(model_b, y)
        assert boundary_x_prime(model_b, -y) == -boundary_x_prime(model_b, y)

    def test_slope_nonincreasing(self, model_b):
        ys = np.linspace(-0.99, 0.99, 2001)
        slopes = [boundary_x_prime(model_b, float(y)) for y in ys]
        assert all(b <= a + 1e-12 for a, b in zip(slopes, slopes[1:]))

    def test_concave(self, model_b):
        ys = np.linspace(-0.99, 0.99, 999)
        xs = [boundary_x(model_b, float(y)) for y in ys]
        for left, mid, right in zip(xs, xs[1:], xs[2:]):
            assert mid >= 0.5 * (left + right) - 1e-12

    def test_second_derivative_on_arc(self, model_b):
        arc = model_b.pieces[model_b.locate(0.3)]
        assert arc.kind == PieceKind.ARC
        y = 0.5 * (arc.start.y + arc.end.y)
        h = 1e-5 * (arc.start.y - arc.end.y)
        finite = (boundary_x_prime(model_b, y + h) - boundary_x_prime(model_b, y - h)) / (2 * h)
        assert boundary_x_second(model_b, y) == pytest.approx(finite, rel=1e-5)
        assert boundary_x_second(model_b, y) < 0.0

    def test_second_derivative_on_segment(self, model_b):
        segment = model_b.pieces[2]
        assert segment.kind == PieceKind.SEGMENT
        assert boundary_x_second(model_b, 0.5 * (segment.start.y + segment.end.y)) == 0.0

    @pytest.mark.parametrize("n", [3, 5, 20])
    def test_junctions_belong_to_arcs(self, model_b, seq_b, n):
        for y in (tangency_offset(seq_b, n).y, midpoint_offset(seq_b, n).y):
            piece = model_b.pieces[model_b.locate(y)]
            assert piece.kind == PieceKind.ARC
            assert piece.index == n

    def test_second_derivative_undefined_at_junctions(self, model_b, seq_b):
        assert boundary_x_second(model_b, midpoint_offset(seq_b, 3).y) is None
        assert boundary_x_second(model_b, 0.0) is None

    def test_ordinate_out_of_range(self, model_b):
        with pytest.raises(GeometryError):
            boundary_x(model_b, 1.5)

    def test_above_top(self, seq_b):
        model = build_boundary(seq_b, 12, smooth_apex=True)
        with pytest.raises(GeometryError):
            boundary_x(model, 1.0)


class TestSampling:
    """Arc-length samples of the boundary"""

    def test_samples_lie_on_boundary(self, model_b):
        points, step = sample_boundary(model_b, 5000, unfold=False)
        assert step == pytest.approx(model_b.length / 5000)
        for x, y in points[::37]:
            assert x == pytest.approx(boundary_x(model_b, min(float(y), model_b.top)), abs=1e-9)

    def test_unfolded_samples_symmetric(self, model_b):
        points, _ = sample_boundary(model_b, 1000)
        quarter = len(points) // 4
        np.testing.assert_array_equal(points[quarter:2 * quarter, 1], -points[:quarter, 1])
        np.testing.assert_array_equal(points[2 * quarter:3 * quarter, 0], -points[:quarter, 0])
