import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from lightroute.errors import (CollinearDefiningPoints, DegenerateDirection, NotOnCircle,
                               ThetaOutOfRange)
from lightroute.geom import (Circle, ConeSystem, InCircle, Orientation, circle_segment_intersections,
                             circumcircle, cone_index, in_circle, incircle_sign, next_around,
                             on_cw_arc, orient_sign, orientation)

coord = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False)
point = st.tuples(coord, coord)


def exact_orient(a, b, c):
    ax, ay, bx, by, cx, cy = map(Fraction, (*a, *b, *c))
    d = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    return (d > 0) - (d < 0)


def exact_incircle(a, b, c, d):
    rows = []
    for p in (a, b, c):
        x, y = Fraction(p[0]) - Fraction(d[0]), Fraction(p[1]) - Fraction(d[1])
        rows.append((x, y, x * x + y * y))
    (a1, a2, a3), (b1, b2, b3), (c1, c2, c3) = rows
    det = (a1 * (b2 * c3 - b3 * c2) - a2 * (b1 * c3 - b3 * c1) + a3 * (b1 * c2 - b2 * c1))
    return (det > 0) - (det < 0)


class TestOrientation:
    def test_counterclockwise(self):
        assert orientation((0, 0), (1, 0), (0, 1)) is Orientation.COUNTERCLOCKWISE

    def test_collinear(self):
        assert orientation((0, 0), (1, 1), (2, 2)) is Orientation.COLLINEAR

    def test_clockwise(self):
        assert orientation((0, 0), (0, 1), (1, 0)) is Orientation.CLOCKWISE

    def test_near_degenerate_is_exact(self):
        # the float determinant of this triple rounds to the wrong sign
        a, b = (0.5, 0.5), (12.0, 12.0)
        for k in range(1, 64):
            c = (24.0, 24.0 + k * 2.0 ** -48)
            assert orient_sign(a, b, c) == exact_orient(a, b, c)

    @given(point, point, point)
    def test_matches_rational_arithmetic(self, a, b, c):
        assert orient_sign(a, b, c) == exact_orient(a, b, c)

    @given(point, point, point)
    def test_swap_flips_sign(self, a, b, c):
        assert orient_sign(a, b, c) == -orient_sign(b, a, c)
        assert orient_sign(a, b, c) == orient_sign(b, c, a)


class TestInCircle:
    def test_inside(self):
        assert in_circle((0, 0), (2, 0), (0, 2), (1, 1)) is InCircle.INSIDE

    def test_on_boundary(self):
        assert in_circle((0, 0), (2, 0), (0, 2), (2, 2)) is InCircle.ON_BOUNDARY

    def test_outside(self):
        assert in_circle((0, 0), (2, 0), (0, 2), (5, 5)) is InCircle.OUTSIDE

    def test_clockwise_input_is_accepted(self):
        assert in_circle((0, 0), (0, 2), (2, 0), (1, 1)) is InCircle.INSIDE

    def test_collinear_definers(self):
        with pytest.raises(CollinearDefiningPoints):
            in_circle((0, 0), (1, 1), (2, 2), (0, 1))

    @settings(max_examples=200)
    @given(point, point, point, point)
    def test_matches_rational_arithmetic(self, a, b, c, d):
        assert incircle_sign(a, b, c, d) == exact_incircle(a, b, c, d)


class TestCircumcircle:
    def test_right_triangle(self):
        c = circumcircle((0, 0), (2, 0), (0, 2))
        assert c.center == pytest.approx((1, 1))
        assert c.radius == pytest.approx(math.sqrt(2))

    def test_scalene_triangle(self):
        # the perpendicular bisectors meet at (47/22, 1/22), solved by hand
        c = circumcircle((0, 0), (3, 2), (4, -1))
        assert c.center[0] == pytest.approx(47 / 22, abs=1e-12)
        assert c.center[1] == pytest.approx(1 / 22, abs=1e-12)
        assert c.radius == pytest.approx(math.sqrt(2210) / 22, abs=1e-12)
        for p in ((0, 0), (3, 2), (4, -1)):
            assert math.dist(c.center, p) == pytest.approx(c.radius, rel=1e-12)

    def test_unit_circle(self):
        c = circumcircle((-1, 0), (1, 0), (0, 1))
        assert c.center == pytest.approx((0, 0), abs=1e-15)
        assert c.radius == pytest.approx(1.0)

    def test_collinear(self):
        with pytest.raises(CollinearDefiningPoints):
            circumcircle((0, 0), (1, 1), (3, 3))

    @given(point, point, point)
    def test_equidistant(self, a, b, c):
        assume(orient_sign(a, b, c) != 0)
        area = abs((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
        scale = max(math.dist(a, b), math.dist(b, c), math.dist(a, c))
        assume(area > 1e-3 * scale * scale)
        circ = circumcircle(a, b, c)
        for p in (a, b, c):
            assert math.dist(circ.center, p) == pytest.approx(circ.radius, rel=1e-7)


class TestCones:
    def test_quadrant_first(self):
        cs = ConeSystem.with_kappa(4)
        assert cone_index(cs, (0, 0), (1, 1)) == 0

    def test_quadrant_third(self):
        cs = ConeSystem.with_kappa(4)
        assert cone_index(cs, (0, 0), (-1, 0)) == 2

    def test_lower_boundary_included(self):
        cs = ConeSystem.with_kappa(4)
        assert cone_index(cs, (0, 0), (1, 0)) == 0

    def test_kappa_for_quarter_pi(self):
        assert ConeSystem(math.pi / 4).kappa == 8

    def test_kappa_rounds_up(self):
        assert ConeSystem(0.7).kappa == math.ceil(2 * math.pi / 0.7)

    @pytest.mark.parametrize("theta", [0.0, -0.1, math.pi / 2, 2.0])
    def test_theta_out_of_range(self, theta):
        with pytest.raises(ThetaOutOfRange):
            ConeSystem(theta)

    def test_coincident_points(self):
        with pytest.raises(DegenerateDirection):
            cone_index(ConeSystem(0.5), (1, 1), (1, 1))

    @given(point, point, st.integers(min_value=5, max_value=40))
    def test_index_in_range(self, a, b, kappa):
        assume(a != b)
        i = cone_index(ConeSystem.with_kappa(kappa), a, b)
        assert 0 <= i < kappa


class TestCircleSegment:
    unit = Circle((0.0, 0.0), 1.0)

    def test_diameter(self):
        got = circle_segment_intersections(self.unit, (-2, 0), (2, 0))
        assert got == [pytest.approx((-1, 0)), pytest.approx((1, 0))]

    def test_tangent(self):
        got = circle_segment_intersections(self.unit, (-2, 1), (2, 1))
        assert len(got) == 1
        assert got[0] == pytest.approx((0, 1))

    def test_disjoint(self):
        assert circle_segment_intersections(self.unit, (5, 5), (6, 6)) == []


class TestArcs:
    unit = Circle((0.0, 0.0), 1.0)

    def test_upper_half_is_clockwise_from_left(self):
        assert on_cw_arc(self.unit, (-1, 0), (1, 0), (0, 1))

    def test_lower_half_is_not(self):
        assert not on_cw_arc(self.unit, (-1, 0), (1, 0), (0, -1))

    def test_endpoint_included(self):
        assert on_cw_arc(self.unit, (-1, 0), (-1, 0), (-1, 0))

    def test_off_circle(self):
        with pytest.raises(NotOnCircle):
            on_cw_arc(self.unit, (-1, 0), (1, 0), (0, 0.5))


def test_next_around_turns_both_ways():
    cands = [(1, (1.0, 1.0)), (2, (-1.0, 1.0)), (3, (0.0, -1.0))]
    assert next_around((0, 0), (1, 0), cands, cw=False) == 1
    assert next_around((0, 0), (1, 0), cands, cw=True) == 3
