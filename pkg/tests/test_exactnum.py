import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from errors import (
    CoincidentPoints,
    DegenerateMap,
    GeometryError,
    IndeterminateForm,
    PoleInInterval,
    RationalParseError,
)
from exactnum import (
    INF,
    NEG_INF,
    ONE,
    ZERO,
    DiagramPoint,
    ExtRat,
    Line,
    LineRelation,
    MoebiusMap,
    intersect,
    line_through,
    moebius_extremum_on_interval,
    parse_rational,
    reciprocal,
    to_decimal,
)
from strategies import rationals


class TestExtRat:
    def test_reduces_and_prints(self):
        assert str(ExtRat(6, 4)) == "3/2"
        assert str(ExtRat(4, 2)) == "2"
        assert str(INF) == "inf"
        assert str(NEG_INF) == "-inf"

    def test_rejects_floats(self):
        with pytest.raises(TypeError):
            ExtRat(0.5)

    def test_infinite_arithmetic(self):
        assert INF + 3 == INF
        assert NEG_INF * ExtRat(-2) == INF
        assert INF / 2 == INF

    @pytest.mark.parametrize("op", [
        lambda: INF - INF,
        lambda: INF * ZERO,
        lambda: ONE / INF,
        lambda: ONE / ZERO,
        lambda: INF.fraction,
    ])
    def test_indeterminate_forms_raise(self, op):
        with pytest.raises(IndeterminateForm):
            op()

    def test_ordering_with_infinities(self):
        assert NEG_INF < ExtRat(-10**9) < ZERO < ExtRat(10**9) < INF
        assert max(ExtRat(1, 3), ExtRat(1, 2)) == ExtRat(1, 2)

    @settings(max_examples=1000, deadline=None)
    @given(rationals(), rationals())
    def test_field_operations_match_fraction(self, a, b):
        assert (a + b).fraction == a.fraction + b.fraction
        assert (a * b).fraction == a.fraction * b.fraction
        if b.sign != 0:
            assert (a / b).fraction == a.fraction / b.fraction
        assert (a < b) == (a.fraction < b.fraction)

    @settings(max_examples=1000, deadline=None)
    @given(rationals())
    def test_print_parse(self, a):
        assert parse_rational(str(a)) == a

    def test_order_is_compatible_with_arithmetic(self):
        rng = random.Random(1729)
        for _ in range(10_000):
            a, b, c = (ExtRat(rng.randint(-500, 500), rng.randint(1, 60)) for _ in range(3))
            if a < b:
                assert a + c < b + c
                assert (a * c < b * c) if c.sign > 0 else (a * c >= b * c)
            assert (a < b) + (a == b) + (a > b) == 1
            assert (a + b) + c == a + (b + c)
            assert a * (b + c) == a * b + a * c


class TestReciprocal:
    def test_conventions(self):
        assert reciprocal(ZERO) == INF
        assert reciprocal(INF) == ZERO
        assert reciprocal(NEG_INF) == ZERO
        assert reciprocal(ExtRat(2, 3)) == ExtRat(3, 2)


class TestParseRational:
    @pytest.mark.parametrize("text, expected", [
        ("3/2", ExtRat(3, 2)),
        ("  -4 ", ExtRat(-4)),
        ("+7/14", ExtRat(1, 2)),
        ("inf", INF),
        ("∞", INF),
        ("-inf", NEG_INF),
    ])
    def test_accepts(self, text, expected):
        assert parse_rational(text) == expected

    @pytest.mark.parametrize("text, position", [
        ("1/x", 2),
        ("abc", 0),
        ("3/0", 2),
        ("1.5", 1),
        (" 2/3z", 4),
    ])
    def test_reports_position(self, text, position):
        with pytest.raises(RationalParseError) as info:
            parse_rational(text)
        assert info.value.position == position


class TestToDecimal:
    def test_significant_digits(self):
        assert to_decimal(ExtRat(1, 3)) == "0.333333"
        assert to_decimal(ExtRat(20, 13), 4) == "1.538"
        assert to_decimal(ExtRat(3)) == "3"
        assert to_decimal(INF) == "inf"


class TestLines:
    @pytest.mark.parametrize("p1, p2", [
        ((0, 1), (1, 2)),
        ((Fraction(1, 2), Fraction(3, 2)), (1, 2)),
        ((Fraction(1, 4), Fraction(5, 4)), (Fraction(1, 2), Fraction(3, 2))),
    ])
    def test_line_through_slope_one(self, p1, p2):
        line = line_through(DiagramPoint(*p1), DiagramPoint(*p2))
        assert line == Line.with_slope(DiagramPoint(0, 1), 1)
        assert str(line) == "y = x + 1"

    def test_coincident_points(self):
        with pytest.raises(CoincidentPoints):
            line_through(DiagramPoint(1, 1), DiagramPoint(1, 1))

    def test_vertical(self):
        line = line_through(DiagramPoint(1, 0), DiagramPoint(1, 3))
        assert line.is_vertical
        assert line.slope == INF
        assert str(line) == "x = 1"

    def test_intersections(self):
        diagonal = Line.with_slope(DiagramPoint(0, 1), 1)
        steep = Line.with_slope(DiagramPoint(Fraction(1, 2), 0), 2)
        assert intersect(diagonal, steep) == DiagramPoint(2, 3)
        assert intersect(Line.with_slope(DiagramPoint(0, 0), 1), diagonal) is LineRelation.PARALLEL
        assert intersect(diagonal, diagonal) is LineRelation.IDENTICAL

    def test_intersection_left_of_axis(self):
        a = Line.with_slope(DiagramPoint(0, 1), 1)
        b = Line.with_slope(DiagramPoint(0, 2), 2)
        assert intersect(a, b) is LineRelation.OUTSIDE_DIAGRAM

    def test_points_are_finite_and_right_of_axis(self):
        with pytest.raises(GeometryError):
            DiagramPoint(-1, 0)
        with pytest.raises(GeometryError):
            DiagramPoint(0, INF)


class TestMoebius:
    def test_degenerate(self):
        with pytest.raises(DegenerateMap):
            MoebiusMap(1, 2, 2, 4)

    def test_identity_min(self):
        result = moebius_extremum_on_interval(MoebiusMap(1, 0, 0, 1), 0, 1)
        assert result.value == 0
        assert result.attained

    def test_reciprocal_min_on_half_open(self):
        result = moebius_extremum_on_interval(MoebiusMap(0, 1, 1, 0), 0, 1, (True, False), "min")
        assert result.value == 1
        assert result.at == 1

    def test_reciprocal_max_reaches_pole_limit(self):
        result = moebius_extremum_on_interval(MoebiusMap(0, 1, 1, 0), 0, 1, (True, False), "max")
        assert result.value == INF
        assert not result.attained

    def test_pole_inside_interval(self):
        with pytest.raises(PoleInInterval):
            moebius_extremum_on_interval(MoebiusMap(0, 1, 1, 0), -1, 1)

    def test_closed_endpoint_at_pole(self):
        with pytest.raises(PoleInInterval):
            moebius_extremum_on_interval(MoebiusMap(0, 1, 1, 0), 0, 1)

    def test_stokes_shaped_map(self):
        # (24/5) t / (2t - 1/10) on (1/20, 1/4]: decreasing, infimum 3 at 1/4
        m = MoebiusMap(ExtRat(24, 5), 0, 2, ExtRat(-1, 10))
        result = moebius_extremum_on_interval(m, ExtRat(1, 20), ExtRat(1, 4), (True, False))
        assert result.value == 3
        assert result.attained

    def test_limit_at_infinity(self):
        assert MoebiusMap(2, 1, 1, 1).limit(INF, "left") == 2
        assert MoebiusMap(1, 0, 0, 1).limit(NEG_INF, "right") == NEG_INF

    @settings(max_examples=200, deadline=None)
    @given(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5))
    def test_extremum_dominates_samples(self, a, b, c, d):
        try:
            m = MoebiusMap(a, b, c, d)
        except DegenerateMap:
            return
        lo, hi = ExtRat(1), ExtRat(2)
        if m.pole is not None and lo <= m.pole <= hi:
            return
        low = moebius_extremum_on_interval(m, lo, hi, objective="min").value
        high = moebius_extremum_on_interval(m, lo, hi, objective="max").value
        for k in range(1001):
            value = m(lo + ExtRat(k, 1000))
            assert low <= value <= high
