"""Tests for app.coefficients module."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.coefficients import (
    ParamPoly,
    parse_rational,
    poly_add,
    poly_mul,
    poly_substitute,
    poly_sum,
    render_combination,
)
from app.exceptions import ParameterMismatchError

TORUS = ("e1", "e2")

small = st.integers(min_value=-5, max_value=5)


@st.composite
def torus_polys(draw):
    """Random polynomials of degree <= 2 in e1, e2."""
    terms = {}
    for i in range(3):
        for j in range(3 - i):
            c = draw(small)
            if c:
                terms[(i, j)] = c
    return ParamPoly.from_terms(terms, TORUS)


class TestParamPolyArithmetic:
    """Test ParamPoly ring operations."""

    def test_torus_discriminant_factor(self):
        """Test (e1 - e2)(2 e1 + e2) expands canonically."""
        e1, e2 = ParamPoly.parameter("e1", TORUS), ParamPoly.parameter("e2", TORUS)
        assert ((e1 - e2) * (e1 * 2 + e2)).render() == "2*e1^2 - e1*e2 - e2^2"

    def test_ground_promotion(self):
        """Test a pure rational combines with any parameter set."""
        a2 = ParamPoly.parameter("a2", ("a2",))
        result = a2 + ParamPoly.constant(3)
        assert result.parameters == ("a2",)
        assert result.render() == "a2 + 3"

    def test_mismatched_parameter_sets(self):
        """Test two different non-empty parameter sets do not mix."""
        a2 = ParamPoly.parameter("a2", ("a2",))
        e1 = ParamPoly.parameter("e1", TORUS)
        with pytest.raises(ParameterMismatchError):
            a2 + e1

    def test_polynomial_outside_declared_parameters(self):
        """Test declaring too few parameters is rejected."""
        with pytest.raises(ParameterMismatchError):
            ParamPoly.parameter("e1", ("a2",))

    def test_negative_power(self):
        """Test negative powers are refused."""
        with pytest.raises(ValueError):
            ParamPoly.parameter("a2", ("a2",)) ** -1

    def test_substitute_partial(self):
        """Test substitution keeps unassigned parameters formal."""
        e1, e2 = ParamPoly.parameter("e1", TORUS), ParamPoly.parameter("e2", TORUS)
        value = (e1 * e1 * 2 - e1 * e2 - e2 * e2).substitute({"e1": 1})
        assert value.render() == "-e2^2 - e2 + 2"

    def test_substitute_unknown_parameter(self):
        """Test substituting a foreign parameter raises."""
        with pytest.raises(ParameterMismatchError):
            ParamPoly.parameter("a2", ("a2",)).substitute({"e1": 0})

    def test_constant_value(self):
        """Test constant_value on constants and non-constants."""
        assert ParamPoly.constant(Fraction(-3, 4)).constant_value() == Fraction(-3, 4)
        with pytest.raises(ValueError):
            ParamPoly.parameter("a2", ("a2",)).constant_value()

    def test_helper_functions(self):
        """Test the functional wrappers agree with the operators."""
        a2 = ParamPoly.parameter("a2", ("a2",))
        assert poly_add(a2, a2) == a2 * 2
        assert poly_mul(a2, a2) == a2**2
        assert poly_substitute(a2 * 3, {"a2": 2}) == 6
        assert poly_sum([a2, a2, ParamPoly.constant(1)], ("a2",)).render() == "2*a2 + 1"

    @given(torus_polys(), torus_polys(), torus_polys())
    def test_ring_axioms(self, p, q, r):
        """Test associativity, commutativity and distributivity."""
        assert (p + q) + r == p + (q + r)
        assert p * q == q * p
        assert (p * q) * r == p * (q * r)
        assert p * (q + r) == p * q + p * r
        assert p - p == 0

    @given(torus_polys())
    def test_parse_render_round_trip(self, p):
        """Test parse(render(p)) == p."""
        assert ParamPoly.parse(p.render(), TORUS) == p


class TestRendering:
    """Test canonical rendering helpers."""

    def test_render_zero(self):
        """Test the zero polynomial renders as 0."""
        assert ParamPoly.zero(TORUS).render() == "0"

    def test_render_rational_coefficient(self):
        """Test exact fractions render as p/q."""
        e1 = ParamPoly.parameter("e1", TORUS)
        assert (e1 * Fraction(-1, 2) + Fraction(1, 3)).render() == "-1/2*e1 + 1/3"

    def test_render_combination_ordering_and_signs(self):
        """Test coefficient 1 is omitted and multi-term coefficients are parenthesized."""
        e1, e2 = ParamPoly.parameter("e1", TORUS), ParamPoly.parameter("e2", TORUS)
        text = render_combination(
            [
                ("h(2)", ParamPoly.constant(1)),
                ("h(0)", e1 * 3),
                ("h(-2)", e1 * e1 * 2 - e1 * e2 - e2 * e2),
            ]
        )
        assert text == "h(2) + 3*e1*h(0) + (2*e1^2 - e1*e2 - e2^2)*h(-2)"

    def test_render_combination_negative_terms(self):
        """Test -1 renders as a bare minus sign."""
        text = render_combination(
            [("h(0)", ParamPoly.constant(-1)), ("t", ParamPoly.constant(-2))]
        )
        assert text == "-h(0) - 2*t"

    def test_render_combination_empty(self):
        """Test an all-zero combination renders as 0."""
        assert render_combination([("h(0)", ParamPoly.zero())]) == "0"


class TestParseRational:
    """Test parse_rational function."""

    @pytest.mark.parametrize(
        ("text", "expected"),
        [("3", Fraction(3)), ("-2/6", Fraction(-1, 3)), (" 7/1 ", Fraction(7))],
    )
    def test_valid(self, text, expected):
        """Test exact rationals parse."""
        assert parse_rational(text) == expected

    @pytest.mark.parametrize("text", ["1.5.2", "1/0", "x"])
    def test_invalid(self, text):
        """Test malformed rationals raise ValueError."""
        with pytest.raises(ValueError):
            parse_rational(text)
