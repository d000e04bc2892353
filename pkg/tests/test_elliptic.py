"""Tests for app.elliptic module."""

from fractions import Fraction

import pytest

from app.coefficients import ParamPoly
from app.elliptic import (
    EllipticNormalForm,
    field_weierstrass_constants,
    weierstrass_constants,
    weierstrass_residual,
    weierstrass_series,
)
from app.series import E1, FIELD, PointLabel, field_constant

TORUS = ("e1", "e2")


class TestWeierstrassConstants:
    """Test weierstrass_constants function."""

    def test_discriminant_factor(self):
        """Test D = (e1 - e2)(2 e1 + e2) in canonical form."""
        assert weierstrass_constants()["D"].render() == "2*e1^2 - e1*e2 - e2^2"

    def test_roots_sum_to_zero(self):
        """Test e1 + e2 + e3 = 0."""
        c = weierstrass_constants()
        assert (c["e1"] + c["e2"] + c["e3"]).is_zero()

    def test_g2_from_roots(self):
        """Test g2 = -4 (e1 e2 + e2 e3 + e3 e1)."""
        c = weierstrass_constants()
        expected = (c["e1"] * c["e2"] + c["e2"] * c["e3"] + c["e3"] * c["e1"]) * -4
        assert c["g2"] == expected


class TestEllipticNormalForm:
    """Test EllipticNormalForm arithmetic."""

    def test_odd_times_odd(self):
        """Test A_1 * A_1 = A_2 + 3 e1 A_0 + D A_-2."""
        c = weierstrass_constants()
        a1 = EllipticNormalForm.from_basis(1)
        assert (a1 * a1).to_basis() == {
            2: ParamPoly.constant(1, TORUS),
            0: c["e1"] * 3,
            -2: c["D"],
        }

    def test_even_times_odd(self):
        """Test A_2 * A_3 = A_5."""
        product = EllipticNormalForm.from_basis(2) * EllipticNormalForm.from_basis(3)
        assert product.to_basis() == {5: ParamPoly.constant(1, TORUS)}

    def test_derivative_of_a1(self):
        """Test A_1' = A_2 - D A_-2."""
        c = weierstrass_constants()
        derivative = EllipticNormalForm.from_basis(1).derivative().to_basis()
        assert derivative == {2: ParamPoly.constant(1, TORUS), -2: -c["D"]}

    def test_derivative_of_even(self):
        """Test A_4' = 4 A_5."""
        derivative = EllipticNormalForm.from_basis(4).derivative().to_basis()
        assert derivative == {5: ParamPoly.constant(4, TORUS)}

    @pytest.mark.parametrize("n", [-5, -2, 0, 1, 3, 6])
    def test_basis_round_trip(self, n):
        """Test from_basis and to_basis are inverse."""
        assert EllipticNormalForm.from_basis(n).to_basis() == {n: ParamPoly.constant(1, TORUS)}


class TestWeierstrassSeries:
    """Test the solved Laurent expansions of P."""

    def test_origin_coefficients(self):
        """Test P = t^-2 + g2/20 t^2 + g3/28 t^4 + ... at the origin."""
        fc = field_weierstrass_constants()
        series = weierstrass_series(PointLabel.ORIGIN, 6)
        assert series.coefficient(-2) == FIELD.one
        assert series.coefficient(0) == FIELD.zero
        assert series.coefficient(2) == fc["g2"] * field_constant(Fraction(1, 20))
        assert series.coefficient(4) == fc["g3"] * field_constant(Fraction(1, 28))

    def test_half_period_coefficients(self):
        """Test P = e1 + D t^2 + ... at the half period."""
        series = weierstrass_series(PointLabel.HALF, 4)
        assert series.coefficient(0) == E1
        assert series.coefficient(1) == FIELD.zero
        assert series.coefficient(2) == field_weierstrass_constants()["D"]

    @pytest.mark.parametrize("point", [PointLabel.ORIGIN, PointLabel.HALF])
    def test_residual_vanishes(self, point):
        """Test the solved series satisfy the differential equation to known order."""
        residual = weierstrass_residual(weierstrass_series(point, 10))
        assert residual.coeffs == {}

    def test_precision_honoured(self):
        """Test the returned series is known exactly below the request."""
        assert weierstrass_series(PointLabel.ORIGIN, 8).precision == 8

    def test_unmarked_point(self):
        """Test only the torus points have an expansion."""
        with pytest.raises(ValueError):
            weierstrass_series(PointLabel.INFINITY, 4)
