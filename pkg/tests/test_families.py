"""Tests for app.families module."""

from itertools import product

import pytest

from app.coefficients import ParamPoly
from app.elliptic import weierstrass_constants
from app.extensions import oracle_basis_pairing
from app.families import (
    ClassicalFamily,
    ThreePointFamily,
    TorusFamily,
    create_family,
    list_families,
)
from app.series import PointLabel

A2 = ParamPoly.parameter("a2")
E = weierstrass_constants()
SMALL = range(-3, 4)


def _one(family):
    return family.constant(1)


class TestFamilyFactory:
    """Test family registry and factory."""

    def test_list_families(self):
        """Test the registered names."""
        assert list_families() == ["classical", "threepoint", "torus"]

    def test_create_family(self):
        """Test the factory returns fresh instances."""
        assert isinstance(create_family("threepoint"), ThreePointFamily)
        assert create_family("torus", use_cache=False).use_cache is False

    def test_create_unknown_family(self):
        """Test an unknown name lists the available ones."""
        with pytest.raises(ValueError, match="Available: classical, threepoint, torus"):
            create_family("genus2")

    def test_families_compare_by_name(self):
        """Test cached and uncached torus instances are the same family."""
        assert TorusFamily(use_cache=False) == TorusFamily()
        assert ThreePointFamily() != ClassicalFamily()

    def test_unmarked_point(self, threepoint):
        """Test a point of another surface is refused."""
        with pytest.raises(ValueError, match="not marked"):
            threepoint.valuation(0, PointLabel.ORIGIN)


class TestClassicalFamily:
    """Test ClassicalFamily closed forms."""

    def test_product_and_derivative(self, classical):
        """Test z^n z^m = z^(n+m) and (z^n)' = n z^(n-1)."""
        assert classical.basis_product(2, -5) == {-3: _one(classical)}
        assert classical.basis_derivative(-2) == {-3: classical.constant(-2)}
        assert classical.basis_derivative(0) == {}

    def test_pairing(self, classical):
        """Test omega(z^n, z^m) = -n when m = -n."""
        assert classical.basis_pairing(3, -3) == -3
        assert classical.basis_pairing(3, -2) == 0

    def test_oracle_product(self, classical):
        """Test the polynomial oracle on a mixed combination."""
        f = {-1: classical.constant(2), 1: classical.constant(1)}
        g = {1: classical.constant(1)}
        assert classical.oracle_multiply(f, g) == {0: classical.constant(2), 2: _one(classical)}


class TestThreePointFamily:
    """Test ThreePointFamily closed forms."""

    def test_odd_times_odd(self, threepoint):
        """Test A_1 A_1 = A_2 + a^2 A_0."""
        assert threepoint.basis_product(1, 1) == {2: _one(threepoint), 0: A2}

    def test_even_times_any(self, threepoint):
        """Test a product with an even factor has a single term."""
        assert threepoint.basis_product(2, -3) == {-1: _one(threepoint)}

    def test_derivative_of_odd(self, threepoint):
        """Test (z w)' = 3 w + 2 a^2."""
        assert threepoint.basis_derivative(3) == {2: threepoint.constant(3), 0: A2 * 2}

    def test_derivative_of_even(self, threepoint):
        """Test (w^k)' = 2k z w^(k-1)."""
        assert threepoint.basis_derivative(4) == {3: threepoint.constant(4)}
        assert threepoint.basis_derivative(0) == {}

    @pytest.mark.parametrize(
        ("n", "m", "expected"),
        [
            (2, -2, ParamPoly.constant(-2)),
            (1, -1, ParamPoly.constant(-1)),
            (3, -1, A2 * -2),
            (-1, 3, A2 * 2),
            (1, 1, ParamPoly.constant(0)),
            (2, -1, ParamPoly.constant(0)),
        ],
    )
    def test_pairing(self, threepoint, n, m, expected):
        """Test the closed-form pairing values."""
        assert threepoint.basis_pairing(n, m) == expected

    @pytest.mark.parametrize(("n", "m"), list(product(SMALL, repeat=2)))
    def test_product_matches_oracle(self, threepoint, n, m):
        """Test the degree rule against polynomial division by w."""
        oracle = threepoint.oracle_multiply({n: _one(threepoint)}, {m: _one(threepoint)})
        assert threepoint.basis_product(n, m) == oracle

    @pytest.mark.parametrize(("n", "m"), list(product(SMALL, repeat=2)))
    def test_pairing_matches_residues(self, threepoint, n, m):
        """Test the closed-form pairing against residues at +a and -a."""
        assert threepoint.basis_pairing(n, m) == oracle_basis_pairing(threepoint, n, m)

    @pytest.mark.parametrize("n", [-4, -3, -1, 0, 1, 2, 5])
    @pytest.mark.parametrize("point", [PointLabel.PLUS_A, PointLabel.MINUS_A, PointLabel.INFINITY])
    def test_expansion_valuation(self, threepoint, n, point):
        """Test the leading exponent of the expansion equals the valuation."""
        order = threepoint.valuation(n, point) + 3
        assert threepoint.expand_basis(n, point, order).valuation() == threepoint.valuation(n, point)


class TestTorusFamily:
    """Test TorusFamily closed forms."""

    def test_odd_times_odd(self, torus):
        """Test A_1 A_1 = A_2 + 3 e1 A_0 + D A_-2."""
        assert torus.basis_product(1, 1) == {2: _one(torus), 0: E["e1"] * 3, -2: E["D"]}

    def test_cache_toggle(self):
        """Test the memoized and direct product rules agree."""
        cached, direct = TorusFamily(use_cache=True), TorusFamily(use_cache=False)
        for n, m in product(SMALL, repeat=2):
            assert cached.basis_product(n, m) == direct.basis_product(n, m)

    def test_derivatives(self, torus):
        """Test A_2k' = 2k A_2k+1 and A_1' = A_2 - D A_-2."""
        assert torus.basis_derivative(2) == {3: torus.constant(2)}
        assert torus.basis_derivative(1) == {2: _one(torus), -2: -E["D"]}

    @pytest.mark.parametrize("k", [-2, -1, 1, 2])
    def test_odd_derivative_closed_form(self, torus, k):
        """Test A_2k+1' = (2k+1) A_2k+2 + 6k e1 A_2k + (2k-1) D A_2k-2."""
        expected = {
            2 * k + 2: torus.constant(2 * k + 1),
            2 * k: E["e1"] * (6 * k),
            2 * k - 2: E["D"] * (2 * k - 1),
        }
        assert torus.basis_derivative(2 * k + 1) == {h: c for h, c in expected.items() if c}

    @pytest.mark.parametrize(
        ("n", "m", "expected"),
        [
            (1, -1, ParamPoly.constant(-1)),
            (3, -1, E["e1"] * -6),
            (3, 1, E["D"] * -1),
            (-1, 5, E["D"] * 3),
            (1, 1, ParamPoly.constant(0)),
        ],
    )
    def test_pairing(self, torus, n, m, expected):
        """Test the closed-form pairing values."""
        assert torus.basis_pairing(n, m) == expected

    @pytest.mark.parametrize(("n", "m"), list(product(SMALL, repeat=2)))
    def test_product_matches_oracle(self, torus, n, m):
        """Test the degree rule against normal-form arithmetic."""
        oracle = torus.oracle_multiply({n: _one(torus)}, {m: _one(torus)})
        assert torus.basis_product(n, m) == oracle

    @pytest.mark.parametrize(("n", "m"), list(product(range(-2, 3), repeat=2)))
    def test_pairing_matches_residues(self, torus, n, m):
        """Test the closed-form pairing against residues at the origin."""
        assert torus.basis_pairing(n, m) == oracle_basis_pairing(torus, n, m)

    @pytest.mark.parametrize(
        ("n", "point", "expected"),
        [
            (3, PointLabel.ORIGIN, -3),
            (-2, PointLabel.ORIGIN, 2),
            (4, PointLabel.HALF, 4),
            (3, PointLabel.HALF, 1),
            (-1, PointLabel.HALF, -3),
        ],
    )
    def test_valuation(self, torus, n, point, expected):
        """Test orders at the origin and at the half period."""
        assert torus.valuation(n, point) == expected

    @pytest.mark.parametrize("n", [-3, -2, 1, 2, 3])
    def test_expansion_valuation(self, torus, n):
        """Test the leading exponent at the origin equals -n."""
        assert torus.expand_basis(n, PointLabel.ORIGIN, -n + 3).valuation() == -n


@pytest.mark.slow
class TestWideSweeps:
    """Test closed forms against oracles for |n|, |m| <= 8."""

    WIDE = range(-8, 9)

    @pytest.mark.parametrize("name", ["threepoint", "torus"])
    def test_products(self, name):
        """Test every product in the wide window."""
        family = create_family(name)
        one = _one(family)
        for n, m in product(self.WIDE, repeat=2):
            assert family.basis_product(n, m) == family.oracle_multiply({n: one}, {m: one})

    @pytest.mark.parametrize("name", ["classical", "threepoint", "torus"])
    def test_pairings(self, name):
        """Test every pairing in the wide window against the residues."""
        family = create_family(name)
        for n, m in product(self.WIDE, repeat=2):
            assert family.basis_pairing(n, m) == oracle_basis_pairing(family, n, m)
