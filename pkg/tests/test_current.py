"""Tests for app.current module."""

import pytest

from app.coefficients import ParamPoly
from app.current import (
    CurrentAlgebra,
    CurrentElement,
    current_bracket,
    current_from_fn,
    degree_support,
    sl2_generator,
    tensor,
)
from app.exceptions import AlgebraMismatchError
from app.finite_lie import make_sl, parse_algebra_spec
from app.functions import FnElement


class TestCurrentBracket:
    """Test current_bracket function."""

    def test_threepoint_ef(self, threepoint):
        """Test [e(1), f(1)] = h(2) + a2 h(0)."""
        result = current_bracket(sl2_generator("e", 1, threepoint), sl2_generator("f", 1, threepoint))
        assert result.render() == "h(2) + a2*h(0)"

    def test_torus_ef(self, torus):
        """Test [e(1), f(1)] on the torus carries both lower terms."""
        result = current_bracket(sl2_generator("e", 1, torus), sl2_generator("f", 1, torus))
        assert result.render() == "h(2) + 3*e1*h(0) + (2*e1^2 - e1*e2 - e2^2)*h(-2)"

    def test_classical_he(self, classical):
        """Test [h(2), e(-1)] = 2 e(1)."""
        result = current_bracket(sl2_generator("h", 2, classical), sl2_generator("e", -1, classical))
        assert result.render() == "2*e(1)"

    def test_antisymmetry(self, torus):
        """Test [u, v] = -[v, u]."""
        u = sl2_generator("e", 3, torus) + sl2_generator("h", -1, torus)
        v = sl2_generator("f", 1, torus).scale(2)
        assert current_bracket(u, v) == -current_bracket(v, u)

    def test_jacobi(self, threepoint):
        """Test the Jacobi identity on one triple of odd generators."""
        x, y, z = (sl2_generator(k, 1, threepoint) for k in ("e", "f", "h"))
        total = (
            current_bracket(x, current_bracket(y, z))
            + current_bracket(y, current_bracket(z, x))
            + current_bracket(z, current_bracket(x, y))
        )
        assert total.is_zero()

    def test_incompatible_operands(self, threepoint, torus):
        """Test elements over different families do not bracket."""
        with pytest.raises(AlgebraMismatchError):
            current_bracket(sl2_generator("e", 0, threepoint), sl2_generator("f", 0, torus))

    def test_unknown_generator(self, classical):
        """Test sl2_generator validates its kind."""
        with pytest.raises(ValueError, match="Available: e, f, h"):
            sl2_generator("x", 0, classical)


class TestCurrentElement:
    """Test CurrentElement helpers."""

    def test_render_order(self, classical, sl2):
        """Test degree descending, then basis index ascending."""
        u = (
            CurrentElement.generator(sl2, classical, "h", 0)
            + CurrentElement.generator(sl2, classical, "e", 0, -1)
            + CurrentElement.generator(sl2, classical, "f", 2)
        )
        assert u.render() == "f(2) - e(0) + h(0)"
        assert degree_support(u) == {0, 2}

    def test_component(self, classical, sl2):
        """Test the g-part of one degree."""
        u = CurrentElement.generator(sl2, classical, "e", 1, 3)
        assert u.component(1) == sl2.element("e", 3)
        assert u.component(0).is_zero()

    def test_substitute(self, threepoint):
        """Test assignments specialize the coefficients."""
        u = current_bracket(sl2_generator("e", 1, threepoint), sl2_generator("f", 1, threepoint))
        assert u.substitute({"a2": 9}).render() == "h(2) + 9*h(0)"

    def test_tensor_and_from_fn(self, threepoint, sl2):
        """Test x (x) f built two ways."""
        f = FnElement.basis(threepoint, 1) + FnElement.basis(threepoint, -2, ParamPoly.parameter("a2"))
        assert tensor(sl2.element("h"), f) == current_from_fn(sl2, "h", f)

    def test_basis_listing(self, torus):
        """Test basis elements come ordered by degree then index."""
        algebra = CurrentAlgebra(make_sl(2), torus)
        basis = algebra.basis(range(0, 2))
        assert [b.render() for b in basis] == ["e(0)", "f(0)", "h(0)", "e(1)", "f(1)", "h(1)"]

    def test_direct_sum_summands_commute(self, classical):
        """Test the two copies of sl(2) commute."""
        algebra = CurrentAlgebra(parse_algebra_spec("sl2+sl2"), classical)
        assert algebra.bracket(algebra.generator("e", 1), algebra.generator("f'", -1)).is_zero()
