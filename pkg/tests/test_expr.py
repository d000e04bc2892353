"""Tests for app.expr module."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.coefficients import ParamPoly
from app.config import CliConfig
from app.current import CurrentElement
from app.elliptic import weierstrass_constants
from app.exceptions import ExprSyntaxError, UnknownGeneratorError
from app.expr import Bracket, ExprContext, Generator, parse_element, parse_expr, tokenize
from app.extensions import ExtendedElement
from app.families import TorusFamily
from app.finite_lie import make_sl, parse_algebra_spec
from app.functions import FnElement


@pytest.fixture
def sl2_threepoint(threepoint, sl2):
    return ExprContext(threepoint, sl2)


@pytest.fixture
def extended_threepoint(threepoint, sl2):
    return ExprContext(threepoint, sl2, extended=True)


class TestTokenize:
    """Test tokenize function."""

    def test_tokens(self):
        """Test numbers, primed and indexed identifiers and operators."""
        tokens = tokenize("3/2*E[1,2](-1) + e'(0)")
        assert [t.text for t in tokens] == [
            "3/2", "*", "E[1,2]", "(", "-", "1", ")", "+", "e'", "(", "0", ")", "",
        ]
        assert tokens[-1].kind == "end"
        assert tokens[2].position == 4

    def test_bad_character(self):
        """Test an unexpected character reports its position."""
        with pytest.raises(ExprSyntaxError, match="position 5") as info:
            tokenize("e(1) $")
        assert info.value.position == 5


class TestParser:
    """Test parse_expr function."""

    def test_bracket_tree(self, sl2_threepoint):
        """Test a bracket parses into a Bracket node."""
        node = parse_expr("[e(1), f(-1)]", sl2_threepoint)
        assert isinstance(node, Bracket)
        assert node.left == Generator("e", 1, 1)

    def test_from_config(self):
        """Test a CLI configuration builds the context."""
        config = CliConfig(family="torus", algebra="sl2", window="-1:1")
        assert isinstance(parse_expr("h(0)", config), Generator)

    @pytest.mark.parametrize(
        ("text", "position"),
        [
            ("e(1) +", 6),
            ("[e(1), f(1)", 11),
            ("e(1 + 2)", 4),
            ("e(x)", 2),
            ("(h(0)", 5),
            ("e(1) f(1)", 5),
        ],
    )
    def test_syntax_errors(self, sl2_threepoint, text, position):
        """Test malformed input reports the offending position."""
        with pytest.raises(ExprSyntaxError) as info:
            parse_expr(text, sl2_threepoint)
        assert info.value.position == position
        assert f"at position {position}" in str(info.value)

    def test_unknown_generator(self, sl2_threepoint):
        """Test a label outside the algebra lists the available ones."""
        with pytest.raises(UnknownGeneratorError, match="Available: e, f, h"):
            parse_expr("x(1)", sl2_threepoint)

    def test_unknown_parameter(self, sl2_threepoint):
        """Test a torus parameter is unknown on the three-point family."""
        with pytest.raises(UnknownGeneratorError, match="parameters of threepoint: a2"):
            parse_expr("e1*h(0)", sl2_threepoint)

    def test_central_takes_no_degree(self, extended_threepoint):
        """Test t(1) is rejected."""
        with pytest.raises(ExprSyntaxError, match="central generator"):
            parse_expr("t(1)", extended_threepoint)


class TestEvaluation:
    """Test parse_element function."""

    def test_bracket_threepoint(self, sl2_threepoint):
        """Test [e(1), f(1)] = h(2) + a2 h(0)."""
        result = parse_element("[e(1), f(1)]", sl2_threepoint)
        assert isinstance(result, CurrentElement)
        assert result.render() == "h(2) + a2*h(0)"

    def test_extended_bracket(self, extended_threepoint):
        """Test [e(2), f(-2)] = h(0) - 2t."""
        result = parse_element("[e(2), f(-2)]", extended_threepoint)
        assert isinstance(result, ExtendedElement)
        assert result.render() == "h(0) - 2*t"

    def test_central_needs_extension(self, sl2_threepoint):
        """Test t is unknown without --extended."""
        with pytest.raises(UnknownGeneratorError):
            parse_element("h(0) + t", sl2_threepoint)

    def test_scalar_arithmetic(self, sl2_threepoint):
        """Test scalar coefficients, powers and negation."""
        result = parse_element("-(a2^2 - 1/2)*e(3) + 2*a2*f(0)", sl2_threepoint)
        assert result.render() == "(-a2^2 + 1/2)*e(3) + 2*a2*f(0)"

    def test_nested_brackets(self, sl2_threepoint):
        """Test [h(0), [e(1), f(0)]] = 0."""
        assert parse_element("[h(0), [e(1), f(0)]]", sl2_threepoint).is_zero()

    def test_lie_product_rejected(self, sl2_threepoint):
        """Test x * y of Lie elements is an error."""
        with pytest.raises(ExprSyntaxError, match="multiply only through"):
            parse_element("e(1) * f(1)", sl2_threepoint)

    def test_bare_scalar_rejected(self, sl2_threepoint):
        """Test a scalar alone is not a current algebra element."""
        with pytest.raises(ExprSyntaxError, match="Scalar"):
            parse_element("a2 + 1", sl2_threepoint)

    def test_power_of_element_rejected(self, sl2_threepoint):
        """Test only scalars take powers."""
        with pytest.raises(ExprSyntaxError, match="Only scalars"):
            parse_element("e(1)^2", sl2_threepoint)

    def test_direct_sum_labels(self, classical):
        """Test primed labels of a direct sum resolve."""
        context = ExprContext(classical, parse_algebra_spec("sl2+sl2"))
        assert parse_element("[e'(1), f'(-1)]", context).render() == "h'(0)"

    def test_matrix_labels(self, torus):
        """Test sl(3) labels with indices."""
        context = ExprContext(torus, make_sl(3))
        assert parse_element("[E[1,2](0), E[2,1](0)]", context).render() == "H[1](0)"


class TestFunctionOnly:
    """Test the function algebra context."""

    def test_product(self, threepoint):
        """Test A(1) * A(1) = A(2) + a2 A(0)."""
        result = parse_element("A(1) * A(1)", ExprContext(threepoint))
        assert isinstance(result, FnElement)
        assert result.render() == "A(2) + a2*A(0)"

    def test_scalar_is_constant_function(self, torus):
        """Test a scalar lifts to a multiple of A(0)."""
        assert parse_element("3*e1", ExprContext(torus)).render() == "3*e1*A(0)"

    def test_bracket_vanishes(self, classical):
        """Test the function algebra is commutative."""
        assert parse_element("[A(1), A(2)]", ExprContext(classical)).is_zero()

    def test_lie_label_unknown(self, classical):
        """Test only A is a generator without a Lie algebra."""
        with pytest.raises(UnknownGeneratorError, match="function algebra"):
            parse_element("e(1)", ExprContext(classical))


_E = weierstrass_constants()
_TORUS_COEFFS = [ParamPoly.constant(1), ParamPoly.constant(-3), _E["e1"] * 2, _E["D"], -_E["e2"]]


class TestRoundTrip:
    """Test that canonical renderings parse back."""

    @settings(max_examples=50, deadline=None)
    @given(
        st.dictionaries(
            st.tuples(st.integers(0, 2), st.integers(-4, 4)),
            st.sampled_from(_TORUS_COEFFS),
            max_size=4,
        )
    )
    def test_torus_current_elements(self, terms):
        """Test parse(render(u)) == u."""
        family, algebra = TorusFamily(), make_sl(2)
        u = CurrentElement(algebra, family, terms)
        assert parse_element(u.render(), ExprContext(family, algebra)) == u
