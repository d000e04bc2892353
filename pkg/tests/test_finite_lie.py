"""Tests for app.finite_lie module."""

from fractions import Fraction

import pytest

from app.coefficients import ParamPoly
from app.exceptions import AlgebraMismatchError
from app.finite_lie import (
    BasisRealization,
    FiniteLieAlgebra,
    Summand,
    cartan_elements,
    describe,
    direct_sum,
    expected_local_cocycle_dimension,
    jacobi_violations,
    lie_bracket,
    make_abelian,
    make_gl,
    make_sl,
    matrix_trace_form,
    parse_algebra_spec,
    trace_form,
    trace_product_form,
)


class TestMatrixAlgebras:
    """Test the sl(n), gl(n) and abelian builders."""

    def test_sl2_relations(self, sl2):
        """Test [e,f]=h, [h,e]=2e, [h,f]=-2f."""
        e, f, h = (sl2.element(label) for label in ("e", "f", "h"))
        assert lie_bracket(e, f) == h
        assert lie_bracket(h, e) == e.scale(2)
        assert lie_bracket(h, f) == f.scale(-2)

    @pytest.mark.parametrize(("n", "dim"), [(2, 3), (3, 8), (4, 15)])
    def test_sl_dimension(self, n, dim):
        """Test dim sl(n) = n^2 - 1."""
        assert make_sl(n).dim == dim

    def test_gl2_basis(self, gl2):
        """Test gl(2) leads with the identity and has two summands."""
        assert gl2.labels[0] == "I"
        assert gl2.dim == 4
        assert [s.kind for s in gl2.summands] == ["abelian", "simple"]

    @pytest.mark.parametrize(
        "algebra", [make_sl(2), make_sl(3), make_gl(2), make_gl(3), make_abelian(2)]
    )
    def test_jacobi_holds(self, algebra):
        """Test the structure constants satisfy Jacobi exhaustively."""
        assert jacobi_violations(algebra) == []

    def test_invalid_sizes(self):
        """Test degenerate sizes are rejected."""
        with pytest.raises(ValueError):
            make_sl(1)
        with pytest.raises(ValueError):
            make_gl(0)
        with pytest.raises(ValueError):
            make_abelian(0)

    def test_cartan_elements(self, sl2, gl2):
        """Test diagonal basis elements are reported."""
        assert [sl2.labels[i] for i in cartan_elements(sl2)] == ["h"]
        assert [gl2.labels[i] for i in cartan_elements(gl2)] == ["I", "H[1]"]

    def test_unknown_label(self, sl2):
        """Test asking for a missing label names the available ones."""
        with pytest.raises(ValueError, match="Available: e, f, h"):
            sl2.element("x")

    def test_non_antisymmetric_constants_rejected(self):
        """Test a hand-built algebra with bad constants is refused."""
        with pytest.raises(ValueError, match="antisymmetric"):
            FiniteLieAlgebra(
                name="bad",
                labels=("x", "y"),
                structure={(0, 1): {0: Fraction(1)}},
                summands=(Summand(0, 2, "simple", "bad"),),
                realizations=(BasisRealization(0, None), BasisRealization(0, None)),
            )


class TestDirectSums:
    """Test direct sums and spec parsing."""

    def test_abelian_blocks_merge_first(self):
        """Test gl(2)+abelian(1) puts both scalars ahead of the simple block."""
        algebra = direct_sum(make_gl(2), make_abelian(1))
        assert algebra.summands[0].kind == "abelian"
        assert algebra.summands[0].length == 2
        assert algebra.labels[:2] == ("I", "X[1]")

    def test_duplicate_labels_are_primed(self):
        """Test repeated labels get a prime."""
        algebra = parse_algebra_spec("sl2+sl2")
        assert algebra.labels == ("e", "f", "h", "e'", "f'", "h'")

    def test_brackets_stay_inside_summands(self):
        """Test elements of different summands commute."""
        algebra = parse_algebra_spec("sl2+sl2")
        assert lie_bracket(algebra.element("e"), algebra.element("f'")).is_zero()
        assert lie_bracket(algebra.element("e'"), algebra.element("f'")) == algebra.element("h'")

    @pytest.mark.parametrize(
        ("text", "name"),
        [("sl2", "sl(2)"), ("SL(3)", "sl(3)"), ("gl2", "gl(2)"), ("abelian(2)", "abelian(2)")],
    )
    def test_parse_single(self, text, name):
        """Test single-summand specs."""
        assert parse_algebra_spec(text).name == name

    def test_parse_is_identity_cached(self):
        """Test equal specs give the same algebra object."""
        assert parse_algebra_spec("sl2 + gl2") is parse_algebra_spec("sl2+gl2")
        assert parse_algebra_spec("sl(2)") is make_sl(2)

    @pytest.mark.parametrize("text", ["so3", "sl", "sl2+", "gl(x)"])
    def test_parse_invalid(self, text):
        """Test unknown specs raise ValueError."""
        with pytest.raises(ValueError):
            parse_algebra_spec(text)

    def test_mixing_algebras_fails(self, sl2):
        """Test elements of different algebras do not combine."""
        with pytest.raises(AlgebraMismatchError):
            sl2.element("e") + make_sl(3).element("H[1]")


class TestInvariantForms:
    """Test invariant bilinear forms."""

    def test_sl2_trace_form(self, sl2):
        """Test tr(ef)=1 and tr(hh)=2."""
        alpha = matrix_trace_form(sl2)
        assert alpha(sl2.element("e"), sl2.element("f")) == 1
        assert alpha(sl2.element("h"), sl2.element("h")) == 2
        assert alpha(sl2.element("e"), sl2.element("e")) == 0

    def test_gl2_forms_on_identity(self, gl2):
        """Test tr(I I) = 2 and tr(I) tr(I) = 4."""
        identity = gl2.element("I")
        assert matrix_trace_form(gl2)(identity, identity) == 2
        assert trace_product_form(gl2)(identity, identity) == 4

    def test_forms_are_invariant(self, gl2):
        """Test both gl(2) forms pass the invariance sweep."""
        assert matrix_trace_form(gl2).invariance_violations() == []
        assert trace_product_form(gl2).invariance_violations() == []

    def test_weighted_form_with_parameters(self):
        """Test weights may be parameter polynomials."""
        algebra = parse_algebra_spec("sl2+sl2")
        a2 = ParamPoly.parameter("a2")
        alpha = trace_form(algebra, [1, a2])
        assert alpha(algebra.element("h'"), algebra.element("h'")) == a2 * 2

    def test_weight_count_checked(self, sl2):
        """Test one weight per simple summand is required."""
        with pytest.raises(ValueError, match="weights"):
            trace_form(sl2, [1, 2])

    def test_abelian_gram_symmetry_checked(self):
        """Test a non-symmetric abelian gram is refused."""
        with pytest.raises(ValueError, match="symmetric"):
            trace_form(make_abelian(2), abelian_gram=[[1, 2], [3, 1]])

    def test_killing_determinant_nonzero(self, sl2):
        """Test the trace form on sl(2) is non-degenerate."""
        assert matrix_trace_form(sl2).determinant() != 0


class TestDescribe:
    """Test describe function."""

    def test_sl2_description(self, sl2):
        """Test the JSON-ready description of sl(2)."""
        doc = describe(sl2)
        assert doc["name"] == "sl(2)"
        assert doc["basis"] == ["e", "f", "h"]
        assert doc["cartan_elements"] == ["h"]
        assert doc["local_cocycle_dimension"] == 1
        assert {"i": 0, "j": 1, "k": 2, "value": "1"} in doc["structure_constants"]

    @pytest.mark.parametrize(
        ("text", "expected"), [("sl2", 1), ("gl2", 2), ("abelian(2)", 3), ("gl2+gl3+sl2", 6)]
    )
    def test_local_cocycle_dimension(self, text, expected):
        """Test M + m(m+1)/2."""
        assert expected_local_cocycle_dimension(parse_algebra_spec(text)) == expected
