"""Classical Laurent polynomials C[z, 1/z] on the sphere with points 0 and infinity."""

from collections.abc import Mapping

from sympy.polys.domains import QQ
from sympy.polys.rings import ring

from app.coefficients import ParamPoly, from_qq
from app.families.base import BasisTerms, FunctionFamily
from app.series import LaurentSeries, PointLabel

_Z_RING, _Z = ring("z", QQ)


class ClassicalFamily(FunctionFamily):
    """A_n = z^n; the honest grading with no parameters."""

    pairing_points = ((PointLabel.ZERO, 1),)
    cross_check_points = ((PointLabel.INFINITY, -1),)
    shift_bound = 0
    degeneration: Mapping[str, int] = {}

    @property
    def name(self) -> str:
        return "classical"

    @property
    def parameters(self) -> tuple[str, ...]:
        return ()

    def basis_product(self, n: int, m: int) -> BasisTerms:
        return {n + m: self.constant(1)}

    def basis_derivative(self, n: int) -> BasisTerms:
        return {n - 1: self.constant(n)} if n else {}

    def basis_pairing(self, n: int, m: int) -> ParamPoly:
        return self.constant(-n if m == -n else 0)

    def oracle_multiply(self, f: Mapping[int, ParamPoly], g: Mapping[int, ParamPoly]) -> BasisTerms:
        # p(z) / z^N with a common denominator for each factor
        def clear(terms: Mapping[int, ParamPoly]) -> tuple[object, int]:
            shift = max([-n for n in terms] + [0])
            numerator = _Z_RING.zero
            for n, c in terms.items():
                numerator += _Z ** (n + shift) * QQ(*_fraction(c))
            return numerator, shift

        p, a = clear(f)
        q, b = clear(g)
        product = p * q
        return {
            e - (a + b): self.constant(from_qq(c)) for (e,), c in product.items()
        }

    def expand_basis(self, n: int, point: PointLabel, order: int) -> LaurentSeries:
        self.check_point(point)
        exponent = n if point is PointLabel.ZERO else -n
        return LaurentSeries.monomial(exponent).truncate(order)

    def valuation(self, n: int, point: PointLabel) -> int:
        self.check_point(point)
        return n if point is PointLabel.ZERO else -n


def _fraction(value: ParamPoly) -> tuple[int, int]:
    c = value.constant_value()
    return c.numerator, c.denominator
