"""Three-point algebra on the sphere: functions with poles only at +a, -a and infinity.

Basis A_2k = (z - a)^k (z + a)^k = w^k and A_2k+1 = z w^k with w = z^2 - a^2.
"""

from collections.abc import Mapping

from sympy.polys.domains import QQ
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyElement, ring

from app.coefficients import ParamPoly
from app.exceptions import BasisExpressionError
from app.families.base import BasisTerms, FunctionFamily
from app.series import AHAT, LaurentSeries, PointLabel

PARAMETERS = ("a2",)

_ZA_RING, _Z, _A2 = ring("z,a2", QQ, lex)
_W = _Z**2 - _A2


def _to_ring(value: ParamPoly) -> PolyElement:
    return _ZA_RING.from_dict({(0, i): c for (i, _, _), c in value.poly.items()})


def _from_ring(value: PolyElement) -> ParamPoly:
    return ParamPoly.from_monomials({(i, 0, 0): c for (_, i), c in value.items()}, PARAMETERS)


class ThreePointFamily(FunctionFamily):
    """Genus zero with in-points +a, -a and out-point infinity."""

    pairing_points = ((PointLabel.PLUS_A, 1), (PointLabel.MINUS_A, 1))
    cross_check_points = ((PointLabel.INFINITY, -1),)
    shift_bound = 2
    degeneration: Mapping[str, int] = {"a2": 0}

    @property
    def name(self) -> str:
        return "threepoint"

    @property
    def parameters(self) -> tuple[str, ...]:
        return PARAMETERS

    @property
    def a2(self) -> ParamPoly:
        return ParamPoly.parameter("a2", PARAMETERS)

    def basis_product(self, n: int, m: int) -> BasisTerms:
        if n % 2 == 0 or m % 2 == 0:
            return {n + m: self.constant(1)}
        return {n + m: self.constant(1), n + m - 2: self.a2}

    def basis_derivative(self, n: int) -> BasisTerms:
        k, odd = divmod(n, 2)
        if not odd:
            return {n - 1: self.constant(n)} if k else {}
        out = {n - 1: self.constant(n)}
        if k:
            out[n - 3] = self.a2 * (2 * k)
        return out

    def basis_pairing(self, n: int, m: int) -> ParamPoly:
        if (n - m) % 2:
            return self.constant(0)
        value = self.constant(-n if m == -n else 0)
        if n % 2 and m == 2 - n:
            value = value + self.a2 * (1 - n)
        return value

    def oracle_multiply(self, f: Mapping[int, ParamPoly], g: Mapping[int, ParamPoly]) -> BasisTerms:
        p, a = _as_rational_function(f)
        q, b = _as_rational_function(g)
        return _re_express(p * q, a + b)

    def _local_coordinates(self, point: PointLabel) -> tuple[LaurentSeries, LaurentSeries]:
        """z and w as series in the local coordinate t at ``point``."""
        if point is PointLabel.PLUS_A:
            return LaurentSeries.exact({0: AHAT, 1: 1}), LaurentSeries.exact({1: AHAT * 2, 2: 1})
        if point is PointLabel.MINUS_A:
            return LaurentSeries.exact({0: -AHAT, 1: 1}), LaurentSeries.exact({1: -AHAT * 2, 2: 1})
        # t = 1/z
        return LaurentSeries.exact({-1: 1}), LaurentSeries.exact({-2: 1, 0: -AHAT**2})

    def expand_basis(self, n: int, point: PointLabel, order: int) -> LaurentSeries:
        self.check_point(point)
        z, w = self._local_coordinates(point)
        k, odd = divmod(n, 2)
        power = w.pow(k, order + 2) if k < 0 else w.pow(k)
        return (z * power if odd else power).truncate(order)

    def valuation(self, n: int, point: PointLabel) -> int:
        self.check_point(point)
        if point is PointLabel.INFINITY:
            return -n
        return n // 2


def _as_rational_function(terms: Mapping[int, ParamPoly]) -> tuple[PolyElement, int]:
    """Write sum c_n A_n as p(z) / w^N with a polynomial numerator."""
    depth = max([-(n // 2) for n in terms] + [0])
    numerator = _ZA_RING.zero
    for n, c in terms.items():
        k, odd = divmod(n, 2)
        numerator += _to_ring(c) * _Z**odd * _W ** (k + depth)
    return numerator, depth


def _re_express(numerator: PolyElement, depth: int) -> BasisTerms:
    """Coordinates of numerator / w^depth via repeated division by w."""
    out: BasisTerms = {}
    j = 0
    while numerator:
        quotient, remainder = numerator.div(_W)
        if any(z_exp > 1 for z_exp, _ in remainder):
            raise BasisExpressionError(f"Remainder {remainder} is not linear in z")
        constant = _ZA_RING.from_dict({m: c for m, c in remainder.items() if m[0] == 0})
        linear = _ZA_RING.from_dict({(0, m[1]): c for m, c in remainder.items() if m[0] == 1})
        for degree, part in ((2 * (j - depth), constant), (2 * (j - depth) + 1, linear)):
            if part:
                out[degree] = _from_ring(part)
        numerator = quotient
        j += 1
    return out
