"""Two-point algebra on the torus: functions with poles only at 0 and at the half period w1.

With u = P - e1 the basis is A_2k = u^k and A_2k+1 = P' u^(k-1) / 2, which has
order -n at the origin.  The closed forms below follow from the Weierstrass
equation P'^2 = 4u^3 + 12 e1 u^2 + 4 D u, D = (e1 - e2)(2 e1 + e2).
"""

import logging
from collections.abc import Mapping
from fractions import Fraction
from functools import lru_cache

from app.coefficients import ParamPoly
from app.elliptic import (
    TORUS_PARAMETERS,
    EllipticNormalForm,
    weierstrass_constants,
    weierstrass_series,
)
from app.exceptions import SeriesPrecisionError
from app.families.base import BasisTerms, FunctionFamily
from app.series import E1, LaurentSeries, PointLabel

logger = logging.getLogger(__name__)

ProductTerms = tuple[tuple[int, ParamPoly], ...]


def _product_terms(n: int, m: int) -> ProductTerms:
    one = ParamPoly.constant(1, TORUS_PARAMETERS)
    if n % 2 == 0 or m % 2 == 0:
        return ((n + m, one),)
    c = weierstrass_constants()
    return ((n + m, one), (n + m - 2, c["e1"] * 3), (n + m - 4, c["D"]))


@lru_cache(maxsize=4096)
def basis_product_cached(n: int, m: int) -> ProductTerms:
    """Memoized torus structure constants; identical to the uncached rule."""
    return _product_terms(n, m)


class TorusFamily(FunctionFamily):
    """Genus one with in-point 0 and out-point w1 (the half period with P = e1)."""

    pairing_points = ((PointLabel.ORIGIN, -1),)
    cross_check_points = ((PointLabel.HALF, 1),)
    shift_bound = 4
    degeneration: Mapping[str, int] = {"e1": 0, "e2": 0}
    # A_n degenerates to (-1/z)^n, so d/dz becomes -z^2 d/dz on z^n
    degenerate_derivative_step = 1

    def __init__(self, use_cache: bool = True):
        """
        Initialize the torus family.

        Args:
            use_cache: Serve basis products from the shared memo table.
        """
        self.use_cache = use_cache

    @property
    def name(self) -> str:
        return "torus"

    @property
    def parameters(self) -> tuple[str, ...]:
        return TORUS_PARAMETERS

    def basis_product(self, n: int, m: int) -> BasisTerms:
        terms = basis_product_cached(n, m) if self.use_cache else _product_terms(n, m)
        return dict(terms)

    def basis_derivative(self, n: int) -> BasisTerms:
        k, odd = divmod(n, 2)
        if not odd:
            return {n + 1: self.constant(n)} if k else {}
        return EllipticNormalForm.from_basis(n).derivative().to_basis()

    def basis_pairing(self, n: int, m: int) -> ParamPoly:
        if (n - m) % 2:
            return self.constant(0)
        value = self.constant(-n if m == -n else 0)
        if n % 2:
            c = weierstrass_constants()
            if m == 2 - n:
                value = value + c["e1"] * (3 * (1 - n))
            if m == 4 - n:
                value = value + c["D"] * (2 - n)
        return value

    def oracle_multiply(self, f: Mapping[int, ParamPoly], g: Mapping[int, ParamPoly]) -> BasisTerms:
        product = EllipticNormalForm.from_terms(f) * EllipticNormalForm.from_terms(g)
        return product.to_basis()

    def expand_basis(self, n: int, point: PointLabel, order: int) -> LaurentSeries:
        self.check_point(point)
        relative = order - self.valuation(n, point) + 2
        if point is PointLabel.ORIGIN:
            series_precision = max(relative - 2, 0)
        else:
            series_precision = max(relative + 2, 4)
        p = weierstrass_series(point, series_precision)
        u = p - LaurentSeries.exact({0: E1})
        k, odd = divmod(n, 2)
        if odd:
            result = p.derivative().scale(Fraction(1, 2)) * u.pow(k - 1)
        else:
            result = u.pow(k)
        if result.precision is not None and result.precision < order:
            raise SeriesPrecisionError(
                f"Expansion of A_{n} at {point.value} reached t^{result.precision}, needed t^{order}"
            )
        return result.truncate(order)

    def valuation(self, n: int, point: PointLabel) -> int:
        self.check_point(point)
        if point is PointLabel.ORIGIN:
            return -n
        return n if n % 2 == 0 else n - 2
