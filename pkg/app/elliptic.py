"""Weierstrass elliptic function arithmetic for the two-point torus family.

Functions are kept in the normal form ``p(u) + P'(z) q(u)`` with ``u = P - e1``
and Laurent polynomials ``p``, ``q``.  Every occurrence of ``P'^2`` is reduced
with the Weierstrass equation written in ``u`` (``e3 = -e1 - e2``):

    P'^2 = 4 u (u + e1 - e2) (u + 2 e1 + e2) = 4u^3 + 12 e1 u^2 + 4 D u,

where ``D = (e1 - e2)(2 e1 + e2)``.  The module also solves the local Laurent
expansions of ``P`` at the origin and at the half period with ``P(w1) = e1``.
"""

from __future__ import annotations

import logging
import threading
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from sympy.polys.fields import FracElement

from app.coefficients import ParamPoly
from app.exceptions import SeriesPrecisionError
from app.series import E1, E2, FIELD, LaurentSeries, PointLabel

logger = logging.getLogger(__name__)

TORUS_PARAMETERS = ("e1", "e2")

LaurentPoly = Mapping[int, ParamPoly]


def _e(name: str) -> ParamPoly:
    return ParamPoly.parameter(name, TORUS_PARAMETERS)


def weierstrass_constants() -> dict[str, ParamPoly]:
    """e1, e2, e3, g2, g3 and D as polynomials in e1, e2."""
    e1, e2 = _e("e1"), _e("e2")
    e3 = -e1 - e2
    return {
        "e1": e1,
        "e2": e2,
        "e3": e3,
        "g2": (e1 * e1 + e1 * e2 + e2 * e2) * 4,
        "g3": e1 * e2 * e3 * 4,
        "D": (e1 - e2) * (e1 * 2 + e2),
    }


def _lp_add(a: LaurentPoly, b: LaurentPoly) -> dict[int, ParamPoly]:
    out = dict(a)
    for k, c in b.items():
        out[k] = out[k] + c if k in out else c
    return {k: c for k, c in out.items() if c}


def _lp_mul(a: LaurentPoly, b: LaurentPoly) -> dict[int, ParamPoly]:
    out: dict[int, ParamPoly] = {}
    for i, x in a.items():
        for j, y in b.items():
            term = x * y
            out[i + j] = out[i + j] + term if i + j in out else term
    return {k: c for k, c in out.items() if c}


def _lp_diff(a: LaurentPoly) -> dict[int, ParamPoly]:
    return {k - 1: c * k for k, c in a.items() if k}


@lru_cache(maxsize=1)
def _square_of_derivative() -> dict[int, ParamPoly]:
    c = weierstrass_constants()
    return {3: ParamPoly.constant(4, TORUS_PARAMETERS), 2: c["e1"] * 12, 1: c["D"] * 4}


@lru_cache(maxsize=1)
def _second_derivative() -> dict[int, ParamPoly]:
    """P'' = 6P^2 - g2/2 written in u."""
    c = weierstrass_constants()
    e1 = c["e1"]
    p_squared = _lp_mul({1: ParamPoly.one(TORUS_PARAMETERS), 0: e1}, {1: ParamPoly.one(), 0: e1})
    return _lp_add(
        {k: v * 6 for k, v in p_squared.items()},
        {0: -c["g2"] * ParamPoly.constant(Fraction(1, 2))},
    )


@dataclass(frozen=True)
class EllipticNormalForm:
    """Canonical representative p(u) + P' q(u) of a torus function."""

    p: LaurentPoly = field(default_factory=dict)
    q: LaurentPoly = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", {k: c for k, c in self.p.items() if c})
        object.__setattr__(self, "q", {k: c for k, c in self.q.items() if c})

    @classmethod
    def from_basis(cls, n: int, coeff: ParamPoly | int = 1) -> EllipticNormalForm:
        """A_2k = u^k and A_2k+1 = P' u^(k-1) / 2."""
        c = ParamPoly.coerce(coeff, TORUS_PARAMETERS)
        if n % 2 == 0:
            return cls({n // 2: c}, {})
        return cls({}, {(n - 1) // 2 - 1: c * Fraction(1, 2)})

    @classmethod
    def from_terms(cls, terms: Mapping[int, ParamPoly]) -> EllipticNormalForm:
        result = cls()
        for n, c in terms.items():
            result = result + cls.from_basis(n, c)
        return result

    def to_basis(self) -> dict[int, ParamPoly]:
        """Coordinates in the basis A_n; inverse of ``from_terms``."""
        out = {2 * k: c for k, c in self.p.items()}
        for k, c in self.q.items():
            out[2 * k + 3] = c * 2
        return out

    def is_zero(self) -> bool:
        return not self.p and not self.q

    def __add__(self, other: EllipticNormalForm) -> EllipticNormalForm:
        return EllipticNormalForm(_lp_add(self.p, other.p), _lp_add(self.q, other.q))

    def __mul__(self, other: EllipticNormalForm) -> EllipticNormalForm:
        even = _lp_add(
            _lp_mul(self.p, other.p),
            _lp_mul(_square_of_derivative(), _lp_mul(self.q, other.q)),
        )
        odd = _lp_add(_lp_mul(self.p, other.q), _lp_mul(self.q, other.p))
        return EllipticNormalForm(even, odd)

    def derivative(self) -> EllipticNormalForm:
        """d/dz: (p + P'q)' = P'' q + P'^2 q_u + P' p_u."""
        even = _lp_add(
            _lp_mul(_second_derivative(), self.q),
            _lp_mul(_square_of_derivative(), _lp_diff(self.q)),
        )
        return EllipticNormalForm(even, _lp_diff(self.p))


# -- local expansions of P ------------------------------------------------------

_E3 = -E1 - E2
_SOLVED: dict[PointLabel, list[FracElement]] = {PointLabel.ORIGIN: [], PointLabel.HALF: []}
_LOCK = threading.Lock()


def _series_from(point: PointLabel, coeffs: list[FracElement]) -> LaurentSeries:
    k = len(coeffs)
    if point is PointLabel.ORIGIN:
        data = {-2: FIELD.one}
        data.update({2 * i: c for i, c in enumerate(coeffs)})
        return LaurentSeries(data, 2 * k - 1)
    data = {0: E1}
    data.update({2 * (i + 1): c for i, c in enumerate(coeffs)})
    return LaurentSeries(data, 2 * k + 1)


def weierstrass_residual(series: LaurentSeries) -> LaurentSeries:
    """P'^2 - 4(P - e1)(P - e2)(P - e3) for a candidate series P."""
    derivative = series.derivative()
    product = (
        (series - LaurentSeries.exact({0: E1}))
        * (series - LaurentSeries.exact({0: E2}))
        * (series - LaurentSeries.exact({0: _E3}))
    )
    return derivative * derivative - product.scale(4)


def _residual_at(point: PointLabel, known: list[FracElement], trial: FracElement) -> FracElement:
    k = len(known) + 1
    target = 2 * k - 6 if point is PointLabel.ORIGIN else 2 * k
    return weierstrass_residual(_series_from(point, [*known, trial])).coefficient(target)


def _next_coefficient(point: PointLabel, known: list[FracElement]) -> FracElement:
    r0 = _residual_at(point, known, FIELD.zero)
    r1 = _residual_at(point, known, FIELD.one)
    if point is PointLabel.HALF and not known:
        # leading term: quadratic q b^2 + l b with the trivial root b = 0 excluded
        if r0:
            raise ArithmeticError("Residual at the half period does not vanish at t^2")
        r_minus = _residual_at(point, known, -FIELD.one)
        quadratic = (r1 + r_minus) / 2
        linear = (r1 - r_minus) / 2
        return -linear / quadratic
    slope = r1 - r0
    if not slope:
        raise ArithmeticError(f"Weierstrass recursion is degenerate at step {len(known) + 1}")
    return -r0 / slope


def _coefficients(point: PointLabel, count: int) -> list[FracElement]:
    with _LOCK:
        solved = _SOLVED[point]
        while len(solved) < count:
            value = _next_coefficient(point, solved)
            logger.debug(f"Solved coefficient {len(solved) + 1} of P at {point.value}: {value}")
            solved.append(value)
        return list(solved[:count])


def weierstrass_series(point: PointLabel, precision: int) -> LaurentSeries:
    """Laurent expansion of P at ``point``, known below t^precision.

    At the origin P = t^-2 + sum c_k t^(2k-2); at the half period
    P = e1 + sum b_k t^(2k).  The coefficients are solved order by order from
    the differential equation.
    """
    if point is PointLabel.ORIGIN:
        count = max((precision + 2) // 2, 1)
    elif point is PointLabel.HALF:
        count = max(precision // 2, 1)
    else:
        raise ValueError(f"No Weierstrass expansion at {point.value}. Use 0bar or half")
    series = _series_from(point, _coefficients(point, count))
    if series.precision is not None and series.precision < precision:
        raise SeriesPrecisionError(f"Solved P series stops at t^{series.precision}")
    return series.truncate(precision)


def field_weierstrass_constants() -> dict[str, FracElement]:
    """g2, g3 and D as field elements, for comparisons with solved series."""
    return {
        "g2": (E1 * E1 + E1 * E2 + E2 * E2) * 4,
        "g3": E1 * E2 * _E3 * 4,
        "D": (E1 - E2) * (E1 * 2 + E2),
    }
