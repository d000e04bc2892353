"""Truncated Laurent series in a local coordinate with exact coefficients.

Coefficients live in the rational function field ``QQ(ahat, e1, e2)`` where
``ahat`` is a square root of the parameter ``a2``.  A series knows its
coefficients for exponents below ``precision``; everything at or above is
unknown.  ``precision=None`` marks an exact Laurent polynomial.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any

from sympy.polys.domains import QQ
from sympy.polys.fields import FracElement
from sympy.polys.fields import field as fraction_field

from app.coefficients import ParamPoly, to_qq
from app.exceptions import BasisExpressionError, SeriesPrecisionError

logger = logging.getLogger(__name__)

FIELD, AHAT, E1, E2 = fraction_field("ahat,e1,e2", QQ)


class PointLabel(str, Enum):
    """Marked points of the supported surfaces."""

    ZERO = "0"
    INFINITY = "inf"
    PLUS_A = "+a"
    MINUS_A = "-a"
    ORIGIN = "0bar"
    HALF = "half"


def field_constant(value: int | Fraction) -> FracElement:
    return FIELD.ground_new(to_qq(value))


def to_field(value: ParamPoly | int | Fraction) -> FracElement:
    """Embed a parameter polynomial, sending a2 to ahat^2."""
    if not isinstance(value, ParamPoly):
        return field_constant(value)
    data = {(2 * i, j, k): c for (i, j, k), c in value.poly.items()}
    return FIELD.new(FIELD.ring.from_dict(data))


def from_field(value: FracElement, parameters: tuple[str, ...]) -> ParamPoly:
    """Inverse of ``to_field`` on elements that are polynomials in a2, e1, e2."""
    numer, denom = value.numer, value.denom
    if not denom.is_ground:
        raise BasisExpressionError(f"Residue {value} does not clear to a polynomial")
    scale = denom.LC
    data = {}
    for (p, j, k), c in numer.items():
        if p % 2:
            raise BasisExpressionError(f"Residue {value} has an odd power of ahat")
        data[(p // 2, j, k)] = c / scale
    return ParamPoly.from_monomials(data, parameters)


def _min_precision(*bounds: int | None) -> int | None:
    known = [b for b in bounds if b is not None]
    return min(known) if known else None


@dataclass(frozen=True)
class LaurentSeries:
    """Sum of c_e t^e for e < precision."""

    coeffs: Mapping[int, FracElement] = field(default_factory=dict)
    precision: int | None = None

    def __post_init__(self) -> None:
        cleaned = {
            e: c
            for e, c in self.coeffs.items()
            if c and (self.precision is None or e < self.precision)
        }
        object.__setattr__(self, "coeffs", cleaned)

    @classmethod
    def exact(cls, coeffs: Mapping[int, Any]) -> LaurentSeries:
        return cls({e: _as_field(c) for e, c in coeffs.items()}, None)

    @classmethod
    def monomial(cls, exponent: int, coeff: Any = 1) -> LaurentSeries:
        return cls.exact({exponent: coeff})

    @classmethod
    def one(cls) -> LaurentSeries:
        return cls.monomial(0)

    def is_exact(self) -> bool:
        return self.precision is None

    def valuation(self) -> int | None:
        """Lowest known non-zero exponent; ``None`` for the exact zero series."""
        if self.coeffs:
            return min(self.coeffs)
        return self.precision

    def coefficient(self, exponent: int) -> FracElement:
        if self.precision is not None and exponent >= self.precision:
            raise SeriesPrecisionError(
                f"Coefficient of t^{exponent} requested, series known below t^{self.precision}"
            )
        return self.coeffs.get(exponent, FIELD.zero)

    def residue(self) -> FracElement:
        return self.coefficient(-1)

    def truncate(self, precision: int) -> LaurentSeries:
        return LaurentSeries(self.coeffs, _min_precision(self.precision, precision))

    def __add__(self, other: LaurentSeries) -> LaurentSeries:
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out[e] + c if e in out else c
        return LaurentSeries(out, _min_precision(self.precision, other.precision))

    def __neg__(self) -> LaurentSeries:
        return LaurentSeries({e: -c for e, c in self.coeffs.items()}, self.precision)

    def __sub__(self, other: LaurentSeries) -> LaurentSeries:
        return self + (-other)

    def scale(self, factor: Any) -> LaurentSeries:
        f = _as_field(factor)
        return LaurentSeries({e: c * f for e, c in self.coeffs.items()}, self.precision)

    def __mul__(self, other: LaurentSeries) -> LaurentSeries:
        v1, v2 = self.valuation(), other.valuation()
        if v1 is None or v2 is None:
            return LaurentSeries()
        precision = _min_precision(
            None if self.precision is None else self.precision + v2,
            None if other.precision is None else other.precision + v1,
        )
        out: dict[int, FracElement] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                if precision is not None and e >= precision:
                    continue
                term = c1 * c2
                out[e] = out[e] + term if e in out else term
        return LaurentSeries(out, precision)

    def derivative(self) -> LaurentSeries:
        out = {e - 1: c * e for e, c in self.coeffs.items() if e}
        return LaurentSeries(out, None if self.precision is None else self.precision - 1)

    def inverse(self, precision: int | None = None) -> LaurentSeries:
        """Multiplicative inverse, known below ``precision`` (required for exact input)."""
        v = self.valuation()
        if v is None or v not in self.coeffs:
            raise SeriesPrecisionError("Leading coefficient of the series is unknown")
        target = None if self.precision is None else self.precision - 2 * v
        target = _min_precision(target, precision)
        if target is None:
            raise ValueError("Inverting an exact series needs an explicit precision")
        lead_inverse = 1 / self.coeffs[v]
        found: list[FracElement] = []
        for j in range(max(target + v, 0)):
            if j == 0:
                found.append(lead_inverse)
                continue
            acc = FIELD.zero
            for i in range(1, j + 1):
                a = self.coeffs.get(v + i)
                if a is not None:
                    acc = acc + a * found[j - i]
            found.append(-acc * lead_inverse)
        return LaurentSeries({j - v: g for j, g in enumerate(found)}, target)

    def pow(self, exponent: int, precision: int | None = None) -> LaurentSeries:
        if exponent < 0:
            return self.pow(-exponent).inverse(precision)
        result = LaurentSeries.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result if precision is None else result.truncate(precision)

    def __str__(self) -> str:
        terms = [f"({c})*t^{e}" for e, c in sorted(self.coeffs.items())]
        tail = "" if self.precision is None else f" + O(t^{self.precision})"
        return (" + ".join(terms) or "0") + tail


def _as_field(value: Any) -> FracElement:
    if isinstance(value, FracElement):
        return value
    return to_field(value)


def form_residue(f: LaurentSeries, g: LaurentSeries) -> FracElement:
    """Residue of f dg: the coefficient of t^-1 in f * dg/dt.

    Raises:
        SeriesPrecisionError: If the truncation orders do not reach t^-1.
    """
    return (f * g.derivative()).residue()
