"""Exact scalar arithmetic: rationals and polynomials in the formal parameters.

Every structure constant handled by the package is a polynomial with rational
coefficients in at most the three parameters ``a2`` (the square of the
three-point parameter ``a``), ``e1`` and ``e2`` (the torus half-period values,
with ``e3 = -e1 - e2`` eliminated).  ``ParamPoly`` wraps an element of the
sparse sympy ring ``QQ[a2, e1, e2]`` and remembers the parameter set of the
family it belongs to.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Mapping
from fractions import Fraction
from functools import reduce

from sympy import Expr
from sympy.parsing.sympy_parser import (
    convert_xor,
    parse_expr,
    standard_transformations,
)
from sympy.polys.domains import QQ
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyElement, ring

from app.exceptions import ParameterMismatchError

Rational = Fraction
Scalar = int | Fraction

PARAMETERS: tuple[str, ...] = ("a2", "e1", "e2")

_RING, _A2, _E1, _E2 = ring(",".join(PARAMETERS), QQ, lex)
_GENERATORS = {"a2": _A2, "e1": _E1, "e2": _E2}
_INDEX = {name: i for i, name in enumerate(PARAMETERS)}
_ALLOWED_TEXT = re.compile(r"^[\sa0-9e/*^+\-()]*$")


def to_qq(value: Scalar) -> object:
    """Convert an int or Fraction to a sympy QQ element."""
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def from_qq(value: object) -> Fraction:
    """Convert a sympy QQ element back to a Fraction."""
    return Fraction(int(value.numerator), int(value.denominator))  # type: ignore[attr-defined]


def _canonical_parameters(parameters: Iterable[str]) -> tuple[str, ...]:
    names = set(parameters)
    unknown = names - set(PARAMETERS)
    if unknown:
        raise ValueError(f"Unknown parameters: {', '.join(sorted(unknown))}")
    return tuple(name for name in PARAMETERS if name in names)


class ParamPoly:
    """Immutable polynomial over QQ in a fixed set of named parameters."""

    __slots__ = ("_poly", "_parameters", "_hash")

    def __init__(self, poly: PolyElement, parameters: Iterable[str] = ()):
        self._parameters = _canonical_parameters(parameters)
        used = {PARAMETERS[i] for monom in poly.keys() for i, e in enumerate(monom) if e}
        if not used <= set(self._parameters):
            extra = ", ".join(sorted(used - set(self._parameters)))
            raise ParameterMismatchError(
                f"Polynomial uses {extra} outside parameter set {self._parameters}"
            )
        self._poly = poly
        self._hash: int | None = None

    @classmethod
    def _raw(cls, poly: PolyElement, parameters: tuple[str, ...]) -> ParamPoly:
        obj = object.__new__(cls)
        obj._poly = poly
        obj._parameters = parameters
        obj._hash = None
        return obj

    # construction -----------------------------------------------------------

    @classmethod
    def zero(cls, parameters: Iterable[str] = ()) -> ParamPoly:
        return cls(_RING.zero, parameters)

    @classmethod
    def one(cls, parameters: Iterable[str] = ()) -> ParamPoly:
        return cls(_RING.one, parameters)

    @classmethod
    def constant(cls, value: Scalar, parameters: Iterable[str] = ()) -> ParamPoly:
        return cls(_RING.ground_new(to_qq(value)), parameters)

    @classmethod
    def parameter(cls, name: str, parameters: Iterable[str] | None = None) -> ParamPoly:
        """The polynomial consisting of a single parameter."""
        if name not in _GENERATORS:
            raise ValueError(f"Unknown parameter '{name}'. Available: {', '.join(PARAMETERS)}")
        return cls(_GENERATORS[name], parameters if parameters is not None else (name,))

    @classmethod
    def from_terms(
        cls, terms: Mapping[tuple[int, ...], Scalar], parameters: Iterable[str]
    ) -> ParamPoly:
        """Build from exponent vectors over ``parameters`` (in canonical order)."""
        params = _canonical_parameters(parameters)
        data = {}
        for exponents, coeff in terms.items():
            if len(exponents) != len(params):
                raise ValueError(
                    f"Exponent vector {exponents} does not match parameters {params}"
                )
            if coeff == 0:
                continue
            full = [0] * len(PARAMETERS)
            for name, e in zip(params, exponents, strict=True):
                if e < 0:
                    raise ValueError(f"Negative exponent {e} for {name}")
                full[_INDEX[name]] = e
            data[tuple(full)] = to_qq(coeff)
        return cls(_RING.from_dict(data), params)

    @classmethod
    def from_monomials(
        cls, data: Mapping[tuple[int, int, int], object], parameters: Iterable[str]
    ) -> ParamPoly:
        """Build from full (a2, e1, e2) exponent vectors with QQ coefficients."""
        return cls(_RING.from_dict({m: c for m, c in data.items() if c}), parameters)

    @classmethod
    def coerce(cls, value: ParamPoly | Scalar, parameters: Iterable[str] = ()) -> ParamPoly:
        if isinstance(value, ParamPoly):
            return value
        if isinstance(value, int | Fraction):
            return cls.constant(value, parameters)
        raise TypeError(f"Cannot interpret {value!r} as a parameter polynomial")

    @classmethod
    def parse(cls, text: str, parameters: Iterable[str] | None = None) -> ParamPoly:
        """Parse the canonical text form, e.g. ``2*e1^2 - e1*e2 - e2^2``."""
        if not _ALLOWED_TEXT.match(text) or not text.strip():
            raise ValueError(f"Not a parameter polynomial: {text!r}")
        local = {str(symbol): symbol for symbol in _RING.symbols}
        try:
            expr = parse_expr(
                text,
                local_dict=local,
                transformations=standard_transformations + (convert_xor,),
                evaluate=True,
            )
            poly = _RING.from_expr(expr)
        except Exception as e:
            raise ValueError(f"Not a parameter polynomial: {text!r}") from e
        if parameters is None:
            parameters = {
                PARAMETERS[i] for monom in poly.keys() for i, exp in enumerate(monom) if exp
            }
        return cls(poly, parameters)

    # inspection -------------------------------------------------------------

    @property
    def parameters(self) -> tuple[str, ...]:
        return self._parameters

    @property
    def poly(self) -> PolyElement:
        """The underlying sympy ring element (shared, do not mutate)."""
        return self._poly

    def is_zero(self) -> bool:
        return not self._poly

    def is_constant(self) -> bool:
        return self._poly.is_ground

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return from_qq(self._poly.get(_RING.zero_monom, QQ.zero))

    def terms(self) -> list[tuple[dict[str, int], Fraction]]:
        """Monomials in canonical order (lex, a2 > e1 > e2, descending)."""
        result = []
        for monom in sorted(self._poly.keys(), reverse=True):
            exponents = {PARAMETERS[i]: e for i, e in enumerate(monom) if e}
            result.append((exponents, from_qq(self._poly[monom])))
        return result

    def as_expr(self) -> Expr:
        return self._poly.as_expr()

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self._poly:
            return -1
        return max(sum(monom) for monom in self._poly.keys())

    # arithmetic -------------------------------------------------------------

    def _join(self, other: ParamPoly) -> tuple[str, ...]:
        if self._parameters == other._parameters or not other._parameters:
            return self._parameters
        if not self._parameters:
            return other._parameters
        raise ParameterMismatchError(
            f"Parameter sets differ: {self._parameters} vs {other._parameters}"
        )

    def _other(self, other: object) -> ParamPoly | None:
        if isinstance(other, ParamPoly):
            return other
        if isinstance(other, int | Fraction):
            return ParamPoly.constant(other)
        return None

    def __add__(self, other: object) -> ParamPoly:
        rhs = self._other(other)
        if rhs is None:
            return NotImplemented
        return ParamPoly._raw(self._poly + rhs._poly, self._join(rhs))

    __radd__ = __add__

    def __sub__(self, other: object) -> ParamPoly:
        rhs = self._other(other)
        if rhs is None:
            return NotImplemented
        return ParamPoly._raw(self._poly - rhs._poly, self._join(rhs))

    def __rsub__(self, other: object) -> ParamPoly:
        lhs = self._other(other)
        if lhs is None:
            return NotImplemented
        return lhs - self

    def __mul__(self, other: object) -> ParamPoly:
        rhs = self._other(other)
        if rhs is None:
            return NotImplemented
        return ParamPoly._raw(self._poly * rhs._poly, self._join(rhs))

    __rmul__ = __mul__

    def __neg__(self) -> ParamPoly:
        return ParamPoly._raw(-self._poly, self._parameters)

    def __pow__(self, exponent: int) -> ParamPoly:
        if exponent < 0:
            raise ValueError("Negative powers are not polynomial")
        return ParamPoly._raw(self._poly**exponent, self._parameters)

    def with_parameters(self, parameters: Iterable[str]) -> ParamPoly:
        """The same polynomial declared over a (compatible) parameter set."""
        return ParamPoly(self._poly, parameters)

    def substitute(self, assignment: Mapping[str, Scalar]) -> ParamPoly:
        """Evaluate the assigned parameters; the others stay formal."""
        unknown = set(assignment) - set(self._parameters)
        if unknown:
            raise ParameterMismatchError(
                f"Cannot substitute {', '.join(sorted(unknown))}: "
                f"not in parameter set {self._parameters}"
            )
        if not assignment:
            return self
        poly = self._poly
        for name, value in assignment.items():
            poly = poly.subs(_GENERATORS[name], to_qq(value))
        return ParamPoly._raw(poly, self._parameters)

    # comparison and rendering -----------------------------------------------

    def __eq__(self, other: object) -> bool:
        rhs = self._other(other)
        if rhs is None:
            return NotImplemented
        return self._poly == rhs._poly

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(sorted(self._poly.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._poly)

    def render(self) -> str:
        """Canonical text: sorted monomials, explicit ``*`` and ``^``."""
        terms = self.terms()
        if not terms:
            return "0"
        pieces: list[str] = []
        for index, (exponents, coeff) in enumerate(terms):
            body = _render_term(exponents, abs(coeff))
            if index == 0:
                pieces.append(f"-{body}" if coeff < 0 else body)
            else:
                pieces.append(f" - {body}" if coeff < 0 else f" + {body}")
        return "".join(pieces)

    def is_monomial(self) -> bool:
        return len(self._poly) == 1

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"ParamPoly({self.render()!r}, parameters={self._parameters})"


def _render_term(exponents: Mapping[str, int], magnitude: Fraction) -> str:
    factors = [
        name if e == 1 else f"{name}^{e}" for name, e in exponents.items()
    ]
    if not factors:
        return render_rational(magnitude)
    if magnitude == 1:
        return "*".join(factors)
    return "*".join([render_rational(magnitude), *factors])


def render_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def render_combination(terms: Iterable[tuple[str, ParamPoly]]) -> str:
    """Render sum c_i * label_i, e.g. ``h(2) + 3*e1*h(0) + (e1 - e2)*h(-2)``."""
    pieces: list[str] = []
    for label, coeff in terms:
        if coeff.is_zero():
            continue
        if coeff.is_monomial():
            ((exponents, value),) = coeff.terms()
            negative = value < 0
            magnitude = _render_term(exponents, abs(value))
            body = label if magnitude == "1" else f"{magnitude}*{label}"
        else:
            negative = False
            body = f"({coeff.render()})*{label}"
        if not pieces:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f" - {body}" if negative else f" + {body}")
    return "".join(pieces) or "0"


def poly_add(p: ParamPoly, q: ParamPoly) -> ParamPoly:
    return p + q


def poly_mul(p: ParamPoly, q: ParamPoly) -> ParamPoly:
    return p * q


def poly_substitute(p: ParamPoly, assignment: Mapping[str, Scalar]) -> ParamPoly:
    return p.substitute(assignment)


def poly_sum(polys: Iterable[ParamPoly], parameters: Iterable[str] = ()) -> ParamPoly:
    return reduce(lambda acc, p: acc + p, polys, ParamPoly.zero(parameters))


def parse_rational(text: str) -> Fraction:
    """Parse ``p``, ``-p`` or ``p/q`` exactly."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"Not an exact rational: {text!r}") from e
