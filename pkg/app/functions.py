"""Elements of the function algebras and the operations on them.

An ``FnElement`` is a finite combination sum c_n A_n over one family.  Products,
derivatives and the cocycle pairing come in two flavours: the closed-form rules
of the family, and independent oracles (polynomial or normal-form arithmetic,
residues of local Laurent expansions) used to verify them.
"""

from __future__ import annotations

import logging
import re
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field
from itertools import product

from sympy.polys.fields import FracElement

from app.coefficients import ParamPoly, Scalar, render_combination
from app.exceptions import AlgebraMismatchError
from app.families import ClassicalFamily, FunctionFamily
from app.series import FIELD, LaurentSeries, PointLabel, form_residue, from_field, to_field

logger = logging.getLogger(__name__)

_WINDOW = re.compile(r"^\s*(-?\d+)\s*:\s*(-?\d+)\s*$")


@dataclass(frozen=True)
class Window:
    """Closed range of degrees lo..hi."""

    lo: int
    hi: int

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"Empty window {self.lo}:{self.hi}")

    @classmethod
    def parse(cls, text: str) -> Window:
        """Parse ``LO:HI``, e.g. ``-4:4``."""
        match = _WINDOW.match(text)
        if not match:
            raise ValueError(f"Window must look like LO:HI, got {text!r}")
        return cls(int(match.group(1)), int(match.group(2)))

    @classmethod
    def symmetric(cls, radius: int) -> Window:
        return cls(-radius, radius)

    @property
    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def __contains__(self, degree: object) -> bool:
        return isinstance(degree, int) and self.lo <= degree <= self.hi

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def __str__(self) -> str:
        return f"{self.lo}:{self.hi}"


@dataclass(frozen=True, eq=False)
class FnElement:
    """Finite combination sum c_n A_n in one function algebra family."""

    family: FunctionFamily
    coeffs: Mapping[int, ParamPoly] = field(default_factory=dict)

    def __post_init__(self) -> None:
        cleaned = {n: self.family.coefficient(c) for n, c in self.coeffs.items()}
        object.__setattr__(self, "coeffs", {n: c for n, c in cleaned.items() if c})

    @classmethod
    def basis(cls, family: FunctionFamily, n: int, coeff: ParamPoly | Scalar = 1) -> FnElement:
        return cls(family, {n: ParamPoly.coerce(coeff)})

    @classmethod
    def zero(cls, family: FunctionFamily) -> FnElement:
        return cls(family, {})

    @classmethod
    def one(cls, family: FunctionFamily) -> FnElement:
        return cls.basis(family, 0)

    def _check(self, other: FnElement) -> None:
        if other.family != self.family:
            raise AlgebraMismatchError(
                f"Functions of {self.family.name} and {other.family.name} do not combine"
            )

    @property
    def degrees(self) -> list[int]:
        return sorted(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: FnElement) -> FnElement:
        self._check(other)
        return FnElement(self.family, _add_terms(self.coeffs, other.coeffs))

    def __neg__(self) -> FnElement:
        return FnElement(self.family, {n: -c for n, c in self.coeffs.items()})

    def __sub__(self, other: FnElement) -> FnElement:
        return self + (-other)

    def scale(self, factor: ParamPoly | Scalar) -> FnElement:
        return FnElement(self.family, {n: c * factor for n, c in self.coeffs.items()})

    def __mul__(self, other: FnElement) -> FnElement:
        return fn_mul(self, other)

    def substitute(self, assignment: Mapping[str, Scalar]) -> FnElement:
        return FnElement(self.family, {n: c.substitute(assignment) for n, c in self.coeffs.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FnElement):
            return NotImplemented
        return self.family == other.family and dict(self.coeffs) == dict(other.coeffs)

    def __hash__(self) -> int:
        return hash((self.family.name, frozenset(self.coeffs.items())))

    def render(self) -> str:
        return render_combination(
            (f"A({n})", self.coeffs[n]) for n in sorted(self.coeffs, reverse=True)
        )

    def __str__(self) -> str:
        return self.render()


def _add_terms(a: Mapping[int, ParamPoly], b: Mapping[int, ParamPoly]) -> dict[int, ParamPoly]:
    out = dict(a)
    for n, c in b.items():
        out[n] = out[n] + c if n in out else c
    return out


def _bilinear(
    f: FnElement, g: FnElement, rule: Callable[[int, int], Mapping[int, ParamPoly]]
) -> dict[int, ParamPoly]:
    out: dict[int, ParamPoly] = {}
    for (n, a), (m, b) in product(f.coeffs.items(), g.coeffs.items()):
        ab = a * b
        for h, c in rule(n, m).items():
            out[h] = out[h] + ab * c if h in out else ab * c
    return out


def fn_mul(f: FnElement, g: FnElement) -> FnElement:
    """Product through the family's closed-form basis rule."""
    f._check(g)
    return FnElement(f.family, _bilinear(f, g, f.family.basis_product))


def fn_mul_oracle(f: FnElement, g: FnElement) -> FnElement:
    """Product through the family's independent arithmetic.

    Raises:
        BasisExpressionError: If the result cannot be re-expressed in the basis.
    """
    f._check(g)
    return FnElement(f.family, f.family.oracle_multiply(f.coeffs, g.coeffs))


def fn_derivative(f: FnElement) -> FnElement:
    out: dict[int, ParamPoly] = {}
    for n, a in f.coeffs.items():
        for h, c in f.family.basis_derivative(n).items():
            out[h] = out[h] + a * c if h in out else a * c
    return FnElement(f.family, out)


def fn_valuation(f: FnElement, point: PointLabel) -> int | None:
    """Lower bound for the order of f at ``point``; None for f = 0."""
    if f.is_zero():
        return None
    return min(f.family.valuation(n, point) for n in f.coeffs)


def pole_order(f: FnElement, point: PointLabel) -> int:
    valuation = fn_valuation(f, point)
    return 0 if valuation is None else max(-valuation, 0)


def fn_expand(f: FnElement, point: PointLabel | str, order: int | None = None) -> LaurentSeries:
    """
    Laurent expansion of f in the local coordinate at a marked point.

    Args:
        f: Function to expand
        point: Marked point of f's family
        order: Exponents below this are known; defaults to the pole order + 2

    Returns:
        Truncated series with coefficients in QQ(ahat, e1, e2)

    Raises:
        ValueError: If the point is not marked on the family
    """
    point = PointLabel(point)
    f.family.check_point(point)
    if order is None:
        order = pole_order(f, point) + 2
    total = LaurentSeries({}, order)
    for n, c in f.coeffs.items():
        total = total + f.family.expand_basis(n, point, order).scale(to_field(c))
    return total


def _residue_at(f: FnElement, g: FnElement, point: PointLabel) -> FracElement:
    order = max(pole_order(f, point), pole_order(g, point)) + 2
    return form_residue(fn_expand(f, point, order), fn_expand(g, point, order))


def _signed_residues(
    f: FnElement, g: FnElement, points: Iterable[tuple[PointLabel, int]]
) -> ParamPoly:
    total = FIELD.zero
    for point, sign in points:
        total = total + _residue_at(f, g, point) * sign
    return from_field(total, f.family.parameters)


def fn_residue_pairing_oracle(f: FnElement, g: FnElement) -> ParamPoly:
    """Sum of res(f dg) over the in-points, computed from local expansions.

    Raises:
        BasisExpressionError: If the residue sum is not a parameter polynomial.
    """
    f._check(g)
    if f.is_zero() or g.is_zero():
        return f.family.constant(0)
    return _signed_residues(f, g, f.family.pairing_points)


def fn_residue_cross_check(f: FnElement, g: FnElement) -> ParamPoly:
    """The same pairing computed at the out-points via the residue theorem."""
    f._check(g)
    if f.is_zero() or g.is_zero():
        return f.family.constant(0)
    return _signed_residues(f, g, f.family.cross_check_points)


def residue_sum_all_points(f: FnElement, g: FnElement) -> ParamPoly:
    """Sum of res(f dg) over every marked point; always zero."""
    f._check(g)
    if f.is_zero() or g.is_zero():
        return f.family.constant(0)
    return _signed_residues(f, g, [(p, 1) for p in f.family.points])


def fn_cocycle_pairing(f: FnElement, g: FnElement) -> ParamPoly:
    """Closed-form pairing from the family's table, extended bilinearly."""
    f._check(g)
    total = f.family.constant(0)
    for (n, a), (m, b) in product(f.coeffs.items(), g.coeffs.items()):
        value = f.family.basis_pairing(n, m)
        if value:
            total = total + a * b * value
    return total


def observed_shifts(family: FunctionFamily, window: Window) -> set[int]:
    """All (n + m) - h with A_h present in A_n * A_m for n, m in the window."""
    shifts = set()
    for n, m in product(window.degrees, repeat=2):
        shifts.update(n + m - h for h in family.basis_product(n, m))
    return shifts


def almost_grading_bounds(family: FunctionFamily, window: Window) -> tuple[int, int]:
    """Observed extremes (min shift, max shift) of the product degrees."""
    shifts = observed_shifts(family, window)
    return min(shifts), max(shifts)


def degenerate(f: FnElement) -> FnElement:
    """Specialize the family parameters to zero and read A_n as z^n."""
    classical = ClassicalFamily()
    out = {}
    for n, c in f.coeffs.items():
        value = c.substitute(f.family.degeneration) if c.parameters else c
        out[n] = value.with_parameters(())
    return FnElement(classical, out)
