"""Current algebras g (x) A with bracket [x (x) f, y (x) g] = [x, y] (x) fg."""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from itertools import product

from app.coefficients import ParamPoly, Scalar, render_combination
from app.exceptions import AlgebraMismatchError
from app.families import FunctionFamily
from app.finite_lie import FiniteLieAlgebra, LieElement, make_sl
from app.functions import FnElement

logger = logging.getLogger(__name__)

Key = tuple[int, int]  # (lie basis index, degree)

SL2_KINDS = ("e", "f", "h")


@dataclass(frozen=True, eq=False)
class CurrentElement:
    """Finite sum of c_{i,n} x_i (x) A_n."""

    algebra: FiniteLieAlgebra
    family: FunctionFamily
    coeffs: Mapping[Key, ParamPoly] = field(default_factory=dict)

    def __post_init__(self) -> None:
        cleaned = {key: self.family.coefficient(c) for key, c in self.coeffs.items()}
        object.__setattr__(self, "coeffs", {key: c for key, c in cleaned.items() if c})

    @classmethod
    def zero(cls, algebra: FiniteLieAlgebra, family: FunctionFamily) -> CurrentElement:
        return cls(algebra, family, {})

    @classmethod
    def generator(
        cls,
        algebra: FiniteLieAlgebra,
        family: FunctionFamily,
        label: str,
        degree: int,
        coeff: ParamPoly | Scalar = 1,
    ) -> CurrentElement:
        return cls(algebra, family, {(algebra.index(label), degree): ParamPoly.coerce(coeff)})

    def check_compatible(self, other: CurrentElement) -> None:
        if other.algebra is not self.algebra or other.family != self.family:
            raise AlgebraMismatchError(
                f"Current algebra elements over {self.algebra.name}/{self.family.name} and "
                f"{other.algebra.name}/{other.family.name} do not combine"
            )

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: CurrentElement) -> CurrentElement:
        self.check_compatible(other)
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            out[key] = out[key] + c if key in out else c
        return CurrentElement(self.algebra, self.family, out)

    def __neg__(self) -> CurrentElement:
        return CurrentElement(self.algebra, self.family, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other: CurrentElement) -> CurrentElement:
        return self + (-other)

    def scale(self, factor: ParamPoly | Scalar) -> CurrentElement:
        return CurrentElement(
            self.algebra, self.family, {k: c * factor for k, c in self.coeffs.items()}
        )

    def substitute(self, assignment: Mapping[str, Scalar]) -> CurrentElement:
        return CurrentElement(
            self.algebra,
            self.family,
            {k: c.substitute(assignment) if c.parameters else c for k, c in self.coeffs.items()},
        )

    def component(self, degree: int) -> LieElement:
        """The part in g (x) A_degree, as an element of g."""
        return LieElement(
            self.algebra, {i: c for (i, n), c in self.coeffs.items() if n == degree}
        )

    def sorted_terms(self) -> list[tuple[Key, ParamPoly]]:
        """Canonical order: degree descending, then basis index ascending."""
        return sorted(self.coeffs.items(), key=lambda item: (-item[0][1], item[0][0]))

    def labelled_terms(self) -> list[tuple[str, ParamPoly]]:
        labels = self.algebra.labels
        return [(f"{labels[i]}({n})", c) for (i, n), c in self.sorted_terms()]

    def render(self) -> str:
        return render_combination(self.labelled_terms())

    def __str__(self) -> str:
        return self.render()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CurrentElement):
            return NotImplemented
        return (
            other.algebra is self.algebra
            and other.family == self.family
            and dict(self.coeffs) == dict(other.coeffs)
        )

    def __hash__(self) -> int:
        return hash((id(self.algebra), self.family.name, frozenset(self.coeffs.items())))


@dataclass(frozen=True, eq=False)
class CurrentAlgebra:
    """The current algebra g (x) A for a finite Lie algebra and a function family."""

    algebra: FiniteLieAlgebra
    family: FunctionFamily

    def generator(self, label: str, degree: int, coeff: ParamPoly | Scalar = 1) -> CurrentElement:
        return CurrentElement.generator(self.algebra, self.family, label, degree, coeff)

    def zero(self) -> CurrentElement:
        return CurrentElement.zero(self.algebra, self.family)

    def basis(self, degrees: Iterable[int]) -> list[CurrentElement]:
        """Homogeneous basis elements x_i (x) A_n, ordered by degree then index."""
        return [
            CurrentElement(self.algebra, self.family, {(i, n): ParamPoly.constant(1)})
            for n in degrees
            for i in range(self.algebra.dim)
        ]

    def bracket(self, u: CurrentElement, v: CurrentElement) -> CurrentElement:
        return current_bracket(u, v)


def current_bracket(u: CurrentElement, v: CurrentElement) -> CurrentElement:
    """Bilinear extension of [x (x) f, y (x) g] = [x, y] (x) fg."""
    u.check_compatible(v)
    algebra, family = u.algebra, u.family
    out: dict[Key, ParamPoly] = {}
    for ((i, n), a), ((j, m), b) in product(u.coeffs.items(), v.coeffs.items()):
        constants = algebra.bracket_basis(i, j)
        if not constants:
            continue
        ab = a * b
        for h, d in family.basis_product(n, m).items():
            abd = ab * d
            for k, c in constants.items():
                term = abd * c
                out[(k, h)] = out[(k, h)] + term if (k, h) in out else term
    return CurrentElement(algebra, family, out)


def degree_support(u: CurrentElement) -> set[int]:
    return {n for (_, n) in u.coeffs}


def current_from_fn(algebra: FiniteLieAlgebra, label: str, f: FnElement) -> CurrentElement:
    """x (x) f for a basis element x and an arbitrary function f."""
    i = algebra.index(label)
    return CurrentElement(algebra, f.family, {(i, n): c for n, c in f.coeffs.items()})


def tensor(x: LieElement, f: FnElement) -> CurrentElement:
    """x (x) f for arbitrary x in g and f in A."""
    return CurrentElement(
        x.algebra,
        f.family,
        {(i, n): a * c for i, a in x.coeffs.items() for n, c in f.coeffs.items()},
    )


def sl2_generator(kind: str, n: int, family: FunctionFamily) -> CurrentElement:
    """e_n, f_n or h_n: the sl(2) generator tensored with A_n."""
    if kind not in SL2_KINDS:
        raise ValueError(f"Unknown sl(2) generator '{kind}'. Available: {', '.join(SL2_KINDS)}")
    return CurrentElement.generator(make_sl(2), family, kind, n)
