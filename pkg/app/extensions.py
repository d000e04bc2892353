"""Central extensions of current algebras by geometric 2-cocycles.

The geometric cocycle is psi(x (x) f, y (x) g) = alpha(x, y) * omega(f, g) with an
invariant symmetric form alpha on g and the function pairing omega (the residue
of f dg summed over the in-points).  The extended algebra adds one central
generator ``t`` with [a^, b^] = [a, b]^ + psi(a, b) t.
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Literal

from sympy import symbols
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from app.coefficients import PARAMETERS, ParamPoly, Scalar, render_combination
from app.current import CurrentElement, Key, current_bracket, sl2_generator
from app.exceptions import AlgebraMismatchError, WitnessNotFoundError
from app.families import ClassicalFamily, FunctionFamily
from app.finite_lie import (
    BilinearForm,
    FiniteLieAlgebra,
    cartan_elements,
    make_gl,
    make_sl,
    matrix_trace_form,
    trace_form,
    trace_product_form,
)
from app.functions import FnElement, Window, degenerate, fn_residue_pairing_oracle

logger = logging.getLogger(__name__)

PairingSource = Literal["table", "oracle"]

SL2_RELATIONS = {"ef": ("e", "f"), "he": ("h", "e"), "hf": ("h", "f")}


@lru_cache(maxsize=4096)
def oracle_basis_pairing(family: FunctionFamily, n: int, m: int) -> ParamPoly:
    """omega(A_n, A_m) from the residues of local expansions."""
    return fn_residue_pairing_oracle(FnElement.basis(family, n), FnElement.basis(family, m))


class Cocycle(ABC):
    """
    Bilinear antisymmetric map on a current algebra given on homogeneous basis pairs.

    Subclasses provide ``basis_value`` for pairs (x_i (x) A_n, x_j (x) A_m);
    evaluation on arbitrary elements is its bilinear extension.
    """

    algebra: FiniteLieAlgebra
    family: FunctionFamily

    @abstractmethod
    def basis_value(self, i: int, n: int, j: int, m: int) -> ParamPoly:
        """
        Value on the pair (x_i (x) A_n, x_j (x) A_m).

        Args:
            i: Lie basis index of the left argument
            n: Degree of the left argument
            j: Lie basis index of the right argument
            m: Degree of the right argument

        Returns:
            Polynomial in the family parameters
        """

    def lie_pairs(self) -> Iterable[tuple[int, int]]:
        """Lie index pairs on which the cocycle can be non-zero."""
        return product(range(self.algebra.dim), repeat=2)

    def check(self, u: CurrentElement) -> None:
        if u.algebra is not self.algebra or u.family != self.family:
            raise AlgebraMismatchError(
                f"Cocycle on {self.algebra.name}/{self.family.name} cannot evaluate "
                f"elements of {u.algebra.name}/{u.family.name}"
            )

    def __call__(self, u: CurrentElement, v: CurrentElement) -> ParamPoly:
        return cocycle_eval(self, u, v)

    def __add__(self, other: Cocycle) -> CocycleSum:
        return CocycleSum(self.algebra, self.family, ((1, self), (1, other)))

    def __sub__(self, other: Cocycle) -> CocycleSum:
        return CocycleSum(self.algebra, self.family, ((1, self), (-1, other)))

    def scaled(self, factor: ParamPoly | Scalar) -> CocycleSum:
        return CocycleSum(self.algebra, self.family, ((factor, self),))


@dataclass(frozen=True, eq=False)
class CurrentCocycle(Cocycle):
    """psi_alpha(x (x) f, y (x) g) = alpha(x, y) omega(f, g)."""

    form: BilinearForm
    family: FunctionFamily
    source: PairingSource = "table"
    perturbations: Mapping[tuple[int, int], ParamPoly] = field(default_factory=dict)
    name: str = "psi"

    @property
    def algebra(self) -> FiniteLieAlgebra:  # type: ignore[override]
        return self.form.algebra

    def pairing(self, n: int, m: int) -> ParamPoly:
        if self.source == "oracle":
            value = oracle_basis_pairing(self.family, n, m)
        else:
            value = self.family.basis_pairing(n, m)
        delta = self.perturbations.get((n, m))
        return value + delta if delta is not None else value

    def basis_value(self, i: int, n: int, j: int, m: int) -> ParamPoly:
        alpha = self.form.value(i, j)
        if not alpha:
            return self.family.constant(0)
        return alpha * self.pairing(n, m)

    def lie_pairs(self) -> Iterable[tuple[int, int]]:
        return sorted(self.form.gram)

    def with_source(self, source: PairingSource) -> CurrentCocycle:
        return CurrentCocycle(self.form, self.family, source, self.perturbations, self.name)


@dataclass(frozen=True, eq=False)
class CocycleSum(Cocycle):
    """Linear combination sum c_k psi_k of cocycles on the same current algebra."""

    algebra: FiniteLieAlgebra
    family: FunctionFamily
    terms: tuple[tuple[ParamPoly | Scalar, Cocycle], ...]

    def __post_init__(self) -> None:
        for _, psi in self.terms:
            if psi.algebra is not self.algebra or psi.family != self.family:
                raise AlgebraMismatchError("Cocycles on different current algebras do not combine")

    def basis_value(self, i: int, n: int, j: int, m: int) -> ParamPoly:
        total = self.family.constant(0)
        for coeff, psi in self.terms:
            total = total + psi.basis_value(i, n, j, m) * coeff
        return total


@dataclass(frozen=True, eq=False)
class LinearForm:
    """Finite-support functional phi on the current algebra."""

    algebra: FiniteLieAlgebra
    family: FunctionFamily
    values: Mapping[Key, ParamPoly] = field(default_factory=dict)

    def __call__(self, u: CurrentElement) -> ParamPoly:
        total = self.family.constant(0)
        for key, c in u.coeffs.items():
            value = self.values.get(key)
            if value is not None:
                total = total + c * value
        return total


@dataclass(frozen=True, eq=False)
class Coboundary(Cocycle):
    """(u, v) -> phi([u, v]) for a linear form phi."""

    phi: LinearForm

    @property
    def algebra(self) -> FiniteLieAlgebra:  # type: ignore[override]
        return self.phi.algebra

    @property
    def family(self) -> FunctionFamily:  # type: ignore[override]
        return self.phi.family

    def basis_value(self, i: int, n: int, j: int, m: int) -> ParamPoly:
        total = self.family.constant(0)
        constants = self.algebra.bracket_basis(i, j)
        if not constants or not self.phi.values:
            return total
        for h, d in self.family.basis_product(n, m).items():
            for k, c in constants.items():
                value = self.phi.values.get((k, h))
                if value is not None:
                    total = total + value * d * c
        return total


def coboundary(phi: LinearForm) -> Coboundary:
    return Coboundary(phi)


def cocycle_eval(psi: Cocycle, u: CurrentElement, v: CurrentElement) -> ParamPoly:
    """Bilinear evaluation psi(u, v)."""
    psi.check(u)
    psi.check(v)
    total = psi.family.constant(0)
    for ((i, n), a), ((j, m), b) in product(u.coeffs.items(), v.coeffs.items()):
        value = psi.basis_value(i, n, j, m)
        if value:
            total = total + a * b * value
    return total


# -- extended algebra -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ExtendedElement:
    """u + c t with u in the current algebra and t the central generator."""

    current: CurrentElement
    central: ParamPoly = field(default_factory=ParamPoly.zero)

    @classmethod
    def central_generator(
        cls, algebra: FiniteLieAlgebra, family: FunctionFamily, coeff: ParamPoly | Scalar = 1
    ) -> ExtendedElement:
        return cls(CurrentElement.zero(algebra, family), ParamPoly.coerce(coeff))

    @classmethod
    def lift(cls, u: CurrentElement) -> ExtendedElement:
        return cls(u, ParamPoly.zero())

    def __add__(self, other: ExtendedElement) -> ExtendedElement:
        return ExtendedElement(self.current + other.current, self.central + other.central)

    def __neg__(self) -> ExtendedElement:
        return ExtendedElement(-self.current, -self.central)

    def __sub__(self, other: ExtendedElement) -> ExtendedElement:
        return self + (-other)

    def scale(self, factor: ParamPoly | Scalar) -> ExtendedElement:
        return ExtendedElement(self.current.scale(factor), self.central * factor)

    def substitute(self, assignment: Mapping[str, Scalar]) -> ExtendedElement:
        central = self.central.substitute(assignment) if self.central.parameters else self.central
        return ExtendedElement(self.current.substitute(assignment), central)

    def is_zero(self) -> bool:
        return self.current.is_zero() and self.central.is_zero()

    def degree_support(self) -> set[int]:
        """Degrees of the current part, plus 0 for a non-zero central part."""
        degrees = {n for (_, n) in self.current.coeffs}
        return degrees | {0} if self.central else degrees

    def render(self) -> str:
        return render_combination([*self.current.labelled_terms(), ("t", self.central)])

    def __str__(self) -> str:
        return self.render()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExtendedElement):
            return NotImplemented
        return self.current == other.current and self.central == other.central

    def __hash__(self) -> int:
        return hash((self.current, self.central))


def extended_bracket(psi: Cocycle, x: ExtendedElement, y: ExtendedElement) -> ExtendedElement:
    """[a^, b^] = [a, b]^ + psi(a, b) t; the central generator drops out."""
    return ExtendedElement(
        current_bracket(x.current, y.current), cocycle_eval(psi, x.current, y.current)
    )


# -- constructions ----------------------------------------------------------------


def standard_cocycle(
    algebra: FiniteLieAlgebra, family: FunctionFamily, source: PairingSource = "table"
) -> CurrentCocycle:
    """alpha(A, B) = tr(AB) in the defining representation."""
    return CurrentCocycle(matrix_trace_form(algebra), family, source, name="psi1")


def cocycle_from_forms(
    algebra: FiniteLieAlgebra,
    family: FunctionFamily,
    weights: Sequence[ParamPoly | Scalar] | None = None,
    abelian_gram: Sequence[Sequence[ParamPoly | Scalar]] | None = None,
    source: PairingSource = "table",
) -> CurrentCocycle:
    """Geometric cocycle for a combination of summand trace forms and a form on g0."""
    return CurrentCocycle(trace_form(algebra, weights, abelian_gram), family, source)


def gl_cocycle_pair(n: int, family: FunctionFamily) -> tuple[CurrentCocycle, CurrentCocycle]:
    """psi1 with alpha = tr(AB) and psi2 with alpha = tr(A) tr(B) on gl(n)."""
    algebra = make_gl(n)
    psi1 = CurrentCocycle(matrix_trace_form(algebra), family, name="psi1")
    psi2 = CurrentCocycle(trace_product_form(algebra), family, name="psi2")
    return psi1, psi2


def geometric_cocycle_basis(
    algebra: FiniteLieAlgebra, family: FunctionFamily
) -> list[CurrentCocycle]:
    """One cocycle per simple summand and per elementary symmetric form on g0."""
    simple = algebra.simple_summands
    m = sum(s.length for s in algebra.abelian_summands)
    cocycles = []
    for position, summand in enumerate(simple):
        weights = [1 if k == position else 0 for k in range(len(simple))]
        form = trace_form(algebra, weights, None)
        cocycles.append(CurrentCocycle(form, family, name=f"psi[{summand.name}]"))
    for a in range(m):
        for b in range(a, m):
            gram = [[1 if {r, c} == {a, b} else 0 for c in range(m)] for r in range(m)]
            form = trace_form(algebra, [0] * len(simple), gram)
            cocycles.append(CurrentCocycle(form, family, name=f"psi[g0:{a + 1},{b + 1}]"))
    return cocycles


def corruption_site(window: Window) -> tuple[int, int]:
    """Off-diagonal entry the mutation harness perturbs: (2, 3) when it fits the window."""
    if 2 in window and 3 in window:
        return 2, 3
    if len(window) < 2:
        raise ValueError(f"The mutation harness needs at least two degrees, got window {window}")
    return window.hi - 1, window.hi


def corrupt(psi: CurrentCocycle, n: int = 2, m: int = 3, delta: ParamPoly | Scalar = 1) -> CurrentCocycle:
    """Mutation harness: perturb omega(A_n, A_m) by delta and omega(A_m, A_n) by -delta."""
    if n == m:
        raise ValueError("Corrupting a diagonal entry would cancel out; choose n != m")
    d = ParamPoly.coerce(delta)
    perturbations = dict(psi.perturbations)
    for key, value in (((n, m), d), ((m, n), -d)):
        perturbations[key] = perturbations[key] + value if key in perturbations else value
    logger.info(f"Corrupting {psi.name} at ({n}, {m}) by {d}")
    return CurrentCocycle(psi.form, psi.family, psi.source, perturbations, f"{psi.name}*")


# -- locality and witnesses -------------------------------------------------------


@dataclass(frozen=True)
class LocalityBounds:
    """Observed band T2 <= n + m <= T1 of non-zero values on a window."""

    t1: int | None
    t2: int | None
    window: Window

    @property
    def is_local(self) -> bool:
        return self.t1 is not None


def locality_bounds(psi: Cocycle, window: Window) -> LocalityBounds:
    sums = set()
    pairs = list(psi.lie_pairs())
    for n, m in product(window.degrees, repeat=2):
        if n + m in sums:
            continue
        if any(psi.basis_value(i, n, j, m) for i, j in pairs):
            sums.add(n + m)
    if not sums:
        return LocalityBounds(None, None, window)
    return LocalityBounds(max(sums), min(sums), window)


@dataclass(frozen=True)
class Witness:
    """psi(x (x) A_n, x (x) A_-n) != 0 with [x, x] = 0: psi is not a coboundary."""

    label: str
    degree: int
    value: ParamPoly
    left: CurrentElement
    right: CurrentElement


def nontriviality_witness(
    psi: Cocycle, window: Window | None = None, start: int = 1
) -> Witness:
    """
    Smallest certificate that psi is not a coboundary.

    Every coboundary vanishes on (x (x) A_n, x (x) A_-n) because [x, x] = 0,
    so a non-zero value there proves non-triviality.

    Args:
        psi: Cocycle to certify
        window: Degrees searched are start..window.hi (default 1..8)
        start: First degree tried

    Returns:
        The first witness, Cartan-type basis elements first, n ascending

    Raises:
        WitnessNotFoundError: If no witness exists in twice the window
    """
    hi = window.hi if window is not None else 8
    candidates = cartan_elements(psi.algebra)
    for bound, widened in ((hi, False), (2 * max(hi, 1), True)):
        if widened:
            logger.warning(f"No witness for {psi.algebra.name} up to degree {hi}; widening to {bound}")
        for n in range(start, bound + 1):
            for x in candidates:
                value = psi.basis_value(x, n, x, -n)
                if value:
                    label = psi.algebra.labels[x]
                    return Witness(
                        label,
                        n,
                        value,
                        CurrentElement.generator(psi.algebra, psi.family, label, n),
                        CurrentElement.generator(psi.algebra, psi.family, label, -n),
                    )
    raise WitnessNotFoundError(f"No non-triviality witness for {psi.algebra.name} up to degree {2 * hi}")


# -- equivalence modulo coboundaries ------------------------------------------------


def _domain_for(entries: Iterable[ParamPoly]):
    used = sorted({p for e in entries for p in e.parameters}, key=PARAMETERS.index)
    if not used:
        return QQ, {}
    gens = symbols(" ".join(used))
    gens = gens if isinstance(gens, tuple) else (gens,)
    return QQ.frac_field(*gens), dict(zip(used, gens, strict=True))


def _exact_rank(rows: list[dict[int, ParamPoly]], ncols: int) -> int:
    domain, _ = _domain_for(c for row in rows for c in row.values())
    data = {
        r: {c: domain.from_sympy(v.as_expr()) for c, v in row.items() if v}
        for r, row in enumerate(rows)
    }
    data = {r: row for r, row in data.items() if row}
    if not data:
        return 0
    matrix = DomainMatrix(data, (len(rows), ncols), domain)
    return matrix.rank()


def _window_system(
    cocycles: Sequence[Cocycle], window: Window
) -> tuple[list[dict[int, ParamPoly]], list[dict[int, ParamPoly]], int]:
    """Rows over basis pairs: cocycle columns and coboundary columns phi(k, h)."""
    algebra, family = cocycles[0].algebra, cocycles[0].family
    basis = [(i, n) for n in window.degrees for i in range(algebra.dim)]
    phi_columns: dict[Key, int] = {}
    psi_rows, phi_rows = [], []
    for a, (i, n) in enumerate(basis):
        for j, m in basis[a + 1 :]:
            psi_row = {}
            for c, psi in enumerate(cocycles):
                value = psi.basis_value(i, n, j, m)
                if value:
                    psi_row[c] = value
            phi_row: dict[int, ParamPoly] = {}
            constants = algebra.bracket_basis(i, j)
            if constants:
                for h, d in family.basis_product(n, m).items():
                    for k, c in constants.items():
                        column = phi_columns.setdefault((k, h), len(phi_columns))
                        value = d * c
                        phi_row[column] = phi_row[column] + value if column in phi_row else value
            psi_rows.append(psi_row)
            phi_rows.append(phi_row)
    return psi_rows, phi_rows, len(phi_columns)


@dataclass(frozen=True)
class IndependenceCertificate:
    """Ranks deciding whether sum c_k psi_k = delta(phi) forces c = 0 on a window."""

    names: tuple[str, ...]
    window: Window
    coboundary_rank: int
    combined_rank: int

    @property
    def independent(self) -> bool:
        return self.combined_rank - self.coboundary_rank == len(self.names)


def independence_modulo_coboundaries(
    cocycles: Sequence[Cocycle], window: Window
) -> IndependenceCertificate:
    """Decide linear independence of cocycles modulo window coboundaries exactly."""
    if not cocycles:
        raise ValueError("Need at least one cocycle")
    for psi in cocycles[1:]:
        if psi.algebra is not cocycles[0].algebra or psi.family != cocycles[0].family:
            raise AlgebraMismatchError("Cocycles live on different current algebras")
    psi_rows, phi_rows, phi_count = _window_system(cocycles, window)
    r = len(cocycles)
    combined = [
        {**psi_row, **{r + c: v for c, v in phi_row.items()}}
        for psi_row, phi_row in zip(psi_rows, phi_rows, strict=True)
    ]
    coboundary_rank = _exact_rank(phi_rows, max(phi_count, 1))
    combined_rank = _exact_rank(combined, r + max(phi_count, 1))
    names = tuple(getattr(psi, "name", type(psi).__name__) for psi in cocycles)
    logger.info(
        f"Independence on {window}: rank(B) = {coboundary_rank}, rank([psi|B]) = {combined_rank}"
    )
    return IndependenceCertificate(names, window, coboundary_rank, combined_rank)


def cocycles_equivalent(psi_a: Cocycle, psi_b: Cocycle, window: Window) -> bool:
    """True iff psi_a - psi_b = delta(phi) is solvable on the window."""
    certificate = independence_modulo_coboundaries([psi_a - psi_b], window)
    return not certificate.independent


# -- sl(2) relations ----------------------------------------------------------------


def sl2_relations(
    kind: str, n: int, m: int, family: FunctionFamily, extended: bool = False
) -> str:
    """The relation line ``[e(n), f(m)] = ...`` for kind in ef, he, hf."""
    if kind not in SL2_RELATIONS:
        raise ValueError(
            f"Unknown sl(2) relation '{kind}'. Available: {', '.join(SL2_RELATIONS)}"
        )
    left, right = SL2_RELATIONS[kind]
    u, v = sl2_generator(left, n, family), sl2_generator(right, m, family)
    if extended:
        psi = standard_cocycle(make_sl(2), family)
        result = extended_bracket(psi, ExtendedElement.lift(u), ExtendedElement.lift(v)).render()
    else:
        result = current_bracket(u, v).render()
    return f"[{left}({n}), {right}({m})] = {result}"


def degenerate_element(
    x: FnElement | CurrentElement | ExtendedElement,
) -> FnElement | CurrentElement | ExtendedElement:
    """The classical counterpart: degenerate parameters set to zero, A_n read as z^n."""
    if isinstance(x, FnElement):
        return degenerate(x)
    if isinstance(x, ExtendedElement):
        central = x.central
        if central.parameters:
            central = central.substitute(x.current.family.degeneration)
        return ExtendedElement(degenerate_element(x.current), central.with_parameters(()))
    family = x.family
    classical = ClassicalFamily()
    out = {}
    for key, c in x.coeffs.items():
        value = c.substitute(family.degeneration) if c.parameters else c
        out[key] = value.with_parameters(())
    return CurrentElement(x.algebra, classical, out)
