"""Finite-dimensional Lie algebras given by rational structure constants.

Supports sl(n), gl(n), abelian algebras and direct sums of those (the
reductive algebras g = g0 + g1 + ... + gM with g0 abelian and the gi simple),
together with invariant symmetric bilinear forms built from trace forms of the
defining matrix representations.
"""

from __future__ import annotations

import logging
import re
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Any, Literal

from sympy import ImmutableMatrix, Matrix, Rational, zeros

from app.coefficients import ParamPoly, Scalar, render_rational
from app.exceptions import AlgebraMismatchError

logger = logging.getLogger(__name__)

SummandKind = Literal["abelian", "simple"]
StructureConstants = Mapping[tuple[int, int], Mapping[int, Fraction]]


@dataclass(frozen=True)
class Summand:
    """A contiguous block of the basis forming an abelian or simple ideal."""

    offset: int
    length: int
    kind: SummandKind
    name: str

    @property
    def indices(self) -> range:
        return range(self.offset, self.offset + self.length)


@dataclass(frozen=True)
class BasisRealization:
    """Matrix of a basis element in the defining representation of its factor."""

    factor: int
    matrix: ImmutableMatrix | None


@dataclass(frozen=True, eq=False)
class FiniteLieAlgebra:
    """Lie algebra with sparse rational structure constants c_ij^k."""

    name: str
    labels: tuple[str, ...]
    structure: StructureConstants
    summands: tuple[Summand, ...]
    realizations: tuple[BasisRealization, ...]
    _index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_index", {label: i for i, label in enumerate(self.labels)})
        self._validate()

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            available = ", ".join(self.labels)
            raise ValueError(
                f"Unknown basis element '{label}' in {self.name}. Available: {available}"
            ) from None

    def bracket_basis(self, i: int, j: int) -> Mapping[int, Fraction]:
        return self.structure.get((i, j), {})

    def summand_of(self, i: int) -> int:
        for position, summand in enumerate(self.summands):
            if i in summand.indices:
                return position
        raise IndexError(i)

    @property
    def abelian_summands(self) -> list[Summand]:
        return [s for s in self.summands if s.kind == "abelian"]

    @property
    def simple_summands(self) -> list[Summand]:
        return [s for s in self.summands if s.kind == "simple"]

    def is_diagonal(self, i: int) -> bool:
        """Cartan-type basis element: abstract abelian or a diagonal matrix."""
        realization = self.realizations[i]
        if realization.matrix is None:
            return True
        m = realization.matrix
        return all(m[r, c] == 0 for r in range(m.rows) for c in range(m.cols) if r != c)

    def element(self, label: str, coefficient: ParamPoly | Scalar = 1) -> LieElement:
        return LieElement.basis(self, self.index(label), coefficient)

    def _validate(self) -> None:
        dim = self.dim
        covered = sorted(i for s in self.summands for i in s.indices)
        if covered != list(range(dim)):
            raise ValueError(f"Summands of {self.name} do not partition the basis")
        if len(self.realizations) != dim:
            raise ValueError(f"{self.name}: one realization per basis element required")
        for (i, j), out in self.structure.items():
            if any(c == 0 for c in out.values()):
                raise ValueError(f"{self.name}: zero structure constant stored at {(i, j)}")
            if dict(self.bracket_basis(j, i)) != {k: -c for k, c in out.items()}:
                raise ValueError(f"{self.name}: structure constants not antisymmetric at {(i, j)}")
            if self.summand_of(i) != self.summand_of(j):
                raise ValueError(f"{self.name}: bracket across summands at {(i, j)}")
            if any(self.summand_of(k) != self.summand_of(i) for k in out):
                raise ValueError(f"{self.name}: bracket leaves its summand at {(i, j)}")
        violations = jacobi_violations(self)
        if violations:
            raise ValueError(f"{self.name}: Jacobi identity fails on {violations[:3]}")


def _bracket_vectors(
    algebra: FiniteLieAlgebra, x: Mapping[int, Fraction], y: Mapping[int, Fraction]
) -> dict[int, Fraction]:
    out: dict[int, Fraction] = {}
    for i, a in x.items():
        for j, b in y.items():
            for k, c in algebra.bracket_basis(i, j).items():
                out[k] = out.get(k, Fraction(0)) + a * b * c
    return {k: v for k, v in out.items() if v}


def jacobi_violations(algebra: FiniteLieAlgebra) -> list[tuple[int, int, int]]:
    """Exhaustive check of the Jacobi identity over all basis triples."""
    basis = [{i: Fraction(1)} for i in range(algebra.dim)]
    bad = []
    for i, j, k in product(range(algebra.dim), repeat=3):
        if not (i < j < k):
            continue
        total: dict[int, Fraction] = {}
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            inner = _bracket_vectors(algebra, basis[a], basis[b])
            for idx, v in _bracket_vectors(algebra, inner, basis[c]).items():
                total[idx] = total.get(idx, Fraction(0)) + v
        if any(total.values()):
            bad.append((i, j, k))
    return bad


@dataclass(frozen=True, eq=False)
class LieElement:
    """Element of a finite Lie algebra with parameter-polynomial coefficients."""

    algebra: FiniteLieAlgebra
    coeffs: Mapping[int, ParamPoly]

    @classmethod
    def basis(
        cls, algebra: FiniteLieAlgebra, index: int, coefficient: ParamPoly | Scalar = 1
    ) -> LieElement:
        coeff = ParamPoly.coerce(coefficient)
        return cls(algebra, {index: coeff} if coeff else {})

    @classmethod
    def zero(cls, algebra: FiniteLieAlgebra) -> LieElement:
        return cls(algebra, {})

    def _check(self, other: LieElement) -> None:
        if other.algebra is not self.algebra:
            raise AlgebraMismatchError(
                f"Elements of {self.algebra.name} and {other.algebra.name} do not combine"
            )

    def __add__(self, other: LieElement) -> LieElement:
        self._check(other)
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            out[i] = out[i] + c if i in out else c
        return LieElement(self.algebra, {i: c for i, c in out.items() if c})

    def __neg__(self) -> LieElement:
        return LieElement(self.algebra, {i: -c for i, c in self.coeffs.items()})

    def __sub__(self, other: LieElement) -> LieElement:
        return self + (-other)

    def scale(self, factor: ParamPoly | Scalar) -> LieElement:
        out = {i: c * factor for i, c in self.coeffs.items()}
        return LieElement(self.algebra, {i: c for i, c in out.items() if c})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LieElement):
            return NotImplemented
        return other.algebra is self.algebra and dict(self.coeffs) == dict(other.coeffs)

    def __hash__(self) -> int:
        return hash((id(self.algebra), frozenset(self.coeffs.items())))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = [f"({c})*{self.algebra.labels[i]}" for i, c in sorted(self.coeffs.items())]
        return " + ".join(parts)


def lie_bracket(x: LieElement, y: LieElement) -> LieElement:
    """Bilinear extension of the structure constants."""
    x._check(y)
    algebra = x.algebra
    out: dict[int, ParamPoly] = {}
    for i, a in x.coeffs.items():
        for j, b in y.coeffs.items():
            constants = algebra.bracket_basis(i, j)
            if not constants:
                continue
            ab = a * b
            for k, c in constants.items():
                term = ab * c
                out[k] = out[k] + term if k in out else term
    return LieElement(algebra, {k: v for k, v in out.items() if v})


@dataclass(frozen=True, eq=False)
class BilinearForm:
    """Symmetric invariant bilinear form given by its Gram matrix."""

    algebra: FiniteLieAlgebra
    gram: Mapping[tuple[int, int], ParamPoly]

    def __post_init__(self) -> None:
        for (i, j), v in self.gram.items():
            if self.gram.get((j, i), ParamPoly.zero()) != v:
                raise ValueError(f"Bilinear form is not symmetric at {(i, j)}")
        violations = self.invariance_violations()
        if violations:
            raise ValueError(f"Bilinear form is not invariant on {violations[:3]}")

    def value(self, i: int, j: int) -> ParamPoly:
        return self.gram.get((i, j), ParamPoly.zero())

    def __call__(self, x: LieElement, y: LieElement) -> ParamPoly:
        total = ParamPoly.zero()
        for i, a in x.coeffs.items():
            for j, b in y.coeffs.items():
                g = self.gram.get((i, j))
                if g is not None:
                    total = total + a * b * g
        return total

    def invariance_violations(self) -> list[tuple[int, int, int]]:
        """Basis triples with alpha([x_i,x_j],x_k) != alpha(x_i,[x_j,x_k])."""
        algebra = self.algebra
        bad = []
        for i, j, k in product(range(algebra.dim), repeat=3):
            lhs = ParamPoly.zero()
            for m, c in algebra.bracket_basis(i, j).items():
                lhs = lhs + self.value(m, k) * c
            rhs = ParamPoly.zero()
            for m, c in algebra.bracket_basis(j, k).items():
                rhs = rhs + self.value(i, m) * c
            if lhs != rhs:
                bad.append((i, j, k))
        return bad

    def matrix(self) -> Matrix:
        dim = self.algebra.dim
        return Matrix(dim, dim, lambda i, j: self.value(i, j).as_expr())

    def determinant(self) -> Any:
        """Exact determinant of the Gram matrix (a sympy expression)."""
        return self.matrix().det()

    def scale(self, factor: ParamPoly | Scalar) -> BilinearForm:
        gram = {k: v * factor for k, v in self.gram.items()}
        return BilinearForm(self.algebra, {k: v for k, v in gram.items() if v})

    def __add__(self, other: BilinearForm) -> BilinearForm:
        if other.algebra is not self.algebra:
            raise AlgebraMismatchError("Forms on different algebras do not combine")
        gram = dict(self.gram)
        for k, v in other.gram.items():
            gram[k] = gram[k] + v if k in gram else v
        return BilinearForm(self.algebra, {k: v for k, v in gram.items() if v})


# -- construction -------------------------------------------------------------


def _to_fraction(value: Any) -> Fraction:
    value = Rational(value)
    return Fraction(int(value.p), int(value.q))


def _elementary(n: int, i: int, j: int) -> Matrix:
    m = zeros(n, n)
    m[i, j] = 1
    return m


def _sl_basis(n: int, labels_style: Literal["sl2", "matrix"]) -> list[tuple[str, Matrix]]:
    basis: list[tuple[str, Matrix]] = []
    for i in range(n):
        for j in range(n):
            if i != j:
                basis.append((f"E[{i + 1},{j + 1}]", _elementary(n, i, j)))
    for i in range(n - 1):
        basis.append((f"H[{i + 1}]", _elementary(n, i, i) - _elementary(n, i + 1, i + 1)))
    if labels_style == "sl2":
        rename = {"E[1,2]": "e", "E[2,1]": "f", "H[1]": "h"}
        basis = [(rename[label], m) for label, m in basis]
    return basis


def _decompose(n: int, matrix: Matrix, with_scalar: bool) -> dict[int, Fraction]:
    """Coordinates of a matrix in the basis (I,) + E[i,j] (i != j) + H[i]."""
    coords: dict[int, Fraction] = {}
    offset = 1 if with_scalar else 0
    position = offset
    for i in range(n):
        for j in range(n):
            if i != j:
                if matrix[i, j] != 0:
                    coords[position] = _to_fraction(matrix[i, j])
                position += 1
    diagonal = [_to_fraction(matrix[i, i]) for i in range(n)]
    trace = sum(diagonal, Fraction(0))
    if with_scalar:
        scalar = trace / n
        if scalar:
            coords[0] = scalar
        diagonal = [d - scalar for d in diagonal]
    elif trace:
        raise ValueError("Matrix is not traceless")
    running = Fraction(0)
    for i in range(n - 1):
        running += diagonal[i]
        if running:
            coords[position] = running
        position += 1
    return coords


def _matrix_algebra(
    name: str, n: int, basis: list[tuple[str, Matrix]], with_scalar: bool, summands: tuple[Summand, ...]
) -> FiniteLieAlgebra:
    structure: dict[tuple[int, int], dict[int, Fraction]] = {}
    for (i, (_, a)), (j, (_, b)) in product(enumerate(basis), repeat=2):
        if i == j:
            continue
        coords = _decompose(n, a * b - b * a, with_scalar)
        if coords:
            structure[(i, j)] = coords
    realizations = tuple(BasisRealization(0, ImmutableMatrix(m)) for _, m in basis)
    return FiniteLieAlgebra(
        name=name,
        labels=tuple(label for label, _ in basis),
        structure=structure,
        summands=summands,
        realizations=realizations,
    )


@lru_cache(maxsize=None)
def make_sl(n: int) -> FiniteLieAlgebra:
    """sl(n) with basis E[i,j] (i != j) and H[i]; sl(2) uses e, f, h."""
    if n < 2:
        raise ValueError(f"sl(n) requires n >= 2, got {n}")
    basis = _sl_basis(n, "sl2" if n == 2 else "matrix")
    summands = (Summand(0, n * n - 1, "simple", f"sl({n})"),)
    return _matrix_algebra(f"sl({n})", n, basis, False, summands)


@lru_cache(maxsize=None)
def make_gl(n: int) -> FiniteLieAlgebra:
    """gl(n) = scalars + sl(n), ordered (I, sl(n) basis)."""
    if n < 1:
        raise ValueError(f"gl(n) requires n >= 1, got {n}")
    basis = [("I", Matrix.eye(n))]
    summands: tuple[Summand, ...] = (Summand(0, 1, "abelian", "s(1)" if n == 1 else f"s({n})"),)
    if n >= 2:
        basis += _sl_basis(n, "matrix")
        summands += (Summand(1, n * n - 1, "simple", f"sl({n})"),)
    return _matrix_algebra(f"gl({n})", n, basis, True, summands)


@lru_cache(maxsize=None)
def make_abelian(d: int) -> FiniteLieAlgebra:
    if d < 1:
        raise ValueError(f"abelian(d) requires d >= 1, got {d}")
    return FiniteLieAlgebra(
        name=f"abelian({d})",
        labels=tuple(f"X[{k + 1}]" for k in range(d)),
        structure={},
        summands=(Summand(0, d, "abelian", f"abelian({d})"),),
        realizations=tuple(BasisRealization(0, None) for _ in range(d)),
    )


@lru_cache(maxsize=None)
def direct_sum(*algebras: FiniteLieAlgebra) -> FiniteLieAlgebra:
    """Reductive direct sum; all abelian summands are merged into the leading block."""
    if not algebras:
        raise ValueError("direct_sum needs at least one algebra")
    order: list[tuple[int, int]] = []
    for a_pos, algebra in enumerate(algebras):
        for summand in algebra.abelian_summands:
            order.extend((a_pos, i) for i in summand.indices)
    abelian_length = len(order)
    simple_blocks: list[tuple[int, int, str]] = []
    for a_pos, algebra in enumerate(algebras):
        for summand in algebra.simple_summands:
            simple_blocks.append((len(order), summand.length, summand.name))
            order.extend((a_pos, i) for i in summand.indices)
    new_index = {key: position for position, key in enumerate(order)}

    seen: dict[str, int] = {}
    labels = []
    for a_pos, i in order:
        base = algebras[a_pos].labels[i]
        label = base
        while label in seen:
            label += "'"
        seen[label] = 1
        labels.append(label)

    structure: dict[tuple[int, int], dict[int, Fraction]] = {}
    for a_pos, algebra in enumerate(algebras):
        for (i, j), out in algebra.structure.items():
            structure[(new_index[(a_pos, i)], new_index[(a_pos, j)])] = {
                new_index[(a_pos, k)]: c for k, c in out.items()
            }

    factor_offsets = []
    offset = 0
    for algebra in algebras:
        factor_offsets.append(offset)
        offset += 1 + max((r.factor for r in algebra.realizations), default=0)
    realizations = tuple(
        BasisRealization(
            factor_offsets[a_pos] + algebras[a_pos].realizations[i].factor,
            algebras[a_pos].realizations[i].matrix,
        )
        for a_pos, i in order
    )

    summands: list[Summand] = []
    if abelian_length:
        summands.append(Summand(0, abelian_length, "abelian", f"abelian({abelian_length})"))
    summands.extend(Summand(o, length, "simple", name) for o, length, name in simple_blocks)
    return FiniteLieAlgebra(
        name="+".join(a.name for a in algebras),
        labels=tuple(labels),
        structure=structure,
        summands=tuple(summands),
        realizations=realizations,
    )


_SPEC_PART = re.compile(r"^(sl|gl|abelian)\(?(\d+)\)?$")


def parse_algebra_spec(text: str) -> FiniteLieAlgebra:
    """Parse ``sl2``, ``sl(3)``, ``gl2``, ``abelian(2)`` or sums like ``gl2+sl3``.

    Equal specs return the same algebra object.
    """
    return _parse_normalized("+".join(p.strip().lower() for p in text.split("+")))


@lru_cache(maxsize=None)
def _parse_normalized(normalized: str) -> FiniteLieAlgebra:
    parts = normalized.split("+")
    algebras = []
    for part in parts:
        match = _SPEC_PART.match(part)
        if not match:
            raise ValueError(
                f"Unknown algebra '{normalized}'. Expected sl(n), gl(n), abelian(d) or sums of them"
            )
        kind, n = match.group(1), int(match.group(2))
        builder = {"sl": make_sl, "gl": make_gl, "abelian": make_abelian}[kind]
        algebras.append(builder(n))
    return algebras[0] if len(algebras) == 1 else direct_sum(*algebras)


# -- invariant forms ----------------------------------------------------------


def _trace_pairing(algebra: FiniteLieAlgebra, i: int, j: int) -> Fraction | None:
    a, b = algebra.realizations[i], algebra.realizations[j]
    if a.matrix is None or b.matrix is None or a.factor != b.factor:
        return None
    return _to_fraction((a.matrix * b.matrix).trace())


def trace_form(
    algebra: FiniteLieAlgebra,
    weights: Sequence[ParamPoly | Scalar] | None = None,
    abelian_gram: Sequence[Sequence[ParamPoly | Scalar]] | None = None,
) -> BilinearForm:
    """Block-diagonal invariant form: weighted trace forms plus a form on g0.

    ``weights`` has one entry per simple summand and multiplies the trace form
    of that summand's defining representation.  ``abelian_gram`` is a symmetric
    m x m matrix on the abelian block, measured in trace units: each entry is
    multiplied by tr(x_a x_b) when both scalars act on the same space and taken
    literally otherwise.  Omitted weights default to 1 and an omitted abelian
    gram to zero.
    """
    simple = algebra.simple_summands
    abelian = [i for s in algebra.abelian_summands for i in s.indices]
    if weights is None:
        weights = [1] * len(simple)
    if len(weights) != len(simple):
        raise ValueError(
            f"{algebra.name} has {len(simple)} simple summands, got {len(weights)} weights"
        )
    gram: dict[tuple[int, int], ParamPoly] = {}
    for summand, weight in zip(simple, weights, strict=True):
        w = ParamPoly.coerce(weight)
        for i, j in product(summand.indices, repeat=2):
            t = _trace_pairing(algebra, i, j)
            if t:
                value = w * t
                if value:
                    gram[(i, j)] = value
    if abelian_gram is not None:
        m = len(abelian)
        if len(abelian_gram) != m or any(len(row) != m for row in abelian_gram):
            raise ValueError(f"Abelian gram must be {m}x{m} for {algebra.name}")
        for a, b in product(range(m), repeat=2):
            if ParamPoly.coerce(abelian_gram[a][b]) != ParamPoly.coerce(abelian_gram[b][a]):
                raise ValueError("Abelian gram is not symmetric")
        for a, b in product(range(m), repeat=2):
            i, j = abelian[a], abelian[b]
            unit = _trace_pairing(algebra, i, j)
            value = ParamPoly.coerce(abelian_gram[a][b]) * (unit if unit else 1)
            if value:
                gram[(i, j)] = value
    return BilinearForm(algebra, gram)


def matrix_trace_form(algebra: FiniteLieAlgebra) -> BilinearForm:
    """alpha(A, B) = tr(AB) in the defining representation (psi_1's form)."""
    m = sum(s.length for s in algebra.abelian_summands)
    identity = [[1 if a == b else 0 for b in range(m)] for a in range(m)]
    return trace_form(algebra, None, identity if m else None)


def trace_product_form(algebra: FiniteLieAlgebra) -> BilinearForm:
    """alpha(A, B) = tr(A) tr(B) (psi_2's form on gl(n))."""
    traces = []
    for r in algebra.realizations:
        traces.append(_to_fraction(r.matrix.trace()) if r.matrix is not None else Fraction(0))
    gram = {
        (i, j): ParamPoly.constant(traces[i] * traces[j])
        for i, j in product(range(algebra.dim), repeat=2)
        if traces[i] and traces[j]
    }
    return BilinearForm(algebra, gram)


def cartan_elements(algebra: FiniteLieAlgebra) -> list[int]:
    return [i for i in range(algebra.dim) if algebra.is_diagonal(i)]


def expected_local_cocycle_dimension(algebra: FiniteLieAlgebra) -> int:
    """M + m(m+1)/2 for M simple summands and an abelian block of dimension m."""
    big_m = len(algebra.simple_summands)
    m = sum(s.length for s in algebra.abelian_summands)
    return big_m + m * (m + 1) // 2


def describe(algebra: FiniteLieAlgebra) -> dict[str, Any]:
    """Canonical JSON-ready description (labels, summands, structure constants)."""
    constants = [
        {"i": i, "j": j, "k": k, "value": render_rational(c)}
        for (i, j), out in sorted(algebra.structure.items())
        if i < j
        for k, c in sorted(out.items())
    ]
    return {
        "name": algebra.name,
        "dim": algebra.dim,
        "basis": list(algebra.labels),
        "summands": [
            {"offset": s.offset, "length": s.length, "kind": s.kind, "name": s.name}
            for s in algebra.summands
        ],
        "structure_constants": constants,
        "cartan_elements": [algebra.labels[i] for i in cartan_elements(algebra)],
        "local_cocycle_dimension": expected_local_cocycle_dimension(algebra),
    }
