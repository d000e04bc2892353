"""Abstract base class for almost-graded function algebra families."""

from abc import ABC, abstractmethod
from collections.abc import Mapping

from app.coefficients import ParamPoly, Scalar
from app.series import LaurentSeries, PointLabel

BasisTerms = dict[int, ParamPoly]


class FunctionFamily(ABC):
    """
    Interface that every function algebra family must implement.

    A family fixes a compact Riemann surface with marked points, a basis A_n
    (one element per integer degree) of the functions holomorphic outside the
    marked points, and closed-form rules for products, derivatives and the
    cocycle pairing in that basis.  Each closed form comes with an independent
    oracle (polynomial arithmetic or local Laurent series) so that the rules
    can be verified exactly.
    """

    #: Points where the cocycle pairing sums residues, with the sign applied.
    pairing_points: tuple[tuple[PointLabel, int], ...] = ()
    #: Remaining marked points; by the residue theorem they give the same value.
    cross_check_points: tuple[tuple[PointLabel, int], ...] = ()
    #: Largest degree drop h = n + m - L that the product rule produces.
    shift_bound: int = 0
    #: Parameter values that collapse the family onto the classical one.
    degeneration: Mapping[str, int] = {}
    #: Degree step of d/dz A_n once A_n is read as z^n at the degenerate parameters.
    degenerate_derivative_step: int = -1

    @property
    @abstractmethod
    def name(self) -> str:
        """
        Family identifier (e.g., 'classical', 'threepoint', 'torus').

        Returns:
            String identifier for this family
        """

    @property
    @abstractmethod
    def parameters(self) -> tuple[str, ...]:
        """Formal parameters the structure constants depend on."""

    @abstractmethod
    def basis_product(self, n: int, m: int) -> BasisTerms:
        """
        Closed-form product A_n * A_m.

        Args:
            n: Degree of the left factor
            m: Degree of the right factor

        Returns:
            Map from degree h to the coefficient of A_h
        """

    @abstractmethod
    def basis_derivative(self, n: int) -> BasisTerms:
        """d/dz of A_n in the global coordinate, re-expressed in the basis."""

    @abstractmethod
    def basis_pairing(self, n: int, m: int) -> ParamPoly:
        """Closed-form value of the cocycle pairing on (A_n, A_m)."""

    @abstractmethod
    def oracle_multiply(self, f: Mapping[int, ParamPoly], g: Mapping[int, ParamPoly]) -> BasisTerms:
        """
        Product of two finite combinations computed without the degree rule.

        Args:
            f: Coordinates of the left factor
            g: Coordinates of the right factor

        Returns:
            Coordinates of f * g

        Raises:
            BasisExpressionError: If the product cannot be re-expressed in the basis
        """

    @abstractmethod
    def expand_basis(self, n: int, point: PointLabel, order: int) -> LaurentSeries:
        """
        Laurent expansion of A_n in the local coordinate at a marked point.

        Args:
            n: Basis degree
            point: Marked point of this family
            order: Exponents below this are known in the result

        Returns:
            Series truncated at ``order`` (or exact)
        """

    @abstractmethod
    def valuation(self, n: int, point: PointLabel) -> int:
        """Order of vanishing of A_n at ``point`` (negative for poles)."""

    # shared helpers -----------------------------------------------------------

    @property
    def points(self) -> tuple[PointLabel, ...]:
        return tuple(p for p, _ in self.pairing_points + self.cross_check_points)

    def check_point(self, point: PointLabel) -> None:
        if point not in self.points:
            available = ", ".join(p.value for p in self.points)
            raise ValueError(
                f"Point '{point.value}' is not marked on {self.name}. Available: {available}"
            )

    def coefficient(self, value: ParamPoly | Scalar) -> ParamPoly:
        """Coerce a scalar to a polynomial over this family's parameters."""
        poly = ParamPoly.coerce(value, self.parameters)
        if poly.parameters and poly.parameters != self.parameters:
            return poly.with_parameters(self.parameters)
        return poly

    def constant(self, value: Scalar) -> ParamPoly:
        return ParamPoly.constant(value, self.parameters)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FunctionFamily):
            return NotImplemented
        return self.name == other.name

    def __hash__(self) -> int:
        return hash(self.name)

    def __repr__(self) -> str:
        return f"{type(self).__name__}()"
