"""Exception types raised by the algebra kernel."""


class ParameterMismatchError(ValueError):
    """Two coefficients live over different, incompatible parameter sets."""


class AlgebraMismatchError(ValueError):
    """Operands belong to different Lie algebras, families or cocycles."""


class UnknownGeneratorError(ValueError):
    """A generator name does not resolve against the selected algebra."""


class ExprSyntaxError(ValueError):
    """Malformed element expression."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class SeriesPrecisionError(ArithmeticError):
    """A requested Laurent coefficient lies beyond the known truncation order."""


class BasisExpressionError(ArithmeticError):
    """An oracle result could not be expressed in the family basis.

    The products and residues handled here always lie in the span of the basis
    with coefficients polynomial in the parameters, so this signals a bug.
    """


class WitnessNotFoundError(LookupError):
    """No non-triviality witness exists in the searched window."""
