"""Pydantic models for reports and API contracts."""

from enum import Enum
from typing import Any

from pydantic import BaseModel, Field


class CheckName(str, Enum):
    """Verification suites."""

    JACOBI = "jacobi"
    COCYCLE_CONDITION = "cocycle-condition"
    LOCALITY = "locality"
    ORACLE = "oracle"
    LINVARIANCE = "linvariance"
    DEGENERATION = "degeneration"
    WITNESS = "witness"
    INDEPENDENCE = "independence"


class TableKind(str, Enum):
    """Tables the exporter can produce."""

    PRODUCT = "product"
    COCYCLE = "cocycle"
    RELATIONS = "relations"


class Window(BaseModel):
    """Closed degree range lo..hi."""

    lo: int = Field(..., description="Lowest degree")
    hi: int = Field(..., description="Highest degree")


class Violation(BaseModel):
    """One tuple on which an identity failed."""

    inputs: list[str] = Field(..., description="Rendered inputs of the failing tuple")
    expected: str = Field(default="0", description="Expected value")
    actual: str = Field(..., description="Computed value")
    note: str | None = Field(default=None, description="Which route or sub-check failed")


class LocalityBoundsModel(BaseModel):
    """Observed band T2 <= n + m <= T1."""

    t1: int | None = Field(..., description="Largest n + m with a non-zero value")
    t2: int | None = Field(..., description="Smallest n + m with a non-zero value")
    window: Window = Field(..., description="Window the bounds were observed on")


class VerificationReport(BaseModel):
    """Result of one verification suite."""

    check: CheckName = Field(..., description="Suite name")
    family: str = Field(..., description="Function algebra family")
    algebra: str = Field(..., description="Lie algebra name, or 'none'")
    window: Window = Field(..., description="Degree window swept")
    tuples_checked: int = Field(..., description="Number of tuples evaluated", ge=0)
    violations: list[Violation] = Field(default_factory=list, description="Failing tuples")
    bounds: LocalityBoundsModel | None = Field(default=None, description="Locality bounds, if measured")
    details: dict[str, Any] = Field(default_factory=dict, description="Suite-specific findings")

    @property
    def clean(self) -> bool:
        return not self.violations


class ProductRow(BaseModel):
    """Coefficient of A_h in A_n * A_m."""

    n: int
    m: int
    h: int
    coefficient: str = Field(..., description="Canonical parameter polynomial")


class CocycleRow(BaseModel):
    """Closed-form pairing value omega(A_n, A_m)."""

    n: int
    m: int
    value: str = Field(..., description="Canonical parameter polynomial")


class TableDocument(BaseModel):
    """A product, cocycle or relations table over a window."""

    kind: TableKind = Field(..., description="Table kind")
    family: str = Field(..., description="Function algebra family")
    window: Window = Field(..., description="Degree window")
    rows: list[ProductRow] | list[CocycleRow] | list[str] = Field(..., description="Table rows")


class AlgebraDescription(BaseModel):
    """Canonical description of a finite-dimensional Lie algebra."""

    name: str
    dim: int = Field(..., ge=0)
    basis: list[str] = Field(..., description="Basis labels in index order")
    summands: list[dict[str, Any]]
    structure_constants: list[dict[str, Any]] = Field(
        ..., description="Non-zero c_ij^k for i < j as {i, j, k, value}"
    )
    cartan_elements: list[str] = Field(..., description="Witness search domain")
    local_cocycle_dimension: int = Field(
        ..., description="M + m(m+1)/2 for M simple summands and m = dim g0"
    )


class HealthResponse(BaseModel):
    """Health check response."""

    status: str = Field(..., description="Service status")
    timestamp: str = Field(..., description="Current timestamp")
    version: str | None = Field(None, description="API version")
    environment: str | None = Field(None, description="Environment name")
    default_family: str | None = Field(None, description="Default function algebra family")


class APIInfoResponse(BaseModel):
    """API version information."""

    version: str = Field(..., description="API version")
    endpoints: dict[str, str] = Field(..., description="Available endpoints")
    families: list[str] = Field(..., description="Function algebra families")


class BracketRequest(BaseModel):
    """Evaluate one expression or bracket two."""

    family: str = Field(default="threepoint", description="Function algebra family")
    algebra: str = Field(default="sl2", description="Lie algebra spec or 'none'")
    lhs: str = Field(..., description="Expression, e.g. 'e(2)' or '[e(1), f(1)]'", min_length=1)
    rhs: str | None = Field(default=None, description="Second operand of the bracket")
    extended: bool = Field(default=False, description="Use the centrally extended bracket")
    assignments: dict[str, str] = Field(default_factory=dict, description="Parameter values")


class BracketResponse(BaseModel):
    """Rendered result of a bracket request."""

    result: str = Field(..., description="Canonical rendering")
    family: str
    algebra: str
    extended: bool


class TableRequest(BaseModel):
    """Ask for a product, cocycle or relations table."""

    family: str = Field(default="threepoint", description="Function algebra family")
    kind: TableKind = Field(default=TableKind.PRODUCT, description="Table kind")
    window: str = Field(default="-3:3", description="Degree window LO:HI")
    extended: bool = Field(default=False, description="Extended relations (relations only)")
    assignments: dict[str, str] = Field(default_factory=dict, description="Parameter values")


class VerifyRequest(BaseModel):
    """Run verification suites."""

    family: str = Field(default="threepoint", description="Function algebra family")
    algebra: str = Field(default="sl2", description="Lie algebra spec")
    window: str = Field(default="-4:4", description="Degree window LO:HI")
    checks: list[CheckName] | None = Field(default=None, description="Suites to run; all if omitted")
    sample: int | None = Field(default=None, description="Cap randomized sweeps at this many tuples", ge=1)
    corrupt_cocycle: bool = Field(default=False, description="Activate the mutation harness")


class VerifyResponse(BaseModel):
    """All reports of a verification run."""

    clean: bool = Field(..., description="True iff no suite reported violations")
    reports: list[VerificationReport]
    errors: list[str] | None = Field(default=None, description="Suites that could not run")
