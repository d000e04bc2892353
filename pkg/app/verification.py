"""Verification suites for current algebras and their central extensions.

Every suite evaluates an identity exactly on tuples drawn from a degree window
and returns a ``VerificationReport``.  Failures are report data, never
exceptions.  Sweeps fan out over a thread pool whose ``map`` preserves input
order, so reports do not depend on scheduling.
"""

import logging
import random
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from itertools import combinations, product
from typing import TypeVar

from app.coefficients import ParamPoly
from app.config import get_settings
from app.current import CurrentAlgebra, CurrentElement, current_bracket, current_from_fn
from app.exceptions import BasisExpressionError, WitnessNotFoundError
from app.extensions import (
    Cocycle,
    CurrentCocycle,
    ExtendedElement,
    LinearForm,
    coboundary,
    cocycle_eval,
    corrupt,
    corruption_site,
    extended_bracket,
    geometric_cocycle_basis,
    independence_modulo_coboundaries,
    locality_bounds,
    nontriviality_witness,
    oracle_basis_pairing,
    standard_cocycle,
)
from app.families import ClassicalFamily, FunctionFamily
from app.finite_lie import FiniteLieAlgebra, expected_local_cocycle_dimension
from app.functions import (
    FnElement,
    Window,
    degenerate,
    fn_derivative,
    fn_mul,
    fn_mul_oracle,
    fn_residue_cross_check,
    residue_sum_all_points,
)
from app.models import (
    CheckName,
    LocalityBoundsModel,
    VerificationReport,
    Violation,
    VerifyResponse,
)
from app.models import Window as WindowModel

logger = logging.getLogger(__name__)

T = TypeVar("T")

Triple = tuple[CurrentElement, CurrentElement, CurrentElement]


def _fan_out(
    evaluate: Callable[[T], list[Violation]], tuples: Sequence[T], workers: int
) -> list[Violation]:
    """Evaluate every tuple and merge violations in input order."""
    if workers <= 1 or len(tuples) < 2:
        results: Iterable[list[Violation]] = map(evaluate, tuples)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(evaluate, tuples))
    return [v for found in results for v in found]


def _select(items: list[T], sample: int | None, seed: int) -> list[T]:
    """All items, or a seeded sample of at most ``sample`` kept in input order."""
    if sample is None or sample >= len(items):
        return items
    chosen = sorted(random.Random(seed).sample(range(len(items)), sample))
    return [items[k] for k in chosen]


def _window_model(window: Window) -> WindowModel:
    return WindowModel(lo=window.lo, hi=window.hi)


def _report(
    check: CheckName,
    family: FunctionFamily,
    algebra: FiniteLieAlgebra | None,
    window: Window,
    tuples_checked: int,
    violations: list[Violation],
    **extra: object,
) -> VerificationReport:
    logger.info(
        f"{check.value} on {family.name}/{algebra.name if algebra else 'none'} {window}: "
        f"{tuples_checked} tuples, {len(violations)} violations"
    )
    return VerificationReport(
        check=check,
        family=family.name,
        algebra=algebra.name if algebra else "none",
        window=_window_model(window),
        tuples_checked=tuples_checked,
        violations=violations,
        **extra,
    )


def basis_triples(
    algebra: FiniteLieAlgebra, family: FunctionFamily, window: Window
) -> list[Triple]:
    """Triples of distinct homogeneous basis elements, in a fixed order."""
    basis = CurrentAlgebra(algebra, family).basis(window.degrees)
    return list(combinations(basis, 3))


def _cyclic_cocycle_sum(psi: Cocycle, a: CurrentElement, b: CurrentElement, c: CurrentElement) -> ParamPoly:
    return (
        cocycle_eval(psi, current_bracket(a, b), c)
        + cocycle_eval(psi, current_bracket(b, c), a)
        + cocycle_eval(psi, current_bracket(c, a), b)
    )


def cocycle_condition_check(
    psi: Cocycle,
    window: Window,
    sample: int | None = None,
    seed: int | None = None,
    workers: int | None = None,
) -> VerificationReport:
    """
    Evaluate psi([a,b],c) + psi([b,c],a) + psi([c,a],b) on basis triples.

    Args:
        psi: Cocycle under test
        window: Degrees the triples are drawn from
        sample: Cap on the number of triples; exhaustive when None
        seed: Seed for the sample (defaults to the configured seed)
        workers: Thread count (defaults to the configured value)

    Returns:
        Report listing every triple with a non-zero cyclic sum
    """
    settings = get_settings()
    seed = settings.random_seed if seed is None else seed
    triples = _select(basis_triples(psi.algebra, psi.family, window), sample, seed)

    def evaluate(triple: Triple) -> list[Violation]:
        value = _cyclic_cocycle_sum(psi, *triple)
        if not value:
            return []
        return [Violation(inputs=[x.render() for x in triple], actual=value.render())]

    violations = _fan_out(evaluate, triples, workers or settings.max_workers)
    return _report(CheckName.COCYCLE_CONDITION, psi.family, psi.algebra, window, len(triples), violations)


def jacobi_check(
    psi: Cocycle,
    window: Window,
    sample: int | None = None,
    seed: int | None = None,
    workers: int | None = None,
) -> VerificationReport:
    """
    Jacobi identity of the current and the extended bracket on basis triples.

    The central part of the extended Jacobiator is compared with the cyclic
    cocycle sum computed directly, so both routes are cross-checked.
    """
    settings = get_settings()
    seed = settings.random_seed if seed is None else seed
    triples = _select(basis_triples(psi.algebra, psi.family, window), sample, seed)

    def evaluate(triple: Triple) -> list[Violation]:
        a, b, c = (ExtendedElement.lift(x) for x in triple)
        jacobiator = (
            extended_bracket(psi, extended_bracket(psi, a, b), c)
            + extended_bracket(psi, extended_bracket(psi, b, c), a)
            + extended_bracket(psi, extended_bracket(psi, c, a), b)
        )
        inputs = [x.render() for x in triple]
        found = []
        if not jacobiator.current.is_zero():
            found.append(
                Violation(inputs=inputs, actual=jacobiator.current.render(), note="current bracket")
            )
        if jacobiator.central:
            found.append(
                Violation(inputs=inputs, actual=jacobiator.render(), note="extended bracket")
            )
        direct = _cyclic_cocycle_sum(psi, *triple)
        if direct != jacobiator.central:
            found.append(
                Violation(
                    inputs=inputs,
                    expected=jacobiator.central.render(),
                    actual=direct.render(),
                    note="routes disagree",
                )
            )
        return found

    violations = _fan_out(evaluate, triples, workers or settings.max_workers)
    return _report(CheckName.JACOBI, psi.family, psi.algebra, window, len(triples), violations)


def locality_check(psi: Cocycle, window: Window) -> VerificationReport:
    """Observed band of non-zero values against the family band 0 <= n + m <= L."""
    bounds = locality_bounds(psi, window)
    band = (0, psi.family.shift_bound)
    violations = []
    if bounds.is_local and (bounds.t2 < band[0] or bounds.t1 > band[1]):
        violations.append(
            Violation(
                inputs=[str(window)],
                expected=f"{band[0]} <= n + m <= {band[1]}",
                actual=f"{bounds.t2} <= n + m <= {bounds.t1}",
            )
        )
    model = LocalityBoundsModel(t1=bounds.t1, t2=bounds.t2, window=_window_model(window))
    return _report(
        CheckName.LOCALITY,
        psi.family,
        psi.algebra,
        window,
        len(window) ** 2,
        violations,
        bounds=model,
    )


def oracle_check(
    family: FunctionFamily, window: Window, workers: int | None = None
) -> VerificationReport:
    """Closed-form products and pairings against the independent oracles."""
    settings = get_settings()
    pairs = list(product(window.degrees, repeat=2))

    def evaluate(pair: tuple[int, int]) -> list[Violation]:
        n, m = pair
        f, g = FnElement.basis(family, n), FnElement.basis(family, m)
        inputs = [f.render(), g.render()]
        found = []
        try:
            closed, oracle = fn_mul(f, g), fn_mul_oracle(f, g)
            if closed != oracle:
                found.append(
                    Violation(inputs=inputs, expected=oracle.render(), actual=closed.render(), note="product")
                )
            table = family.basis_pairing(n, m)
            residues = oracle_basis_pairing(family, n, m)
            if table != residues:
                found.append(
                    Violation(inputs=inputs, expected=residues.render(), actual=table.render(), note="pairing")
                )
            crossed = fn_residue_cross_check(f, g)
            if crossed != residues:
                found.append(
                    Violation(inputs=inputs, expected=residues.render(), actual=crossed.render(), note="cross-check")
                )
            total = residue_sum_all_points(f, g)
            if total:
                found.append(Violation(inputs=inputs, actual=total.render(), note="residue theorem"))
        except BasisExpressionError as e:
            found.append(Violation(inputs=inputs, actual=str(e), note="oracle failed"))
        return found

    violations = _fan_out(evaluate, pairs, workers or settings.max_workers)
    return _report(CheckName.ORACLE, family, None, window, len(pairs), violations)


InvarianceTuple = tuple[FnElement, FnElement, FnElement, str, str]


def invariance_tuples(
    psi: Cocycle, window: Window, budget: int, seed: int, h: FnElement | None = None
) -> list[InvarianceTuple]:
    """Draw (h, f, g, x, y) with (x, y) on the support of the cocycle's Lie form."""
    family, algebra = psi.family, psi.algebra
    rng = random.Random(seed)
    degrees = list(window.degrees)
    labels = algebra.labels
    pairs = list(psi.lie_pairs()) or list(product(range(algebra.dim), repeat=2))
    tuples = []
    for _ in range(budget):
        field_ = h if h is not None else FnElement.basis(family, rng.choice(degrees))
        f = FnElement.basis(family, rng.choice(degrees), rng.randint(-3, 3) or 1)
        g = FnElement.basis(family, rng.choice(degrees)) + FnElement.basis(family, rng.choice(degrees))
        i, j = rng.choice(pairs)
        tuples.append((field_, f, g, labels[i], labels[j]))
    return tuples


def l_invariance_check(
    psi: Cocycle,
    window: Window,
    h: FnElement | None = None,
    sample: int | None = None,
    seed: int | None = None,
    workers: int | None = None,
) -> VerificationReport:
    """
    psi(x (x) h f', y (x) g) + psi(x (x) f, y (x) h g') = 0 for sampled tuples.

    Args:
        psi: Cocycle under test
        window: Degrees of h, f and g
        h: Fixed vector field coefficient; drawn from the window when None
        sample: Number of tuples (defaults to the configured budget)
        seed: Seed for drawing the tuples
        workers: Thread count

    Returns:
        Report listing every tuple with a non-zero invariance sum
    """
    settings = get_settings()
    seed = settings.random_seed if seed is None else seed
    budget = sample or settings.sample_budget
    family, algebra = psi.family, psi.algebra
    tuples = invariance_tuples(psi, window, budget, seed, h)

    def evaluate(item: InvarianceTuple) -> list[Violation]:
        field_, f, g, x, y = item
        left = cocycle_eval(
            psi,
            current_from_fn(algebra, x, field_ * fn_derivative(f)),
            current_from_fn(algebra, y, g),
        )
        right = cocycle_eval(
            psi,
            current_from_fn(algebra, x, f),
            current_from_fn(algebra, y, field_ * fn_derivative(g)),
        )
        total = left + right
        if not total:
            return []
        return [
            Violation(
                inputs=[field_.render(), f"{x} (x) {f.render()}", f"{y} (x) {g.render()}"],
                actual=total.render(),
            )
        ]

    violations = _fan_out(evaluate, tuples, workers or settings.max_workers)
    return _report(CheckName.LINVARIANCE, family, algebra, window, len(tuples), violations)


def degeneration_check(family: FunctionFamily, window: Window) -> VerificationReport:
    """Products, derivatives and pairings at the degenerate parameters are classical."""
    classical = ClassicalFamily()
    violations = []
    pairs = list(product(window.degrees, repeat=2))
    for n, m in pairs:
        product_terms = degenerate(FnElement(family, family.basis_product(n, m)))
        expected = FnElement(classical, classical.basis_product(n, m))
        if product_terms != expected:
            violations.append(
                Violation(
                    inputs=[f"A({n})", f"A({m})"],
                    expected=expected.render(),
                    actual=product_terms.render(),
                    note="product",
                )
            )
        value = family.basis_pairing(n, m)
        if value.parameters:
            value = value.substitute(family.degeneration)
        if value != classical.basis_pairing(n, m):
            violations.append(
                Violation(
                    inputs=[f"A({n})", f"A({m})"],
                    expected=classical.basis_pairing(n, m).render(),
                    actual=value.render(),
                    note="pairing",
                )
            )
    step = family.degenerate_derivative_step
    for n in window.degrees:
        derivative = degenerate(fn_derivative(FnElement.basis(family, n)))
        expected = FnElement.basis(classical, n + step, n) if n else FnElement.zero(classical)
        if derivative != expected:
            violations.append(
                Violation(
                    inputs=[f"A({n})"],
                    expected=expected.render(),
                    actual=derivative.render(),
                    note="derivative",
                )
            )
    return _report(
        CheckName.DEGENERATION,
        family,
        None,
        window,
        len(pairs) + len(window),
        violations,
        details={"substitution": dict(family.degeneration)},
    )


def witness_check(psi: Cocycle, window: Window, seed: int | None = None) -> VerificationReport:
    """Find psi(x (x) A_n, x (x) A_-n) != 0 and confirm a coboundary cannot remove it."""
    settings = get_settings()
    seed = settings.random_seed if seed is None else seed
    try:
        witness = nontriviality_witness(psi, window)
    except WitnessNotFoundError as e:
        violation = Violation(inputs=[str(window)], expected="non-zero witness", actual=str(e))
        return _report(CheckName.WITNESS, psi.family, psi.algebra, window, 0, [violation])

    rng = random.Random(seed)
    support = [(i, n) for n in window.degrees for i in range(psi.algebra.dim)]
    phi = LinearForm(
        psi.algebra,
        psi.family,
        {key: ParamPoly.constant(rng.randint(-5, 5)) for key in rng.sample(support, min(8, len(support)))},
    )
    shifted = cocycle_eval(psi + coboundary(phi), witness.left, witness.right)
    violations = []
    if shifted != witness.value:
        violations.append(
            Violation(
                inputs=[witness.left.render(), witness.right.render()],
                expected=witness.value.render(),
                actual=shifted.render(),
                note="witness moved by a coboundary",
            )
        )
    details = {"label": witness.label, "degree": witness.degree, "value": witness.value.render()}
    return _report(CheckName.WITNESS, psi.family, psi.algebra, window, 2, violations, details=details)


def independence_check(
    algebra: FiniteLieAlgebra, family: FunctionFamily, window: Window
) -> VerificationReport:
    """The geometric cocycle basis is linearly independent modulo window coboundaries."""
    cocycles = geometric_cocycle_basis(algebra, family)
    certificate = independence_modulo_coboundaries(cocycles, window)
    violations = []
    if not certificate.independent:
        violations.append(
            Violation(
                inputs=list(certificate.names),
                expected=f"rank gain {len(cocycles)}",
                actual=f"rank gain {certificate.combined_rank - certificate.coboundary_rank}",
            )
        )
    details = {
        "cocycles": list(certificate.names),
        "coboundary_rank": certificate.coboundary_rank,
        "combined_rank": certificate.combined_rank,
        "expected_dimension": expected_local_cocycle_dimension(algebra),
    }
    pairs = len(window) * algebra.dim
    return _report(
        CheckName.INDEPENDENCE,
        family,
        algebra,
        window,
        pairs * (pairs - 1) // 2,
        violations,
        details=details,
    )


class Verifier:
    """Runs the verification suites for one family, algebra and window."""

    ALGEBRA_CHECKS = (
        CheckName.JACOBI,
        CheckName.COCYCLE_CONDITION,
        CheckName.LOCALITY,
        CheckName.LINVARIANCE,
        CheckName.WITNESS,
        CheckName.INDEPENDENCE,
    )

    def __init__(
        self,
        family: FunctionFamily,
        algebra: FiniteLieAlgebra | None,
        window: Window,
        psi: CurrentCocycle | None = None,
        sample: int | None = None,
        corrupt_cocycle: bool = False,
        workers: int | None = None,
    ):
        self.family = family
        self.algebra = algebra
        self.window = window
        self.sample = sample
        self.workers = workers
        self.errors: list[str] = []
        if psi is None and algebra is not None:
            psi = standard_cocycle(algebra, family)
        if psi is not None and corrupt_cocycle:
            psi = corrupt(psi, *corruption_site(window))
        self.psi = psi

    def run(self, check: CheckName) -> VerificationReport:
        if check in self.ALGEBRA_CHECKS and self.psi is None:
            raise ValueError(f"Check '{check.value}' needs a Lie algebra")
        match check:
            case CheckName.JACOBI:
                return jacobi_check(self.psi, self.window, self.sample, workers=self.workers)
            case CheckName.COCYCLE_CONDITION:
                return cocycle_condition_check(self.psi, self.window, self.sample, workers=self.workers)
            case CheckName.LOCALITY:
                return locality_check(self.psi, self.window)
            case CheckName.ORACLE:
                return oracle_check(self.family, self.window, workers=self.workers)
            case CheckName.LINVARIANCE:
                return l_invariance_check(self.psi, self.window, sample=self.sample, workers=self.workers)
            case CheckName.DEGENERATION:
                return degeneration_check(self.family, self.window)
            case CheckName.WITNESS:
                return witness_check(self.psi, self.window)
            case CheckName.INDEPENDENCE:
                return independence_check(self.psi.algebra, self.family, self.window)
        raise ValueError(f"Unknown check '{check}'. Available: {', '.join(c.value for c in CheckName)}")

    def run_all(self, checks: Iterable[CheckName] | None = None) -> VerifyResponse:
        """
        Run the selected suites (all by default).

        Returns:
            Combined response; ``clean`` is True iff no report has violations
        """
        self.errors = []
        reports = []
        if checks is None:
            checks = [c for c in CheckName if self.psi is not None or c not in self.ALGEBRA_CHECKS]
        for check in checks:
            try:
                reports.append(self.run(check))
            except ValueError as e:
                logger.warning(f"Skipping {check.value}: {e}")
                self.errors.append(f"{check.value}: {e}")
        clean = all(report.clean for report in reports) and not self.errors
        return VerifyResponse(clean=clean, reports=reports, errors=self.errors.copy() or None)
