"""Command-line front end: ``knalg describe|bracket|table|verify|degenerate``.

Exit status: 0 clean, 1 verification violations, 2 usage errors or suites that could not run.
"""

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from pydantic import ValidationError

from app import __version__
from app.config import CliConfig, get_settings
from app.current import CurrentElement, current_bracket
from app.exceptions import ExprSyntaxError
from app.expr import Element, ExprContext, parse_element
from app.extensions import ExtendedElement, degenerate_element, extended_bracket
from app.finite_lie import describe
from app.functions import FnElement
from app.models import CheckName, TableKind
from app.tables import build_table, render_table, write_table
from app.verification import Verifier, degeneration_check

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_USAGE = 2


def _common_options() -> argparse.ArgumentParser:
    settings = get_settings()
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument(
        "--family",
        default=settings.default_family,
        choices=["classical", "threepoint", "torus"],
        help="Function algebra family (default: %(default)s)",
    )
    parent.add_argument(
        "--algebra",
        default=settings.default_algebra,
        help="Lie algebra: sl2, sl(3), gl2, gl(n), abelian(d), sums like sl2+sl2, or none",
    )
    parent.add_argument(
        "--window", default=settings.default_window, help="Degree window LO:HI (default: %(default)s)"
    )
    parent.add_argument(
        "--format", default="json", choices=["json", "csv", "markdown"], help="Output format"
    )
    parent.add_argument(
        "--set",
        dest="assignments",
        action="append",
        default=[],
        metavar="PARAM=VALUE",
        help="Substitute an exact rational for a family parameter (repeatable)",
    )
    parent.add_argument("--extended", action="store_true", help="Use the centrally extended algebra")
    parent.add_argument("--out", type=Path, help="Write the output to FILE instead of stdout")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parent = _common_options()
    parser = argparse.ArgumentParser(
        prog="knalg", description="Exact computations in Krichever-Novikov current algebras"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser("describe", parents=[parent], help="Describe the family and Lie algebra")

    bracket = commands.add_parser(
        "bracket", parents=[parent], help="Evaluate an expression or bracket two"
    )
    bracket.add_argument("expressions", nargs="+", metavar="EXPR", help="One or two expressions")

    table = commands.add_parser("table", parents=[parent], help="Emit a structure table")
    table.add_argument(
        "--kind", default="product", choices=[k.value for k in TableKind], help="Table kind"
    )

    verify = commands.add_parser("verify", parents=[parent], help="Run verification suites")
    verify.add_argument(
        "--checks",
        default=None,
        help=f"Comma-separated subset of: {', '.join(c.value for c in CheckName)}",
    )
    verify.add_argument(
        "--corrupt-cocycle", action="store_true", help="Perturb one cocycle table entry"
    )
    verify.add_argument("--sample", type=int, default=None, help="Cap randomized sweeps at N tuples")
    verify.add_argument("--workers", type=int, default=None, help="Threads for the sweeps")

    degenerate = commands.add_parser(
        "degenerate", parents=[parent], help="Collapse onto the classical current algebra"
    )
    degenerate.add_argument("expressions", nargs="*", metavar="EXPR", help="Elements to degenerate")
    return parser


def _config(args: argparse.Namespace) -> CliConfig:
    return CliConfig(
        family=args.family,
        algebra=args.algebra,
        window=args.window,
        format=args.format,
        assignments=args.assignments,
        extended=args.extended,
    )


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        write_table(text, out)


def _specialize(element: Element, config: CliConfig) -> Element:
    return element.substitute(config.assignments) if config.assignments else element


def cmd_describe(config: CliConfig) -> str:
    context = ExprContext.from_config(config)
    family = context.family
    document = {
        "family": {
            "name": family.name,
            "parameters": list(family.parameters),
            "points": [p.value for p in family.points],
            "pairing_points": [[p.value, sign] for p, sign in family.pairing_points],
            "shift_bound": family.shift_bound,
            "degeneration": dict(family.degeneration),
        },
        "algebra": describe(context.algebra) if context.algebra is not None else None,
    }
    return json.dumps(document, indent=2)


def cmd_bracket(config: CliConfig, lhs: str, rhs: str | None = None) -> str:
    """
    Canonical rendering of ``lhs`` or of ``[lhs, rhs]``.

    Raises:
        ExprSyntaxError: On malformed expressions
        UnknownGeneratorError: On names outside the selected algebra
    """
    context = ExprContext.from_config(config)
    x = parse_element(lhs, context)
    if rhs is None:
        return _specialize(x, config).render()
    y = parse_element(rhs, context)
    if isinstance(x, FnElement):
        result = FnElement.zero(context.family)
    elif isinstance(x, ExtendedElement) and isinstance(y, ExtendedElement):
        result = extended_bracket(context.psi, x, y)
    elif isinstance(x, CurrentElement) and isinstance(y, CurrentElement):
        result = current_bracket(x, y)
    else:
        raise ExprSyntaxError("Operands of a bracket must live in the same algebra", 0)
    return _specialize(result, config).render()


def cmd_table(config: CliConfig, kind: str) -> str:
    context = ExprContext.from_config(config)
    if kind == TableKind.RELATIONS.value and config.algebra.strip().lower() != "sl2":
        raise ValueError("Relation tables need --algebra sl2")
    document = build_table(kind, context.family, config.window, config.extended, config.assignments)
    return render_table(document, config.format)


def cmd_verify(
    config: CliConfig,
    checks: Sequence[str] | None = None,
    corrupt_cocycle: bool = False,
    sample: int | None = None,
    workers: int | None = None,
) -> tuple[str, int]:
    """Run the selected suites; returns the JSON report and the exit status.

    Suites that could not run (for example jacobi without a Lie algebra) map to
    the usage status, ahead of any violations.
    """
    context = ExprContext.from_config(config)
    selected = [CheckName(c) for c in checks] if checks else None
    verifier = Verifier(
        context.family,
        context.algebra,
        config.window,
        sample=sample,
        corrupt_cocycle=corrupt_cocycle,
        workers=workers,
    )
    response = verifier.run_all(selected)
    if response.errors:
        status = EXIT_USAGE
    else:
        status = EXIT_OK if response.clean else EXIT_VIOLATIONS
    return response.model_dump_json(indent=2), status


def cmd_degenerate(config: CliConfig, expressions: Sequence[str]) -> tuple[str, bool]:
    context = ExprContext.from_config(config)
    if not expressions:
        report = degeneration_check(context.family, config.window)
        return report.model_dump_json(indent=2), report.clean
    lines = [degenerate_element(parse_element(text, context)).render() for text in expressions]
    return "\n".join(lines), True


def run(args: argparse.Namespace) -> int:
    config = _config(args)
    if args.command == "describe":
        _emit(cmd_describe(config), args.out)
    elif args.command == "bracket":
        if len(args.expressions) > 2:
            raise ValueError("bracket takes one or two expressions")
        _emit(cmd_bracket(config, *args.expressions), args.out)
    elif args.command == "table":
        _emit(cmd_table(config, args.kind), args.out)
    elif args.command == "verify":
        checks = [c.strip() for c in args.checks.split(",") if c.strip()] if args.checks else None
        text, status = cmd_verify(config, checks, args.corrupt_cocycle, args.sample, args.workers)
        _emit(text, args.out)
        return status
    elif args.command == "degenerate":
        text, clean = cmd_degenerate(config, args.expressions)
        _emit(text, args.out)
        return EXIT_OK if clean else EXIT_VIOLATIONS
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    settings = get_settings()
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else settings.log_level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )
    try:
        return run(args)
    except ValidationError as e:
        message = "; ".join(err["msg"] for err in e.errors())
        print(f"knalg: error: {message}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as e:
        print(f"knalg: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ArithmeticError as e:
        logger.error(f"Computation failed: {e}")
        print(f"knalg: error: {e}", file=sys.stderr)
        return EXIT_VIOLATIONS


if __name__ == "__main__":
    sys.exit(main())
