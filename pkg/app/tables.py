"""Structure-constant, cocycle and relation tables in CSV, JSON and markdown."""

import csv
import io
import logging
from collections.abc import Mapping
from fractions import Fraction
from itertools import product
from pathlib import Path

from app.coefficients import ParamPoly
from app.extensions import SL2_RELATIONS, sl2_relations
from app.families import FunctionFamily
from app.functions import Window
from app.models import CocycleRow, ProductRow, TableDocument, TableKind
from app.models import Window as WindowModel

logger = logging.getLogger(__name__)

FORMATS = ("json", "csv", "markdown")


def _specialize(value: ParamPoly, assignments: Mapping[str, Fraction] | None) -> ParamPoly:
    if not assignments or not value.parameters:
        return value
    return value.substitute(assignments)


def product_rows(
    family: FunctionFamily, window: Window, assignments: Mapping[str, Fraction] | None = None
) -> list[ProductRow]:
    """A_n * A_m = sum c_h A_h for n, m in the window; n, m ascending, h descending."""
    rows = []
    for n, m in product(window.degrees, repeat=2):
        terms = family.basis_product(n, m)
        for h in sorted(terms, reverse=True):
            coefficient = _specialize(terms[h], assignments)
            if coefficient:
                rows.append(ProductRow(n=n, m=m, h=h, coefficient=coefficient.render()))
    return rows


def cocycle_rows(
    family: FunctionFamily, window: Window, assignments: Mapping[str, Fraction] | None = None
) -> list[CocycleRow]:
    """omega(A_n, A_m) for every pair in the window, zeros included."""
    return [
        CocycleRow(n=n, m=m, value=_specialize(family.basis_pairing(n, m), assignments).render())
        for n, m in product(window.degrees, repeat=2)
    ]


def relation_lines(family: FunctionFamily, window: Window, extended: bool = False) -> list[str]:
    """The sl(2) relations [e(n), f(m)], [h(n), e(m)] and [h(n), f(m)] over the window."""
    return [
        sl2_relations(kind, n, m, family, extended)
        for kind in SL2_RELATIONS
        for n, m in product(window.degrees, repeat=2)
    ]


def build_table(
    kind: TableKind | str,
    family: FunctionFamily,
    window: Window,
    extended: bool = False,
    assignments: Mapping[str, Fraction] | None = None,
) -> TableDocument:
    """
    Compute one table.

    Args:
        kind: 'product', 'cocycle' or 'relations'
        family: Function algebra family
        window: Degrees n and m range over this window
        extended: Relations of the centrally extended sl(2) current algebra
        assignments: Parameter values substituted into every coefficient

    Returns:
        The table document with rows in deterministic order
    """
    kind = TableKind(kind)
    if kind == TableKind.PRODUCT:
        rows: list = product_rows(family, window, assignments)
    elif kind == TableKind.COCYCLE:
        rows = cocycle_rows(family, window, assignments)
    else:
        rows = relation_lines(family, window, extended)
        if assignments:
            logger.warning("Parameter assignments are ignored for relation tables")
    return TableDocument(
        kind=kind, family=family.name, window=WindowModel(lo=window.lo, hi=window.hi), rows=rows
    )


def _columns(document: TableDocument) -> list[str]:
    if document.kind == TableKind.PRODUCT:
        return ["n", "m", "h", "coefficient"]
    if document.kind == TableKind.COCYCLE:
        return ["n", "m", "value"]
    return ["relation"]


def _cells(document: TableDocument) -> list[list[str]]:
    if document.kind == TableKind.RELATIONS:
        return [[line] for line in document.rows]  # type: ignore[list-item]
    columns = _columns(document)
    return [[str(getattr(row, c)) for c in columns] for row in document.rows]


def render_table(document: TableDocument, fmt: str = "csv") -> str:
    """
    Serialize a table.

    Raises:
        ValueError: If the format is not supported
    """
    if fmt == "json":
        return document.model_dump_json(indent=2) + "\n"
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(_columns(document))
        writer.writerows(_cells(document))
        return buffer.getvalue()
    if fmt == "markdown":
        columns = _columns(document)
        lines = [
            "| " + " | ".join(columns) + " |",
            "|" + "|".join("---" for _ in columns) + "|",
        ]
        lines.extend("| " + " | ".join(cells) + " |" for cells in _cells(document))
        return "\n".join(lines) + "\n"
    raise ValueError(f"Unknown format '{fmt}'. Available: {', '.join(FORMATS)}")


def write_table(text: str, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="\n")
    logger.info(f"Wrote {len(text.splitlines())} lines to {path}")


def golden_name(
    family: FunctionFamily, kind: TableKind | str, window: Window, extended: bool = False
) -> str:
    """File name of a golden table, e.g. ``threepoint_product_-3_3.csv``."""
    suffix = "_extended" if extended else ""
    return f"{family.name}_{TableKind(kind).value}{suffix}_{window.lo}_{window.hi}.csv"
