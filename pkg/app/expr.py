"""Expression language for current algebra elements.

Grammar (whitespace-insensitive)::

    expr   := ['-'] term (('+' | '-') term)*
    term   := power ('*' power)*
    power  := atom ['^' INT]
    atom   := RATIONAL | PARAM | 't' | IDENT '(' ['-'] INT ')'
            | '[' expr ',' expr ']' | '(' expr ')'

``IDENT(n)`` is the basis element IDENT tensored with A_n (``A(n)`` alone in
the function-only context).  ``t`` is the central generator and is reserved in
every context.  The canonical renderings of elements parse back to the same
element.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from app.coefficients import ParamPoly
from app.config import CliConfig, family_from_settings
from app.current import CurrentElement, current_bracket
from app.exceptions import ExprSyntaxError, UnknownGeneratorError
from app.extensions import Cocycle, ExtendedElement, extended_bracket, standard_cocycle
from app.families import FunctionFamily
from app.finite_lie import FiniteLieAlgebra, parse_algebra_spec
from app.functions import FnElement, fn_mul

CENTRAL = "t"
FUNCTION_LABEL = "A"

_TOKEN = re.compile(
    r"\s*(?:(?P<number>\d+(?:/\d+)?)|(?P<ident>[A-Za-z_]\w*(?:\[\d+(?:,\d+)?\])?'*)|(?P<op>[-+*^(),\[\]]))"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


def tokenize(text: str) -> list[Token]:
    """Split into number, identifier and operator tokens, ending with an 'end' token."""
    tokens = []
    position = 0
    while True:
        while position < len(text) and text[position].isspace():
            position += 1
        if position >= len(text):
            break
        match = _TOKEN.match(text, position)
        if not match or match.end() == position:
            raise ExprSyntaxError(f"Unexpected character {text[position]!r}", position)
        kind = match.lastgroup or "op"
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        position = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


# -- AST ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Number:
    value: Fraction
    position: int


@dataclass(frozen=True)
class Param:
    name: str
    position: int


@dataclass(frozen=True)
class Central:
    position: int


@dataclass(frozen=True)
class Generator:
    label: str
    degree: int
    position: int


@dataclass(frozen=True)
class Neg:
    operand: ExprAst
    position: int


@dataclass(frozen=True)
class BinOp:
    op: str
    left: ExprAst
    right: ExprAst
    position: int


@dataclass(frozen=True)
class Power:
    base: ExprAst
    exponent: int
    position: int


@dataclass(frozen=True)
class Bracket:
    left: ExprAst
    right: ExprAst
    position: int


ExprAst = Union[Number, Param, Central, Generator, Neg, BinOp, Power, Bracket]


# -- context -----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ExprContext:
    """Where names resolve: a family, an optional Lie algebra and the extension flag."""

    family: FunctionFamily
    algebra: FiniteLieAlgebra | None = None
    extended: bool = False
    cocycle: Cocycle | None = None

    @classmethod
    def from_config(cls, config: CliConfig) -> ExprContext:
        family = family_from_settings(config.family)
        algebra = None if config.function_only else parse_algebra_spec(config.algebra)
        return cls(family, algebra, config.extended)

    @property
    def function_only(self) -> bool:
        return self.algebra is None

    @property
    def psi(self) -> Cocycle:
        if self.algebra is None:
            raise ValueError("The function algebra alone has no central extension")
        return self.cocycle or standard_cocycle(self.algebra, self.family)

    @property
    def labels(self) -> tuple[str, ...]:
        return (FUNCTION_LABEL,) if self.algebra is None else self.algebra.labels

    def check_label(self, label: str, position: int) -> None:
        if label not in self.labels:
            scope = "the function algebra" if self.algebra is None else self.algebra.name
            raise UnknownGeneratorError(
                f"Unknown generator '{label}' at position {position} in {scope}. "
                f"Available: {', '.join(self.labels)}"
            )


# -- parser ------------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str, context: ExprContext):
        self.text = text
        self.context = context
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def expect(self, text: str) -> Token:
        token = self.current
        if token.kind == "end" or token.text != text:
            found = "end of input" if token.kind == "end" else repr(token.text)
            raise ExprSyntaxError(f"Expected '{text}', found {found}", token.position)
        return self.advance()

    def parse(self) -> ExprAst:
        node = self.expr()
        if self.current.kind != "end":
            raise ExprSyntaxError(f"Unexpected {self.current.text!r}", self.current.position)
        return node

    def expr(self) -> ExprAst:
        if self.current.text == "-":
            start = self.advance().position
            node: ExprAst = Neg(self.term(), start)
        else:
            node = self.term()
        while self.current.text in ("+", "-"):
            op = self.advance()
            node = BinOp(op.text, node, self.term(), op.position)
        return node

    def term(self) -> ExprAst:
        node = self.power()
        while self.current.text == "*":
            op = self.advance()
            node = BinOp("*", node, self.power(), op.position)
        return node

    def power(self) -> ExprAst:
        node = self.atom()
        if self.current.text == "^":
            op = self.advance()
            node = Power(node, self.integer(allow_sign=False), op.position)
        return node

    def integer(self, allow_sign: bool = True) -> int:
        sign = 1
        if allow_sign and self.current.text in ("-", "+"):
            sign = -1 if self.advance().text == "-" else 1
        token = self.current
        if token.kind != "number" or "/" in token.text:
            found = "end of input" if token.kind == "end" else repr(token.text)
            raise ExprSyntaxError(f"Expected an integer, found {found}", token.position)
        self.advance()
        return sign * int(token.text)

    def atom(self) -> ExprAst:
        token = self.current
        if token.kind == "number":
            self.advance()
            return Number(Fraction(token.text), token.position)
        if token.text == "[":
            self.advance()
            left = self.expr()
            self.expect(",")
            right = self.expr()
            self.expect("]")
            return Bracket(left, right, token.position)
        if token.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if token.kind == "ident":
            self.advance()
            return self.identifier(token)
        found = "end of input" if token.kind == "end" else repr(token.text)
        raise ExprSyntaxError(f"Unexpected {found}", token.position)

    def identifier(self, token: Token) -> ExprAst:
        name = token.text
        if self.current.text == "(":
            if name == CENTRAL:
                raise ExprSyntaxError("'t' is the central generator and takes no degree", token.position)
            self.context.check_label(name, token.position)
            self.advance()
            degree = self.integer()
            self.expect(")")
            return Generator(name, degree, token.position)
        if name == CENTRAL:
            return Central(token.position)
        if name in self.context.family.parameters:
            return Param(name, token.position)
        raise UnknownGeneratorError(
            f"Unknown name '{name}' at position {token.position}; parameters of "
            f"{self.context.family.name}: {', '.join(self.context.family.parameters) or 'none'}"
        )


def parse_expr(text: str, context: ExprContext | CliConfig) -> ExprAst:
    """
    Parse an element expression.

    Args:
        text: Source text, e.g. ``[e(1), f(1)]`` or ``h(0) - 2*t``
        context: Resolution context, or a CLI configuration to build one from

    Returns:
        The expression tree

    Raises:
        ExprSyntaxError: On malformed input, with the offending position
        UnknownGeneratorError: If a name is neither a generator nor a parameter
    """
    if not isinstance(context, ExprContext):
        context = ExprContext.from_config(context)
    return _Parser(text, context).parse()


# -- evaluation --------------------------------------------------------------------

Value = Union[ParamPoly, ExtendedElement, FnElement]
Element = Union[CurrentElement, ExtendedElement, FnElement]


class _Evaluator:
    def __init__(self, context: ExprContext):
        self.context = context

    def zero(self) -> ExtendedElement | FnElement:
        context = self.context
        if context.algebra is None:
            return FnElement.zero(context.family)
        return ExtendedElement.lift(CurrentElement.zero(context.algebra, context.family))

    def as_element(self, value: Value, position: int) -> ExtendedElement | FnElement:
        if not isinstance(value, ParamPoly):
            return value
        if value.is_zero():
            return self.zero()
        if self.context.algebra is None:
            return FnElement.basis(self.context.family, 0, value)
        raise ExprSyntaxError(f"Scalar {value} used where an element is required", position)

    def evaluate(self, node: ExprAst) -> Value:
        context = self.context
        match node:
            case Number(value=value):
                return ParamPoly.constant(value)
            case Param(name=name):
                return ParamPoly.parameter(name, context.family.parameters)
            case Central(position=position):
                if context.algebra is None or not context.extended:
                    raise UnknownGeneratorError(
                        f"The central generator 't' at position {position} needs an extended algebra"
                    )
                return ExtendedElement.central_generator(context.algebra, context.family)
            case Generator(label=label, degree=degree):
                if context.algebra is None:
                    return FnElement.basis(context.family, degree)
                return ExtendedElement.lift(
                    CurrentElement.generator(context.algebra, context.family, label, degree)
                )
            case Neg(operand=operand):
                value = self.evaluate(operand)
                return value.scale(-1) if not isinstance(value, ParamPoly) else -value
            case Power(base=base, exponent=exponent, position=position):
                value = self.evaluate(base)
                if not isinstance(value, ParamPoly):
                    raise ExprSyntaxError("Only scalars can be raised to a power", position)
                return value**exponent
            case BinOp(op=op, left=left, right=right, position=position):
                return self.binary(op, self.evaluate(left), self.evaluate(right), position)
            case Bracket(left=left, right=right, position=position):
                x = self.as_element(self.evaluate(left), position)
                y = self.as_element(self.evaluate(right), position)
                if isinstance(x, FnElement):
                    return FnElement.zero(context.family)
                if context.extended:
                    return extended_bracket(context.psi, x, y)
                return ExtendedElement.lift(current_bracket(x.current, y.current))
        raise ExprSyntaxError(f"Cannot evaluate {node!r}", 0)

    def binary(self, op: str, a: Value, b: Value, position: int) -> Value:
        if op == "*":
            if isinstance(a, ParamPoly) and isinstance(b, ParamPoly):
                return a * b
            if isinstance(a, ParamPoly):
                return b.scale(a)  # type: ignore[union-attr]
            if isinstance(b, ParamPoly):
                return a.scale(b)
            if isinstance(a, FnElement) and isinstance(b, FnElement):
                return fn_mul(a, b)
            raise ExprSyntaxError("Elements of a Lie algebra multiply only through [x, y]", position)
        if isinstance(a, ParamPoly) and isinstance(b, ParamPoly):
            return a + b if op == "+" else a - b
        x, y = self.as_element(a, position), self.as_element(b, position)
        return x + y if op == "+" else x - y  # type: ignore[operator]


def evaluate(node: ExprAst, context: ExprContext) -> Element:
    """
    Evaluate a parsed expression.

    Returns:
        A FnElement in the function-only context, an ExtendedElement when the
        context is extended, and a CurrentElement otherwise
    """
    evaluator = _Evaluator(context)
    value = evaluator.as_element(evaluator.evaluate(node), 0)
    if isinstance(value, ExtendedElement) and not context.extended:
        return value.current
    return value


def parse_element(text: str, context: ExprContext) -> Element:
    """Parse and evaluate in one step."""
    return evaluate(parse_expr(text, context), context)
