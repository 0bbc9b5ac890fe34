"""A tiny expression language for vector-valued maps R^n -> R^m.

Grammar (also documented in the README):

    source  := [ 'arity' INT ':' ] expr (';' expr)*
    expr    := term (('+'|'-') term)*
    term    := factor (('*'|'/') factor)*
    factor  := '-' factor | power
    power   := atom ('^' ['-'] INT)*
    atom    := NUMBER | 'x' INT | '(' expr ')' | FUNC '(' expr (',' expr)* ')'
    FUNC    := sin | cos | exp | sqrt | atan2

Numbers are decimal literals and are stored as exact rationals
(``2.5`` means exactly 5/2).  Coordinates are ``x1 .. xn``; the map arity is
the largest coordinate index referenced unless the optional ``arity N:``
prefix pins it (needed for constant components such as ``arity 2: 1; 0``).

Trees without transcendental calls evaluate in exact rational arithmetic
whenever the input point is exact; everything else evaluates in floats.
Partial functions never produce silent NaNs or infinities: division by
zero, sqrt of a negative number and overflow raise EvalDomainError.

MapExpr values are immutable after parsing and evaluation is pure, so a
single instance may be evaluated from many threads concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import DimensionMismatchError, EvalDomainError, ParseError

Number = Union[Fraction, float]

_FUNCTIONS = {"sin": 1, "cos": 1, "exp": 1, "sqrt": 1, "atan2": 2}


# --- AST ---------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: Fraction


@dataclass(frozen=True)
class Var:
    index: int  # 1-based


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: object
    right: object


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple


# --- Lexer -------------------------------------------------------------

_SYMBOLS = set("+-*/^();,:")


@dataclass(frozen=True)
class _Token:
    kind: str  # NUMBER | NAME | SYMBOL | END
    text: str
    line: int
    column: int


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        start_col = col
        if ch.isdigit() or (ch == "." and i + 1 < n and source[i + 1].isdigit()):
            j = i
            seen_dot = False
            while j < n and (source[j].isdigit() or (source[j] == "." and not seen_dot)):
                if source[j] == ".":
                    seen_dot = True
                j += 1
            tokens.append(_Token("NUMBER", source[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            tokens.append(_Token("NAME", source[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch in _SYMBOLS:
            tokens.append(_Token("SYMBOL", ch, line, start_col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, start_col)
    tokens.append(_Token("END", "", line, col))
    return tokens


# --- Parser ------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_symbol(self, sym: str) -> _Token:
        tok = self.peek()
        if tok.kind != "SYMBOL" or tok.text != sym:
            raise ParseError(f"expected {sym!r}, found {tok.text!r}", tok.line, tok.column)
        return self.advance()

    def at_symbol(self, *symbols: str) -> bool:
        tok = self.peek()
        return tok.kind == "SYMBOL" and tok.text in symbols

    def parse_expr(self):
        node = self.parse_term()
        while self.at_symbol("+", "-"):
            op = self.advance().text
            node = BinOp(op, node, self.parse_term())
        return node

    def parse_term(self):
        node = self.parse_factor()
        while self.at_symbol("*", "/"):
            op = self.advance().text
            node = BinOp(op, node, self.parse_factor())
        return node

    def parse_factor(self):
        if self.at_symbol("-"):
            self.advance()
            return Neg(self.parse_factor())
        return self.parse_power()

    def parse_power(self):
        node = self.parse_atom()
        while self.at_symbol("^"):
            self.advance()
            sign = 1
            if self.at_symbol("-"):
                self.advance()
                sign = -1
            tok = self.peek()
            if tok.kind != "NUMBER" or "." in tok.text:
                raise ParseError("exponent must be an integer literal", tok.line, tok.column)
            self.advance()
            node = Pow(node, sign * int(tok.text))
        return node

    def parse_atom(self):
        tok = self.peek()
        if tok.kind == "NUMBER":
            self.advance()
            return Const(Fraction(tok.text))
        if tok.kind == "NAME":
            name = tok.text
            if name.startswith("x") and name[1:].isdigit():
                self.advance()
                index = int(name[1:])
                if index < 1:
                    raise ParseError("coordinate indices start at x1", tok.line, tok.column)
                return Var(index)
            if name in _FUNCTIONS:
                self.advance()
                self.expect_symbol("(")
                args = [self.parse_expr()]
                while self.at_symbol(","):
                    self.advance()
                    args.append(self.parse_expr())
                close = self.expect_symbol(")")
                if len(args) != _FUNCTIONS[name]:
                    raise ParseError(
                        f"{name} takes {_FUNCTIONS[name]} argument(s), got {len(args)}",
                        close.line,
                        close.column,
                    )
                return Call(name, tuple(args))
            raise ParseError(f"unknown name {name!r}", tok.line, tok.column)
        if self.at_symbol("("):
            self.advance()
            node = self.parse_expr()
            self.expect_symbol(")")
            return node
        raise ParseError(f"expected a value, found {tok.text!r}", tok.line, tok.column)


def _max_var(node) -> int:
    if isinstance(node, Var):
        return node.index
    if isinstance(node, Const):
        return 0
    if isinstance(node, BinOp):
        return max(_max_var(node.left), _max_var(node.right))
    if isinstance(node, Neg):
        return _max_var(node.operand)
    if isinstance(node, Pow):
        return _max_var(node.base)
    if isinstance(node, Call):
        return max((_max_var(a) for a in node.args), default=0)
    raise TypeError(node)


def _has_call(node) -> bool:
    if isinstance(node, (Var, Const)):
        return False
    if isinstance(node, BinOp):
        return _has_call(node.left) or _has_call(node.right)
    if isinstance(node, Neg):
        return _has_call(node.operand)
    if isinstance(node, Pow):
        return _has_call(node.base)
    if isinstance(node, Call):
        return True
    raise TypeError(node)


# --- Evaluation --------------------------------------------------------


def _eval_node(node, point) -> Number:
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return point[node.index - 1]
    if isinstance(node, Neg):
        return -_eval_node(node.operand, point)
    if isinstance(node, BinOp):
        a = _eval_node(node.left, point)
        b = _eval_node(node.right, point)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        try:
            return a / b
        except ZeroDivisionError:
            raise EvalDomainError("division by zero") from None
    if isinstance(node, Pow):
        base = _eval_node(node.base, point)
        if node.exponent < 0 and base == 0:
            raise EvalDomainError("zero raised to a negative power")
        try:
            return base**node.exponent
        except OverflowError:
            raise EvalDomainError("overflow in power") from None
    if isinstance(node, Call):
        args = [float(_eval_node(a, point)) for a in node.args]
        try:
            if node.func == "sin":
                return math.sin(args[0])
            if node.func == "cos":
                return math.cos(args[0])
            if node.func == "exp":
                return math.exp(args[0])
            if node.func == "sqrt":
                if args[0] < 0:
                    raise EvalDomainError("sqrt of a negative number")
                return math.sqrt(args[0])
            if node.func == "atan2":
                return math.atan2(args[0], args[1])
        except OverflowError:
            raise EvalDomainError(f"overflow in {node.func}") from None
        raise TypeError(node.func)
    raise TypeError(node)


@dataclass(frozen=True)
class EvalResult:
    """Values plus the arithmetic mode that produced them."""

    values: tuple
    exact: bool


def _codegen(node) -> str:
    """Source of a pure-float expression mirroring the tree shape, used to
    compile a fast evaluator for float inputs."""
    if isinstance(node, Const):
        return repr(float(node.value))
    if isinstance(node, Var):
        return f"p[{node.index - 1}]"
    if isinstance(node, BinOp):
        return f"({_codegen(node.left)} {node.op} {_codegen(node.right)})"
    if isinstance(node, Neg):
        return f"(-{_codegen(node.operand)})"
    if isinstance(node, Pow):
        return f"({_codegen(node.base)}**({node.exponent}))"
    if isinstance(node, Call):
        args = ", ".join(_codegen(a) for a in node.args)
        return f"math.{node.func}({args})"
    raise TypeError(node)


@dataclass(frozen=True)
class MapExpr:
    """An immutable parsed map R^arity -> R^len(components)."""

    components: tuple
    arity: int

    @property
    def codomain_dim(self) -> int:
        return len(self.components)

    @property
    def is_rational(self) -> bool:
        """True when the tree contains no transcendental calls, so exact
        inputs evaluate exactly."""
        cached = getattr(self, "_rational", None)
        if cached is None:
            cached = not any(_has_call(c) for c in self.components)
            object.__setattr__(self, "_rational", cached)
        return cached

    def _float_fn(self):
        fn = getattr(self, "_compiled", None)
        if fn is None:
            body = ", ".join(_codegen(c) for c in self.components)
            fn = eval(  # compiled from our own AST; no external input reaches here
                compile(f"lambda p: ({body},)", "<mapexpr>", "eval"),
                {"math": math, "__builtins__": {}},
            )
            object.__setattr__(self, "_compiled", fn)
        return fn

    def __call__(self, point) -> tuple:
        if len(point) != self.arity:
            raise DimensionMismatchError(
                f"expected a point of dimension {self.arity}, got {len(point)}"
            )
        if self.is_rational and all(isinstance(v, (int, Fraction)) for v in point):
            return tuple(_eval_node(c, point) for c in self.components)
        floats = tuple(float(v) for v in point)
        try:
            values = self._float_fn()(floats)
        except ZeroDivisionError:
            raise EvalDomainError("division by zero") from None
        except ValueError:
            raise EvalDomainError("function argument outside its domain") from None
        except OverflowError:
            raise EvalDomainError("overflow during evaluation") from None
        for v in values:
            if not math.isfinite(v):
                raise EvalDomainError("non-finite evaluation result")
        return values

    def evaluate(self, point) -> EvalResult:
        values = self(point)
        exact = all(isinstance(v, (Fraction, int)) for v in values)
        return EvalResult(values, exact)

    def to_source(self) -> str:
        return "; ".join(_print_node(c, 0) for c in self.components)


def parse(source: str, arity: int | None = None) -> MapExpr:
    """Parse a semicolon-separated list of scalar expressions.

    ``arity`` (or the equivalent ``arity N:`` source prefix) pins the input
    dimension; otherwise it is the largest coordinate index referenced.
    Raises ParseError with line/column on bad syntax and on a mismatch
    between an explicit annotation and the coordinates actually used.
    """
    tokens = _tokenize(source)
    parser = _Parser(tokens)

    declared = arity
    tok = parser.peek()
    if tok.kind == "NAME" and tok.text == "arity":
        parser.advance()
        num = parser.peek()
        if num.kind != "NUMBER" or "." in num.text:
            raise ParseError("arity annotation must be an integer", num.line, num.column)
        parser.advance()
        parser.expect_symbol(":")
        annotated = int(num.text)
        if declared is not None and declared != annotated:
            raise ParseError(
                f"arity annotation {annotated} conflicts with requested arity {declared}",
                num.line,
                num.column,
            )
        declared = annotated

    components = [parser.parse_expr()]
    while parser.at_symbol(";"):
        parser.advance()
        components.append(parser.parse_expr())
    end = parser.peek()
    if end.kind != "END":
        raise ParseError(f"trailing input {end.text!r}", end.line, end.column)

    used = max((_max_var(c) for c in components), default=0)
    if declared is None:
        final_arity = used
    else:
        if used > declared:
            raise ParseError(
                f"coordinate x{used} exceeds declared arity {declared}", 1, 1
            )
        final_arity = declared
    return MapExpr(tuple(components), final_arity)


# --- Printer -----------------------------------------------------------

# precedence levels: 0 add, 1 mul, 2 unary, 3 power, 4 atom
def _print_node(node, parent_level: int) -> str:
    if isinstance(node, Const):
        v = node.value
        if v.denominator == 1:
            text = str(v.numerator)
        else:
            text = f"({v.numerator}/{v.denominator})"
        if v < 0 and parent_level > 0 and not text.startswith("("):
            text = f"({text})"
        return text
    if isinstance(node, Var):
        return f"x{node.index}"
    if isinstance(node, BinOp):
        level = 0 if node.op in "+-" else 1
        left = _print_node(node.left, level)
        # right side binds one tighter so a-b-c round-trips as (a-b)-c
        right = _print_node(node.right, level + 1)
        text = f"{left} {node.op} {right}"
        if parent_level > level:
            text = f"({text})"
        return text
    if isinstance(node, Neg):
        text = f"-{_print_node(node.operand, 2)}"
        if parent_level > 2:
            text = f"({text})"
        return text
    if isinstance(node, Pow):
        base = _print_node(node.base, 4)
        exp = str(node.exponent) if node.exponent >= 0 else f"-{-node.exponent}"
        return f"{base}^{exp}"
    if isinstance(node, Call):
        args = ", ".join(_print_node(a, 0) for a in node.args)
        return f"{node.func}({args})"
    raise TypeError(node)
