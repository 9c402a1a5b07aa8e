# Copyright 2024 The FIDE-Schemes Authors.

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at

#     http://www.apache.org/licenses/LICENSE-2.0

# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
r"""
A small arithmetic expression language for forcing terms, kernels and exact solutions.

Grammar, from loosest to tightest binding::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := primary ('^' unary)?
    primary := NUMBER | IDENT | IDENT '(' expr (',' expr)* ')' | '(' expr ')'

``^`` is right associative and binds tighter than unary minus, so ``-x^2`` is
``-(x^2)`` and ``2^-1`` is ``0.5``. Grammars of the form
``factor := unary ('^' factor)?`` read ``-x^2`` as ``(-x)^2`` instead; here unary minus
always applies to the whole power.

The variables are ``x`` and ``t`` (standing for :math:`\tau`), the constants ``pi`` and
``e``, and the functions ``exp``, ``ln``, ``sqrt``, ``sin``, ``cos``, ``abs`` and ``gamma``.

**Example**

>>> expr = parse("x*exp(t)")
>>> evaluate(expr, x=2.0, t=0.0)
2.0
>>> to_source(expr)
'(x*exp(t))'
"""
import math
import re
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional, Tuple, Union

from ._exceptions import (
    ArityMismatch,
    DomainError,
    EvalError,
    ExprError,
    ExprSyntaxError,
    UnknownIdentifier,
)
from .core import gamma

VARIABLES = ("x", "t")

CONSTANTS: Dict[str, float] = {"pi": math.pi, "e": math.e}

FUNCTIONS: Dict[str, Callable[[float], float]] = {
    "exp": math.exp,
    "ln": math.log,
    "sqrt": math.sqrt,
    "sin": math.sin,
    "cos": math.cos,
    "abs": abs,
    "gamma": gamma,
}


@dataclass(frozen=True)
class Number:
    """Numeric literal."""

    value: float
    offset: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class Variable:
    """Reference to ``x`` or ``t``."""

    name: str
    offset: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class Unary:
    """Negation."""

    op: str
    operand: "Expr"
    offset: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class Binary:
    """Binary arithmetic operation, one of ``+ - * / ^``."""

    op: str
    left: "Expr"
    right: "Expr"
    offset: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class Call:
    """Function call, or a named constant when ``args`` is empty."""

    name: str
    args: Tuple["Expr", ...] = ()
    offset: int = field(default=-1, compare=False)


Expr = Union[Number, Variable, Unary, Binary, Call]


class Token(NamedTuple):
    kind: str
    text: str
    offset: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
    | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
    | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
    | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


def tokenize(source: str) -> List[Token]:
    """Split ``source`` into tokens carrying their byte offsets.

    The list always ends with an ``end`` token.
    """
    tokens = []
    pos = 0
    byte_pos = 0
    while pos < len(source):
        match = _TOKEN_RE.match(source, pos)
        if match is None:
            raise ExprSyntaxError(f"unexpected character {source[pos]!r}", byte_pos)
        kind = match.lastgroup
        text = match.group()
        if kind != "ws":
            tokens.append(Token(kind, text, byte_pos))
        pos = match.end()
        byte_pos += len(text.encode("utf-8"))
    tokens.append(Token("end", "", byte_pos))
    return tokens


class _Parser:
    """Recursive-descent parser over a token list."""

    def __init__(self, tokens: List[Token], variables: Iterable[str]):
        self.tokens = tokens
        self.pos = 0
        self.variables = frozenset(variables)

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def accept(self, text: str) -> bool:
        if self.current.kind == "op" and self.current.text == text:
            self.pos += 1
            return True
        return False

    def fail(self, expected: str):
        token = self.current
        found = "end of input" if token.kind == "end" else f"{token.text!r}"
        raise ExprSyntaxError(f"unexpected {found}", token.offset, expected)

    def expect(self, text: str):
        if not self.accept(text):
            self.fail(f"'{text}'")

    def parse(self) -> Expr:
        expr = self.expr()
        if self.current.kind != "end":
            self.fail("an operator or end of input")
        return expr

    def expr(self) -> Expr:
        node = self.term()
        while self.current.kind == "op" and self.current.text in "+-":
            op = self.advance()
            node = Binary(op.text, node, self.term(), op.offset)
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.current.kind == "op" and self.current.text in "*/":
            op = self.advance()
            node = Binary(op.text, node, self.unary(), op.offset)
        return node

    def unary(self) -> Expr:
        if self.current.kind == "op" and self.current.text == "-":
            op = self.advance()
            return Unary("-", self.unary(), op.offset)
        return self.power()

    def power(self) -> Expr:
        base = self.primary()
        if self.current.kind == "op" and self.current.text == "^":
            op = self.advance()
            return Binary("^", base, self.unary(), op.offset)
        return base

    def primary(self) -> Expr:
        token = self.current
        if token.kind == "number":
            self.advance()
            value = float(token.text)
            if not math.isfinite(value):
                raise ExprSyntaxError(f"number {token.text} is out of range", token.offset)
            return Number(value, token.offset)
        if token.kind == "ident":
            self.advance()
            return self.identifier(token)
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        self.fail("a number, a name or '('")

    def identifier(self, token: Token) -> Expr:
        name = token.text
        calling = self.current.kind == "op" and self.current.text == "("
        if name in self.variables and not calling:
            return Variable(name, token.offset)
        if name in CONSTANTS:
            if calling:
                self.advance()
                args = self.arguments()
                raise ArityMismatch(name, 0, len(args), token.offset)
            return Call(name, (), token.offset)
        if name in FUNCTIONS:
            if not calling:
                self.fail(f"'(' after function '{name}'")
            self.advance()
            args = self.arguments()
            if len(args) != 1:
                raise ArityMismatch(name, 1, len(args), token.offset)
            return Call(name, tuple(args), token.offset)
        raise UnknownIdentifier(name, token.offset)

    def arguments(self) -> List[Expr]:
        args = [self.expr()]
        while self.accept(","):
            args.append(self.expr())
        self.expect(")")
        return args


def parse(source: str, variables: Iterable[str] = VARIABLES) -> Expr:
    """Parse ``source`` into an expression tree.

    Args:
        source (str): expression text
        variables (Iterable[str]): names allowed as variables, a subset of ``("x", "t")``

    Returns:
        Expr: the root node

    Raises:
        ExprSyntaxError: if ``source`` does not follow the grammar
        UnknownIdentifier: if a name is not a variable, a constant or a function
        ArityMismatch: if a function is called with the wrong number of arguments
    """
    if not isinstance(source, str):
        raise TypeError(f"Expression source must be a string, got {type(source).__name__}")
    if source.strip() == "":
        raise ExprSyntaxError("empty expression", 0, "an expression")
    unknown = set(variables) - set(VARIABLES)
    if unknown:
        raise ValueError(f"Unsupported variable names {sorted(unknown)}; allowed are {VARIABLES}")
    return _Parser(tokenize(source), variables).parse()


def _power(base: float, exponent: float, node: Binary) -> float:
    if base < 0.0 and not float(exponent).is_integer():
        raise EvalError(
            f"negative base {base!r} raised to non-integer power {exponent!r}", node
        )
    if base == 0.0 and exponent < 0.0:
        raise EvalError("zero raised to a negative power", node)
    return math.pow(base, exponent)


def _evaluate(node: Expr, x: float, t: float) -> float:
    if isinstance(node, Number):
        return node.value
    if isinstance(node, Variable):
        return x if node.name == "x" else t
    if isinstance(node, Unary):
        return -_evaluate(node.operand, x, t)
    if isinstance(node, Binary):
        left = _evaluate(node.left, x, t)
        right = _evaluate(node.right, x, t)
        try:
            if node.op == "+":
                value = left + right
            elif node.op == "-":
                value = left - right
            elif node.op == "*":
                value = left * right
            elif node.op == "/":
                if right == 0.0:
                    raise EvalError("division by zero", node)
                value = left / right
            else:
                value = _power(left, right, node)
        except OverflowError:
            raise EvalError(f"overflow in '{node.op}'", node) from None
    elif isinstance(node, Call):
        if not node.args:
            return CONSTANTS[node.name]
        arg = _evaluate(node.args[0], x, t)
        try:
            value = float(FUNCTIONS[node.name](arg))
        except (ValueError, DomainError) as e:
            raise EvalError(f"{node.name}({arg!r}) is undefined: {e}", node) from None
        except OverflowError:
            raise EvalError(f"{node.name}({arg!r}) overflows", node) from None
    else:
        raise TypeError(f"Not an expression node: {node!r}")
    if not math.isfinite(value):
        raise EvalError(f"non-finite result {value!r}", node)
    return value


def evaluate(expr: Expr, x: float = 0.0, t: float = 0.0) -> float:
    """Evaluate an expression tree at the point ``(x, t)``.

    Raises:
        EvalError: on division by zero, domain violations or a non-finite result
    """
    return _evaluate(expr, float(x), float(t))


def scalar_function(expr: Expr, field_name: Optional[str] = None) -> Callable[[float], float]:
    """Wrap an expression in ``x`` as a scalar callable.

    Evaluation errors are tagged with ``field_name`` when it is given.
    """

    def f(x: float) -> float:
        try:
            return _evaluate(expr, float(x), 0.0)
        except ExprError as e:
            if field_name is not None:
                e.in_field(field_name)
            raise

    return f


def kernel_function(
    expr: Expr, field_name: Optional[str] = None
) -> Callable[[float, float], float]:
    """Wrap an expression in ``x`` and ``t`` as a kernel callable."""

    def kernel(x: float, t: float) -> float:
        try:
            return _evaluate(expr, float(x), float(t))
        except ExprError as e:
            if field_name is not None:
                e.in_field(field_name)
            raise

    return kernel


def to_source(expr: Expr) -> str:
    """Render an expression tree as fully parenthesized source text.

    Parsing the result gives back a tree equal to ``expr``.
    """
    if isinstance(expr, Number):
        return repr(float(expr.value))
    if isinstance(expr, Variable):
        return expr.name
    if isinstance(expr, Unary):
        return f"(-{to_source(expr.operand)})"
    if isinstance(expr, Binary):
        return f"({to_source(expr.left)}{expr.op}{to_source(expr.right)})"
    if isinstance(expr, Call):
        if not expr.args:
            return expr.name
        return f"{expr.name}({', '.join(to_source(a) for a in expr.args)})"
    raise TypeError(f"Not an expression node: {expr!r}")


__all__ = [
    "Binary",
    "Call",
    "Expr",
    "ExprError",
    "Number",
    "Unary",
    "Variable",
    "evaluate",
    "kernel_function",
    "parse",
    "scalar_function",
    "to_source",
    "tokenize",
]
