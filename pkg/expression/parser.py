"""Mini-language for functions on (-1, 1).

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?
    atom   := number | 'x' | 'w' | 'pi' | 'e' | name '(' expr (',' expr)* ')' | '(' expr ')'

Functions: log, exp, sqrt, abs, sin, cos and chi(a, b), the indicator of
[a, b) with constant a < b in [-1, 1]. The parsed handle carries its
regularity: chi gives jumps, a top-level factor 1/w or w becomes the weight
power, log / sqrt / abs / division by a non-constant mark endpoint behaviour.
"""
import logging
import re
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from quadrature.coordinates import AnchoredPoints, DualPoint
from quadrature.function_handle import FunctionHandle, Regularity, StepPiece, _step_values, weight_of
from utils.errors import ExpressionError

logger = logging.getLogger(__name__)

_TOKEN = re.compile(r"\s*(?:(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^(),]))")

FUNCTIONS = {
    "log": np.log,
    "exp": np.exp,
    "sqrt": np.sqrt,
    "abs": np.abs,
    "sin": np.sin,
    "cos": np.cos,
}
ENDPOINT_FUNCTIONS = {"log", "sqrt", "abs"}
CONSTANTS = {"pi": np.pi, "e": np.e}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


# --- syntax tree ---

@dataclass(frozen=True)
class Num:
    value: float
    pos: int


@dataclass(frozen=True)
class Var:
    name: str
    pos: int


@dataclass(frozen=True)
class Unary:
    operand: object
    pos: int


@dataclass(frozen=True)
class Binary:
    op: str
    left: object
    right: object
    pos: int


@dataclass(frozen=True)
class Call:
    name: str
    args: Tuple
    pos: int


@dataclass(frozen=True)
class Chi:
    left: float
    right: float
    pos: int


def _location(source, pos):
    line = source.count("\n", 0, pos) + 1
    column = pos - (source.rfind("\n", 0, pos) + 1) + 1
    return line, column


def tokenize(source):
    tokens, pos = [], 0
    while pos < len(source):
        if source[pos:].strip() == "":
            break
        match = _TOKEN.match(source, pos)
        if not match:
            start = len(source[pos:]) - len(source[pos:].lstrip()) + pos
            line, column = _location(source, start)
            raise ExpressionError(f"unexpected character {source[start]!r}", line, column)
        kind = match.lastgroup
        start = match.start(kind)
        tokens.append(Token(kind, match.group(kind), start))
        pos = match.end()
    tokens.append(Token("end", "", len(source)))
    return tokens


class Parser:
    def __init__(self, source):
        self.source = source
        self.tokens = tokenize(source)
        self.index = 0

    def error(self, message, pos=None):
        pos = self.peek.pos if pos is None else pos
        line, column = _location(self.source, pos)
        return ExpressionError(message, line, column)

    @property
    def peek(self):
        return self.tokens[self.index]

    def take(self, text=None):
        token = self.peek
        if text is not None and token.text != text:
            found = token.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        self.index += 1
        return token

    def parse(self):
        if self.peek.kind == "end":
            raise self.error("empty expression")
        node = self.expr()
        if self.peek.kind != "end":
            raise self.error(f"unexpected {self.peek.text!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek.text in ("+", "-"):
            op = self.take()
            node = Binary(op.text, node, self.term(), op.pos)
        return node

    def term(self):
        node = self.unary()
        while self.peek.text in ("*", "/"):
            op = self.take()
            node = Binary(op.text, node, self.unary(), op.pos)
        return node

    def unary(self):
        if self.peek.text == "-":
            op = self.take()
            return Unary(self.unary(), op.pos)
        if self.peek.text == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek.text == "^":
            op = self.take()
            node = Binary("^", node, self.unary(), op.pos)
        return node

    def atom(self):
        token = self.peek
        if token.kind == "number":
            self.take()
            return Num(float(token.text), token.pos)
        if token.text == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        if token.kind == "name":
            self.take()
            if self.peek.text == "(":
                return self.call(token)
            if token.text in ("x", "w"):
                return Var(token.text, token.pos)
            if token.text in CONSTANTS:
                return Num(CONSTANTS[token.text], token.pos)
            raise self.error(f"unknown name {token.text!r}", token.pos)
        found = token.text or "end of input"
        raise self.error(f"unexpected {found!r}")

    def call(self, name):
        self.take("(")
        args = [self.expr()]
        while self.peek.text == ",":
            self.take()
            args.append(self.expr())
        self.take(")")
        if name.text == "chi":
            if len(args) != 2:
                raise self.error("chi takes two arguments", name.pos)
            left, right = (self.constant(a) for a in args)
            if not -1.0 <= left < right <= 1.0:
                raise self.error(f"chi({left:g}, {right:g}) needs -1 <= a < b <= 1", name.pos)
            return Chi(left, right, name.pos)
        if name.text not in FUNCTIONS:
            raise self.error(f"unknown function {name.text!r}", name.pos)
        if len(args) != 1:
            raise self.error(f"{name.text} takes one argument", name.pos)
        return Call(name.text, tuple(args), name.pos)

    def constant(self, node):
        if _depends_on_x(node):
            raise self.error("chi bounds must be constants", node.pos)
        with np.errstate(all="ignore"):
            value = float(evaluate(node, np.zeros(1), np.ones(1))[0])
        if not np.isfinite(value):
            raise self.error("chi bound is not finite", node.pos)
        return value


# --- analysis ---

def _children(node):
    if isinstance(node, Unary):
        return (node.operand,)
    if isinstance(node, Binary):
        return (node.left, node.right)
    if isinstance(node, Call):
        return node.args
    return ()


def _walk(node):
    yield node
    for child in _children(node):
        yield from _walk(child)


def _depends_on_x(node):
    return any(isinstance(n, (Var, Chi)) for n in _walk(node))


def _is_one(node):
    return isinstance(node, Num) and node.value == 1.0


def _is_x(node):
    return isinstance(node, Var) and node.name == "x"


def _one_plus_sx(node):
    """s when node is 1 + s x with s = ±1, else None."""
    if not isinstance(node, Binary) or node.op not in "+-":
        return None
    sign = 1.0 if node.op == "+" else -1.0
    if _is_one(node.left) and _is_x(node.right):
        return sign
    if node.op == "+" and _is_x(node.left) and _is_one(node.right):
        return 1.0
    return None


def _one_minus_x2(node):
    return (isinstance(node, Binary) and node.op == "-" and _is_one(node.left)
            and isinstance(node.right, Binary) and node.right.op == "^"
            and _is_x(node.right.left) and isinstance(node.right.right, Num) and node.right.right.value == 2.0)


def _linear_root(node):
    """c when node is x, x - c, c - x or x + c with constant c."""
    if _is_x(node):
        return 0.0
    if isinstance(node, Binary) and node.op in "+-":
        if _is_x(node.left) and isinstance(node.right, Num):
            return node.right.value if node.op == "-" else -node.right.value
        if node.op == "-" and isinstance(node.left, Num) and _is_x(node.right):
            return node.left.value
    return None


def _singular_points(node):
    points = set()
    for n in _walk(node):
        if isinstance(n, Chi):
            points.update(p for p in (n.left, n.right) if -1.0 < p < 1.0)
        elif isinstance(n, Call) and n.name in ENDPOINT_FUNCTIONS:
            root = _linear_root(n.args[0])
            if root is not None and -1.0 < root < 1.0:
                points.add(root)
        elif isinstance(n, Binary) and n.op == "/":
            root = _linear_root(n.right)
            if root is not None and -1.0 < root < 1.0:
                points.add(root)
    return tuple(sorted(points))


def _integer_power(node):
    return isinstance(node, Num) and float(node.value).is_integer() and node.value >= 0


def _regularity(node):
    endpoint = any(
        (isinstance(n, Call) and n.name in ENDPOINT_FUNCTIONS and _depends_on_x(n.args[0]))
        or (isinstance(n, Binary) and n.op == "/" and _depends_on_x(n.right))
        or (isinstance(n, Binary) and n.op == "^" and _depends_on_x(n.right))
        or (isinstance(n, Binary) and n.op == "^" and _depends_on_x(n.left) and not _integer_power(n.right))
        or (isinstance(n, Var) and n.name == "w")
        for n in _walk(node)
    )
    if endpoint:
        return Regularity.ENDPOINT
    if any(isinstance(n, Chi) for n in _walk(node)):
        return Regularity.JUMP
    return Regularity.SMOOTH


def _split_weight(node):
    """(rest, power) for a top-level factor w or 1/w, found through nested products."""
    if isinstance(node, Var) and node.name == "w":
        return Num(1.0, node.pos), 1
    if isinstance(node, Binary) and node.op in "*/":
        if isinstance(node.right, Var) and node.right.name == "w":
            return node.left, 1 if node.op == "*" else -1
        if node.op == "*":
            for factor, other in ((node.left, node.right), (node.right, node.left)):
                rest, power = _split_weight(factor)
                if power:
                    if isinstance(rest, Num) and rest.value == 1.0:
                        return other, power
                    return Binary("*", rest, other, node.pos), power
    return node, 0


def _as_steps(node):
    """(a, b, value) triples when node is a constant combination of chi terms, else None."""
    if isinstance(node, Chi):
        return [(node.left, node.right, 1.0)]
    if isinstance(node, Num):
        return [(-1.0, 1.0, node.value)]
    if isinstance(node, Unary):
        inner = _as_steps(node.operand)
        return None if inner is None else [(a, b, -v) for a, b, v in inner]
    if isinstance(node, Binary):
        if node.op in "+-":
            left, right = _as_steps(node.left), _as_steps(node.right)
            if left is None or right is None:
                return None
            sign = 1.0 if node.op == "+" else -1.0
            return left + [(a, b, sign * v) for a, b, v in right]
        if node.op in "*/" and not _depends_on_x(node.right):
            inner = _as_steps(node.left)
            c = float(evaluate(node.right, np.zeros(1), np.ones(1))[0])
            return None if inner is None else [(a, b, v * c if node.op == "*" else v / c) for a, b, v in inner]
        if node.op == "*" and not _depends_on_x(node.left):
            inner = _as_steps(node.right)
            c = float(evaluate(node.left, np.zeros(1), np.ones(1))[0])
            return None if inner is None else [(a, b, c * v) for a, b, v in inner]
    return None


# --- evaluation ---

def evaluate(node, x, d):
    """Value of the tree at points given as (x, d = 1 - |x|)."""
    if isinstance(node, Num):
        return np.full_like(x, node.value)
    if isinstance(node, Var):
        return x if node.name == "x" else weight_of(d)
    if isinstance(node, Chi):
        piece = StepPiece(DualPoint.from_x(node.left), DualPoint.from_x(node.right), 1.0)
        return _step_values((piece,), AnchoredPoints(x, d, 0.0))
    if isinstance(node, Unary):
        return -evaluate(node.operand, x, d)
    if isinstance(node, Call):
        with np.errstate(all="ignore"):
            return FUNCTIONS[node.name](evaluate(node.args[0], x, d))
    sign = _one_plus_sx(node)
    if sign is not None:
        return np.where(sign * x <= 0.0, d, 2.0 - d)
    if _one_minus_x2(node):
        return d * (2.0 - d)
    left, right = evaluate(node.left, x, d), evaluate(node.right, x, d)
    with np.errstate(all="ignore"):
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            # 0 * anything = 0, so chi(a,b)*f is defined off [a, b) wherever f is not
            return np.where((left == 0.0) | (right == 0.0), 0.0, left * right)
        if node.op == "/":
            return left / right
        return np.power(left, right)


def parse(source):
    """Parse ``source`` into a FunctionHandle."""
    tree = Parser(source).parse()
    rest, power = _split_weight(tree)
    has_chi = any(isinstance(n, Chi) for n in _walk(tree))
    if power == 0 and has_chi:
        steps = _as_steps(tree)
        if steps is not None:
            logger.debug(f"[parser] {source!r} is a step function with {len(steps)} pieces")
            return FunctionHandle.step(steps, name=source)
    handle = FunctionHandle(
        base=lambda x, d: evaluate(rest, np.asarray(x, dtype=float), np.asarray(d, dtype=float)) * np.ones_like(x),
        regularity=_regularity(rest),
        weight_power=power,
        breakpoints=_singular_points(tree),
        name=source,
    )
    logger.debug(f"[parser] {source!r}: {handle.singularity_tag}, weight power {power}")
    return handle
