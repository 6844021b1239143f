"""Expression language for extended-real test functions.

Grammar (LL(1), standard precedence ^ > unary minus > * / > + -, all
binary operators left-associative, parentheses for grouping):

    expr     := ifexpr | arith
    ifexpr   := "if" arith cmp arith "then" expr "else" expr
    cmp      := "<" | "<=" | "=" | "!="
    arith    := term ( ("+" | "-") term )*
    term     := unary ( ("*" | "/") unary )*
    unary    := "-" unary | power
    power    := atom ( "^" atom )*
    atom     := NUMBER | "inf" | "x" | "y" | call | "(" expr ")"
    call     := ("abs" | "arctan") "(" expr ")"
              | ("min" | "max") "(" expr ("," expr)+ ")"

Evaluation is total with the extended conventions: a/0 is +inf when
a > 0 and an error otherwise (0/0, negative over zero); any operation
whose IEEE result is NaN or -inf (inf - inf, 0 * inf, ...) is an error;
comparisons follow the extended order.  Equality guards like `x = 0`
compare floats exactly and are meant for discontinuities placed on grid
nodes; guards off the lattice are resolved by the lsc-envelope stencil,
not by the parser.
"""

import re
from dataclasses import dataclass

import numpy as np

from .core import INF, FunctionSpec

__all__ = [
    "ParseError",
    "EvalError",
    "parse",
    "eval_expr",
    "to_source",
    "infer_dim",
    "spec_from_source",
]


class ParseError(ValueError):
    def __init__(self, message, line, col):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


class EvalError(ValueError):
    pass


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Inf:
    pass


@dataclass(frozen=True)
class Var:
    name: str  # "x" or "y"


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Call:
    func: str  # "abs" | "arctan"
    arg: object


@dataclass(frozen=True)
class MinMax:
    op: str  # "min" | "max"
    args: tuple


@dataclass(frozen=True)
class BinOp:
    op: str  # + - * / ^
    left: object
    right: object


@dataclass(frozen=True)
class IfExpr:
    left: object
    cmp: str  # < <= = !=
    right: object
    then: object
    other: object


# ---------------------------------------------------------------------------
# Tokenizer

_TOKEN_RE = re.compile(
    r"""(?P<num>\d+(\.\d*)?([eE][+-]?\d+)?|\.\d+([eE][+-]?\d+)?)
      | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
      | (?P<op><=|!=|[-+*/^()<=,])
      | (?P<ws>\s+)
      | (?P<bad>.)""",
    re.VERBOSE,
)

_KEYWORDS = {"if", "then", "else", "inf", "abs", "arctan", "min", "max", "x", "y"}


@dataclass(frozen=True)
class _Token:
    kind: str  # "num" | "name" | "op" | "end"
    text: str
    line: int
    col: int


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    line, col = 1, 1
    for m in _TOKEN_RE.finditer(source):
        text = m.group(0)
        kind = m.lastgroup
        if kind == "bad":
            raise ParseError(f"unexpected character {text!r}", line, col)
        if kind != "ws":
            tokens.append(_Token(kind, text, line, col))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
    tokens.append(_Token("end", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# Parser

class _Parser:
    def __init__(self, source: str):
        self.tokens = _tokenize(source)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        raise ParseError(message, tok.line, tok.col)

    def expect(self, text):
        tok = self.next()
        if tok.text != text:
            found = repr(tok.text) if tok.text else "end of input"
            self.error(f"expected {text!r}, found {found}", tok)
        return tok

    def parse(self):
        expr = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            self.error(f"unexpected trailing input {tok.text!r}")
        return expr

    def expr(self):
        if self.peek().text == "if":
            return self.ifexpr()
        return self.arith()

    def ifexpr(self):
        self.expect("if")
        left = self.arith()
        tok = self.next()
        if tok.text not in ("<", "<=", "=", "!="):
            self.error(f"expected comparison operator, found {tok.text!r}", tok)
        cmp = tok.text
        right = self.arith()
        if isinstance(left, Inf) and isinstance(right, Inf):
            self.error("comparison cannot have literal inf on both sides", tok)
        self.expect("then")
        then = self.expr()
        self.expect("else")
        other = self.expr()
        return IfExpr(left, cmp, right, then, other)

    def arith(self):
        node = self.term()
        while self.peek().text in ("+", "-"):
            op = self.next().text
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek().text in ("*", "/"):
            op = self.next().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.peek().text == "-":
            self.next()
            return Neg(self.unary())
        return self.power()

    def power(self):
        node = self.atom()
        while self.peek().text == "^":
            self.next()
            node = BinOp("^", node, self.atom())
        return node

    def atom(self):
        tok = self.next()
        if tok.kind == "num":
            return Num(float(tok.text))
        if tok.text == "(":
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind == "name":
            name = tok.text
            if name == "inf":
                return Inf()
            if name in ("x", "y"):
                return Var(name)
            if name in ("abs", "arctan"):
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(name, arg)
            if name in ("min", "max"):
                self.expect("(")
                args = [self.expr()]
                while self.peek().text == ",":
                    self.next()
                    args.append(self.expr())
                self.expect(")")
                if len(args) < 2:
                    self.error(f"{name} needs at least 2 arguments, got {len(args)}", tok)
                return MinMax(name, tuple(args))
            self.error(f"unknown identifier {name!r}", tok)
        found = repr(tok.text) if tok.text else "end of input"
        self.error(f"unexpected {found}", tok)


def parse(source: str):
    """Parse DSL text into an AST; raises ParseError with position on failure."""
    return _Parser(source).parse()


def infer_dim(expr) -> int:
    """1 unless the expression mentions `y`."""
    found = {"y": False}

    def walk(node):
        if isinstance(node, Var) and node.name == "y":
            found["y"] = True
        for child in _children(node):
            walk(child)

    walk(expr)
    return 2 if found["y"] else 1


def _children(node):
    if isinstance(node, (Num, Inf, Var)):
        return ()
    if isinstance(node, Neg):
        return (node.arg,)
    if isinstance(node, Call):
        return (node.arg,)
    if isinstance(node, MinMax):
        return node.args
    if isinstance(node, BinOp):
        return (node.left, node.right)
    if isinstance(node, IfExpr):
        return (node.left, node.right, node.then, node.other)
    raise TypeError(f"not an expression node: {node!r}")


# ---------------------------------------------------------------------------
# Evaluation

def _check(arr, what):
    if np.isnan(arr).any():
        raise EvalError(f"indeterminate value in {what}")
    if np.isneginf(arr).any():
        raise EvalError(f"-inf produced by {what}")
    return arr


def eval_expr(expr, xs, ys=None) -> np.ndarray:
    """Vectorized evaluation on coordinate arrays; scalar-safe via 0-d arrays."""
    xs = np.asarray(xs, dtype=float)
    shape = xs.shape
    if ys is not None:
        ys = np.broadcast_to(np.asarray(ys, dtype=float), shape)

    def ev(node):
        if isinstance(node, Num):
            return np.broadcast_to(np.float64(node.value), shape)
        if isinstance(node, Inf):
            return np.broadcast_to(np.float64(INF), shape)
        if isinstance(node, Var):
            if node.name == "x":
                return xs
            if ys is None:
                raise EvalError("expression uses y but the point is one-dimensional")
            return ys
        if isinstance(node, Neg):
            return _check(-ev(node.arg), "negation")
        if isinstance(node, Call):
            v = ev(node.arg)
            return np.abs(v) if node.func == "abs" else np.arctan(v)
        if isinstance(node, MinMax):
            vals = [ev(a) for a in node.args]
            fn = np.minimum if node.op == "min" else np.maximum
            out = vals[0]
            for v in vals[1:]:
                out = fn(out, v)
            return out
        if isinstance(node, BinOp):
            a = ev(node.left)
            b = ev(node.right)
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                if node.op == "+":
                    return _check(a + b, "addition")
                if node.op == "-":
                    return _check(a - b, "subtraction")
                if node.op == "*":
                    return _check(a * b, "multiplication")
                if node.op == "/":
                    return _check(np.divide(a, b), "division")
                if np.isinf(b).any():
                    raise EvalError("exponent must be finite")
                return _check(np.power(a, b), "power")
        if isinstance(node, IfExpr):
            a = ev(node.left)
            b = ev(node.right)
            if node.cmp == "<":
                mask = a < b
            elif node.cmp == "<=":
                mask = a <= b
            elif node.cmp == "=":
                mask = a == b
            else:
                mask = a != b
            return np.where(mask, ev(node.then), ev(node.other))
        raise TypeError(f"not an expression node: {node!r}")

    return np.array(ev(expr), dtype=float)


# ---------------------------------------------------------------------------
# Canonical printer

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4, "atom": 5}


def to_source(expr) -> str:
    """Deterministic canonical text; parse(to_source(parse(s))) == parse(s)."""

    def fmt_num(v):
        if v == INF:
            return "inf"
        return repr(v)

    def render(node, parent_prec):
        if isinstance(node, Num):
            text, prec = fmt_num(node.value), _PREC["atom"]
        elif isinstance(node, Inf):
            text, prec = "inf", _PREC["atom"]
        elif isinstance(node, Var):
            text, prec = node.name, _PREC["atom"]
        elif isinstance(node, Neg):
            text, prec = "-" + render(node.arg, _PREC["neg"]), _PREC["neg"]
        elif isinstance(node, Call):
            text, prec = f"{node.func}({render(node.arg, 0)})", _PREC["atom"]
        elif isinstance(node, MinMax):
            text = f"{node.op}({', '.join(render(a, 0) for a in node.args)})"
            prec = _PREC["atom"]
        elif isinstance(node, BinOp):
            p = _PREC[node.op]
            # left-associative: the right operand needs strictly higher binding
            left = render(node.left, p)
            right = render(node.right, p + 1)
            text, prec = f"{left} {node.op} {right}", p
        elif isinstance(node, IfExpr):
            # comparison sides are arith in the grammar: a nested if needs parens there
            text = (
                f"if {render(node.left, 1)} {node.cmp} {render(node.right, 1)} "
                f"then {render(node.then, 0)} else {render(node.other, 0)}"
            )
            prec = 0
        else:
            raise TypeError(f"not an expression node: {node!r}")
        if prec < parent_prec:
            return f"({text})"
        return text

    return render(expr, 0)


def spec_from_source(source: str, name: str, coercive: bool = False) -> FunctionSpec:
    """Parse DSL text into an evaluable FunctionSpec."""
    expr = parse(source)
    dim = infer_dim(expr)
    if dim == 1:
        fn = lambda xs: eval_expr(expr, xs)
    else:
        fn = lambda xs, ys: eval_expr(expr, xs, ys)
    return FunctionSpec(name=name, dim=dim, fn=fn, coercive=coercive)
