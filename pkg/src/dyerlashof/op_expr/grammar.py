"""Text syntax for operation expressions.

    expr    := ['+'|'-'] term (('+'|'-') term)*
    term    := [INT] factor ('*' factor)*
    factor  := op* power
    op      := ['b'] 'Q^' INT
    power   := primary ['^' INT]
    primary := INT | NAME ['@' INT] | '(' expr ')'

Composition by juxtaposition binds tighter than ``*``, which binds tighter
than ``+``.  ``b`` is the Bockstein prefix.  Names such as ``xi2``, ``zeta1``,
``tau0`` and ``taubar1`` get their dual Steenrod degrees; any other name needs
either a declaration or an ``@degree`` annotation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Union

from .formal import Atom, OpPolynomial, builtin_degree, format_polynomial
from .words import make_word, WordError


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.text = text
        self.pos = pos
        self.bare = message
        caret = f"\n  {text}\n  {' ' * pos}^" if text else ""
        super().__init__(f"{message} at position {pos}{caret}")


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class AtomRef:
    name: str
    degree: int | None = None
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Apply:
    ops: tuple
    arg: "Node"


@dataclass(frozen=True)
class Power:
    base: "Node"
    exp: int


@dataclass(frozen=True)
class Product:
    factors: tuple


@dataclass(frozen=True)
class Sum:
    items: tuple  # ((coefficient, node), ...)


Node = Union[Const, AtomRef, Apply, Power, Product, Sum]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_']*)|(\S))")


def tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1):
            toks.append(("INT", m.group(1), m.start(1)))
        elif m.group(2):
            toks.append(("NAME", m.group(2), m.start(2)))
        elif m.group(3):
            ch = m.group(3)
            if ch not in "+-*^()@=":
                raise ParseError(f"unexpected character {ch!r}", text, m.start(3))
            toks.append((ch, ch, m.start(3)))
        pos = m.end()
    toks.append(("EOF", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    def peek(self, k: int = 0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind: str):
        t = self.next()
        if t[0] != kind:
            raise ParseError(f"expected {kind!r} but found {t[1] or 'end of input'!r}", self.text, t[2])
        return t

    def error(self, msg):
        raise ParseError(msg, self.text, self.peek()[2])

    def parse(self) -> Node:
        node = self.expr()
        if self.peek()[0] != "EOF":
            self.error(f"unexpected {self.peek()[1]!r}")
        return node

    def expr(self) -> Node:
        items = []
        sign = 1
        if self.peek()[0] in ("+", "-"):
            sign = -1 if self.next()[0] == "-" else 1
        items.append(self._signed(sign, self.term()))
        while self.peek()[0] in ("+", "-"):
            sign = -1 if self.next()[0] == "-" else 1
            items.append(self._signed(sign, self.term()))
        if len(items) == 1 and items[0][0] == 1:
            return items[0][1]
        return Sum(tuple(items))

    @staticmethod
    def _signed(sign, term):
        coef, node = term
        return sign * coef, node

    def term(self):
        coef = 1
        if self.peek()[0] == "INT" and self.peek(1)[0] in ("NAME", "("):
            coef = int(self.next()[1])
        factors = [self.factor()]
        while self.peek()[0] == "*":
            self.next()
            factors.append(self.factor())
        node = factors[0] if len(factors) == 1 else Product(tuple(factors))
        return coef, node

    def factor(self) -> Node:
        ops = []
        while True:
            kind, val, pos = self.peek()
            if kind == "NAME" and val == "b" and self.peek(1)[1] == "Q":
                self.next()
                ops.append(self._op(1))
            elif kind == "NAME" and val == "Q":
                ops.append(self._op(0))
            else:
                break
        base = self.power()
        return Apply(tuple(ops), base) if ops else base

    def _op(self, e):
        self.expect("NAME")  # Q
        self.expect("^")
        return (e, int(self.expect("INT")[1]))

    def power(self) -> Node:
        base = self.primary()
        if self.peek()[0] == "^":
            self.next()
            return Power(base, int(self.expect("INT")[1]))
        return base

    def primary(self) -> Node:
        kind, val, pos = self.peek()
        if kind == "INT":
            self.next()
            return Const(int(val))
        if kind == "NAME":
            if val in ("Q", "b"):
                self.error(f"operation {val!r} without an argument")
            self.next()
            deg = None
            if self.peek()[0] == "@":
                self.next()
                deg = int(self.expect("INT")[1])
            return AtomRef(val, deg, pos)
        if kind == "(":
            self.next()
            node = self.expr()
            self.expect(")")
            return node
        self.error(f"expected an expression but found {val or 'end of input'!r}")


def parse_ast(text: str) -> Node:
    return _Parser(text).parse()


def parse_equation(text: str) -> tuple[Node, Node]:
    if text.count("=") != 1:
        raise ParseError("expected exactly one '='", text, text.find("=") if "=" in text else len(text))
    k = text.index("=")
    lhs = text[:k]
    rhs = text[k + 1:]
    try:
        left = parse_ast(lhs)
    except ParseError as exc:
        raise ParseError(exc.bare, text, exc.pos) from None
    try:
        right = parse_ast(rhs)
    except ParseError as exc:
        raise ParseError(exc.bare, text, exc.pos + k + 1) from None
    return left, right


# -- evaluation ---------------------------------------------------------------


class AtomResolver:
    """Maps names to atoms, using declarations then the dual Steenrod naming rule."""

    def __init__(self, p: int, declared: dict[str, int] | Iterable = ()):
        self.p = p
        self.declared = dict(declared)

    def __call__(self, ref: AtomRef, text: str = "") -> Atom:
        known = self.declared.get(ref.name)
        if known is None:
            known = builtin_degree(self.p, ref.name)
        if known is None:
            if ref.degree is None:
                raise ParseError(f"unknown generator {ref.name!r}", text, ref.pos)
            return Atom(ref.name, ref.degree)
        if ref.degree is not None and ref.degree != known:
            raise ParseError(f"degree annotation {ref.degree} does not match |{ref.name}| = {known}", text, ref.pos)
        return Atom(ref.name, known)


def evaluate(node: Node, *, const, atom, apply, text: str = ""):
    """Fold an AST with caller-supplied leaf and operation handlers."""

    def go(n):
        if isinstance(n, Const):
            return const(n.value)
        if isinstance(n, AtomRef):
            return atom(n)
        if isinstance(n, Apply):
            return apply(tuple(n.ops), go(n.arg))
        if isinstance(n, Power):
            return go(n.base) ** n.exp
        if isinstance(n, Product):
            out = go(n.factors[0])
            for f in n.factors[1:]:
                out = out * go(f)
            return out
        if isinstance(n, Sum):
            out = None
            for c, t in n.items:
                v = go(t) * c
                out = v if out is None else out + v
            return out
        raise TypeError(f"unknown node {n!r}")

    return go(node)


def check_word(p: int, node: Node, text: str = ""):
    """Reject Bockstein decorations at p = 2 anywhere in the tree."""
    if isinstance(node, Apply):
        try:
            make_word(p, node.ops)
        except WordError as exc:
            raise ParseError(str(exc), text, 0) from None
        check_word(p, node.arg, text)
    elif isinstance(node, Power):
        check_word(p, node.base, text)
    elif isinstance(node, Product):
        for f in node.factors:
            check_word(p, f, text)
    elif isinstance(node, Sum):
        for _, t in node.items:
            check_word(p, t, text)


def parse(text: str, p: int, declared: dict[str, int] | None = None) -> OpPolynomial:
    """Parse into the formal algebra, normalizing operations as they are applied."""
    node = parse_ast(text)
    check_word(p, node, text)
    resolve = AtomResolver(p, declared or {})
    return evaluate(
        node,
        const=lambda c: OpPolynomial.constant(p, c),
        atom=lambda ref: OpPolynomial.atom(p, resolve(ref, text)),
        apply=lambda word, x: x.apply(word),
        text=text,
    )


def to_text(poly: OpPolynomial, declared: Iterable[str] = ()) -> str:
    return format_polynomial(poly, set(declared))


def format_ast(node: Node) -> str:
    """Print an AST back in the grammar (fully parenthesised where needed)."""
    if isinstance(node, Const):
        return str(node.value)
    if isinstance(node, AtomRef):
        return node.name if node.degree is None else f"{node.name}@{node.degree}"
    if isinstance(node, Apply):
        ops = " ".join(("b " if e else "") + f"Q^{s}" for e, s in node.ops)
        return f"{ops} {_wrap(node.arg, Apply)}"
    if isinstance(node, Power):
        return f"{_wrap(node.base, Power)}^{node.exp}"
    if isinstance(node, Product):
        return " * ".join(_wrap(f, Product) for f in node.factors)
    if isinstance(node, Sum):
        parts = []
        for i, (c, t) in enumerate(node.items):
            body = _wrap(t, Sum)
            mag = abs(c)
            txt = body if mag == 1 else f"{mag} {body}"
            if i == 0:
                parts.append(("- " if c < 0 else "") + txt)
            else:
                parts.append(("- " if c < 0 else "+ ") + txt)
        return " ".join(parts)
    raise TypeError(node)


def _wrap(node: Node, ctx) -> str:
    s = format_ast(node)
    if isinstance(node, (Const, AtomRef)):
        return s
    if ctx is Apply and isinstance(node, Power):
        return s
    if ctx is Product and isinstance(node, (Apply, Power)):
        return s
    if ctx is Sum and isinstance(node, (Apply, Power, Product)):
        return s
    return f"({s})"
