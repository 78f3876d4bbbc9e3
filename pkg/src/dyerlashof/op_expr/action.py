"""Concrete evaluation of operation words on elements of a graded algebra.

An :class:`ActionContext` knows the values of some operations on single
generators.  Everything else is derived: the element is rewritten formally
(Cartan, instability, Adem), cancellations happen symbolically, and only the
surviving symbols are looked up.  A symbol with no recorded value raises
:class:`MissingTableEntry` instead of being treated as zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from ..fp_graded import AlgElement, AlgebraError, FreeAlgebra
from .formal import Atom, OpPolynomial, Symbol
from .words import Word, adem_normalize, format_word, op_degree, word_degree


class MissingTableEntry(LookupError):
    """An operation value the engine has not been given and will not invent."""

    def __init__(self, side: str, word: Word, generator: str):
        self.side = side
        self.word = tuple(word)
        self.generator = generator
        super().__init__(
            f"no {side} table entry for {format_word(self.word)} {generator}; "
            "supply it as a config entry"
        )


class DegreeBoundExceeded(AlgebraError):
    pass


Lookup = Callable[[Word, str], "AlgElement | None"]


@dataclass
class ActionContext:
    algebra: FreeAlgebra
    lookup: Lookup
    side: str = "left"
    reduce: Callable[[AlgElement], AlgElement] = field(default=lambda x: x)

    @property
    def p(self) -> int:
        return self.algebra.p


def to_formal(x: AlgElement) -> OpPolynomial:
    """View an algebra element as a formal polynomial in its generators."""
    A = x.algebra
    atoms = [OpPolynomial.atom(A.p, Atom(g.name, g.degree)) for g in A.generators]
    out = OpPolynomial(A.p)
    for mono, c in x.terms.items():
        term = OpPolynomial.constant(A.p, c)
        for i, e in enumerate(mono):
            if e:
                term = term * atoms[i] ** e
        out = out + term
    return out


def substitute(ctx: ActionContext, poly: OpPolynomial) -> AlgElement:
    A = ctx.algebra
    out = A.zero()
    cache: dict[Symbol, AlgElement] = {}
    for mono, c in poly.terms.items():
        term = A.scalar(c)
        for sym, e in mono:
            if sym not in cache:
                cache[sym] = symbol_value(ctx, sym)
            term = term * cache[sym] ** e
            if not term:
                break
        out = out + term
    return out


def symbol_value(ctx: ActionContext, sym: Symbol) -> AlgElement:
    A = ctx.algebra
    name = sym.atom.name
    if not sym.word:
        return A.gen(name)
    if sym.degree > A.bound:
        raise DegreeBoundExceeded(f"{format_word(sym.word)} {name} has degree {sym.degree} > bound {A.bound}")
    value = ctx.lookup(sym.word, name)
    if value is not None:
        return value
    if len(sym.word) > 1:
        inner = symbol_value(ctx, Symbol(sym.word[1:], sym.atom, sym.degree - op_degree(A.p, sym.word[0])))
        return _act_admissible(ctx, sym.word[:1], inner)
    raise MissingTableEntry(ctx.side, sym.word, name)


def _instability(p: int, op, x: AlgElement, d: int):
    """Element-level instability; returns the value or None if it does not apply."""
    e, s = op
    weight = s if p == 2 else 2 * s
    if d == 0:
        # constants: Q^0 c = c, everything else kills 1
        return x if (e, s) == (0, 0) else x.algebra.zero()
    if weight < d:
        return x.algebra.zero()
    if weight == d:
        return x.algebra.zero() if e else x**p
    return None


def _kills(p: int, op, d: int) -> bool:
    """Instability sends every class of degree d to zero under this operation."""
    e, s = op
    weight = s if p == 2 else 2 * s
    if d == 0:
        return (e, s) != (0, 0)
    return weight < d or (weight == d and e == 1)


def _act_admissible(ctx: ActionContext, word: Word, x: AlgElement) -> AlgElement:
    A = ctx.algebra
    p = A.p
    out = A.zero()
    for d, comp in x.components().items():
        target = d + word_degree(p, word)
        if target > A.bound:
            if _kills(p, word[-1], d):
                continue
            raise DegreeBoundExceeded(f"{format_word(word)} lands in degree {target} > bound {A.bound}")
        # peel off innermost operations that instability settles at element level
        w = tuple(word)
        cur, cur_deg = comp, d
        while w:
            v = _instability(p, w[-1], cur, cur_deg)
            if v is None:
                break
            cur_deg += op_degree(p, w[-1])
            cur, w = v, w[:-1]
        if not w or not cur:
            out = out + cur
            continue
        out = out + substitute(ctx, to_formal(cur).apply(w))
    return ctx.reduce(out)


def act(ctx: ActionContext, word: Word, x: AlgElement) -> AlgElement:
    """Value of the word on ``x``; inadmissible words are Adem-normalized first."""
    if x.algebra != ctx.algebra:
        raise AlgebraError("element does not live in the context's algebra")
    out = ctx.algebra.zero()
    for w, c in adem_normalize(ctx.p, tuple(word)).items():
        out = out + _act_admissible(ctx, w, x) * c
    return ctx.reduce(out)


def act_iterated(ctx: ActionContext, word: Word, x: AlgElement) -> AlgElement:
    """Apply the operations one at a time, innermost first, with no Adem step."""
    for op in reversed(tuple(word)):
        x = _act_admissible(ctx, (op,), x)
    return x
