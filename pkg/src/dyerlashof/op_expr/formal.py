"""Formal algebra of operation symbols Q^I x over F_p.

An :class:`OpPolynomial` is a linear combination of graded-commutative
products of symbols ``(I, x)``, where ``I`` is a word and ``x`` a named atom of
known degree.  Applying an operation to such a polynomial uses the Cartan
formula across products, the instability rules on each symbol, and Adem
relations whenever the new leading pair is inadmissible.  The surviving
symbols are exactly the admissible words passing the excess gate, so the
normal form is the basis of the free unstable algebra on the atoms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

from .words import Word, adem_pair, format_word, pair_admissible, word_degree, make_word


class FormalError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Atom:
    name: str
    degree: int


_XI = re.compile(r"^(xi|zeta)(\d+)$")
_TAU = re.compile(r"^(tau|taubar)(\d+)$")


def builtin_degree(p: int, name: str) -> int | None:
    """Degree implied by the dual Steenrod naming scheme, if any."""
    m = _XI.match(name)
    if m:
        r = int(m.group(2))
        if r < 1:
            return None
        return 2**r - 1 if p == 2 else 2 * (p**r - 1)
    m = _TAU.match(name)
    if m and p != 2:
        return 2 * p ** int(m.group(2)) - 1
    return None


@dataclass(frozen=True)
class Symbol:
    word: Word
    atom: Atom
    degree: int

    @property
    def key(self):
        return (self.degree, self.atom.name, self.atom.degree, self.word)

    def __lt__(self, other):
        return self.key < other.key


def make_symbol(p: int, word: Word, atom: Atom) -> Symbol:
    return Symbol(tuple(word), atom, atom.degree + word_degree(p, word))


Monomial = tuple  # tuple[tuple[Symbol, int], ...], sorted by symbol key


class OpPolynomial:
    """F_p-combination of products of operation symbols."""

    __slots__ = ("p", "terms")

    def __init__(self, p: int, terms: Mapping[Monomial, int] | None = None):
        clean = {}
        for m, c in (terms or {}).items():
            c %= p
            if c:
                clean[m] = c
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, key, value):
        raise AttributeError("OpPolynomial is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, p):
        return cls(p)

    @classmethod
    def constant(cls, p, c):
        return cls(p, {(): c})

    @classmethod
    def atom(cls, p, atom: Atom, word: Word = ()):
        return cls.symbol(p, make_symbol(p, word, atom))

    @classmethod
    def symbol(cls, p, sym: Symbol, exp: int = 1):
        if exp == 0:
            return cls.constant(p, 1)
        if _odd(p, sym) and exp > 1:
            return cls(p)
        return cls(p, {((sym, exp),): 1})

    # -- arithmetic ---------------------------------------------------------

    def _same(self, other):
        if isinstance(other, int):
            return OpPolynomial.constant(self.p, other)
        if not isinstance(other, OpPolynomial):
            return None
        if other.p != self.p:
            raise FormalError("polynomials over different primes")
        return other

    def __add__(self, other):
        other = self._same(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return OpPolynomial(self.p, terms)

    __radd__ = __add__

    def __neg__(self):
        return OpPolynomial(self.p, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._same(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return OpPolynomial(self.p, {m: c * other for m, c in self.terms.items()})
        other = self._same(other)
        if other is None:
            return NotImplemented
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                r = _mul_monomials(self.p, m1, m2)
                if r is None:
                    continue
                sign, m = r
                out[m] = out.get(m, 0) + sign * c1 * c2
        return OpPolynomial(self.p, out)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __pow__(self, e: int):
        result = OpPolynomial.constant(self.p, 1)
        for _ in range(e):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = OpPolynomial.constant(self.p, other)
        if not isinstance(other, OpPolynomial):
            return NotImplemented
        return self.p == other.p and self.terms == other.terms

    def __hash__(self):
        return hash((self.p, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    # -- structure ----------------------------------------------------------

    def degrees(self) -> set[int]:
        return {monomial_degree(m) for m in self.terms}

    def symbols(self) -> set[Symbol]:
        return {s for m in self.terms for s, _ in m}

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: (monomial_degree(mc[0]), [(s.key, e) for s, e in mc[0]]))

    def apply(self, word: Word) -> "OpPolynomial":
        """Apply beta^e1 Q^s1 ... beta^ek Q^sk, innermost (rightmost) first."""
        out = self
        for op in reversed(tuple(word)):
            out = apply_op(op, out)
        return out

    def to_string(self, declared: Iterable[str] = ()) -> str:
        return format_polynomial(self, set(declared))

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"OpPolynomial({self})"


def _odd(p: int, sym: Symbol) -> bool:
    return p != 2 and sym.degree % 2 == 1


def monomial_degree(m: Monomial) -> int:
    return sum(s.degree * e for s, e in m)


def _mul_monomials(p: int, a: Monomial, b: Monomial):
    if not a:
        return 1, b
    if not b:
        return 1, a
    sign = 1
    if p != 2:
        odd_a = [s.key for s, _ in a if _odd(p, s)]
        swaps = 0
        for s, _ in b:
            if _odd(p, s):
                k = s.key
                if k in odd_a:
                    return None
                swaps += sum(1 for ka in odd_a if ka > k)
        if swaps % 2:
            sign = -1
    exps: dict[Symbol, int] = {}
    for s, e in a + b:
        exps[s] = exps.get(s, 0) + e
    mono = tuple(sorted(exps.items(), key=lambda se: se[0].key))
    return sign, mono


def _factor_list(m: Monomial) -> list[Symbol]:
    out = []
    for s, e in m:
        out.extend([s] * e)
    return out


def apply_op(op: tuple[int, int], poly: OpPolynomial) -> OpPolynomial:
    """Apply a single ``beta^e Q^s`` to a formal polynomial (Cartan + instability + Adem)."""
    p = poly.p
    out = OpPolynomial(p)
    for m, c in poly.terms.items():
        out = out + _apply_monomial(p, op, m) * c
    return out


@lru_cache(maxsize=200_000)
def _apply_monomial(p: int, op: tuple[int, int], m: Monomial) -> OpPolynomial:
    e, s = op
    factors = _factor_list(m)
    if not factors:
        return OpPolynomial.constant(p, 1 if (e, s) == (0, 0) else 0)
    if len(factors) == 1:
        return apply_to_symbol(p, op, factors[0])
    # Cartan formula: split s among the factors; at odd p a single beta lands on
    # one factor with the Koszul sign of everything to its left.
    states: dict[tuple[int, int], OpPolynomial] = {(s, 0): OpPolynomial.constant(p, 1)}
    prefix_degree = 0
    for y in factors:
        new: dict[tuple[int, int], OpPolynomial] = {}
        for (rem, used), partial in states.items():
            for i in range(rem + 1):
                choices = [(0, 1)]
                if e and not used:
                    choices.append((1, -1 if prefix_degree % 2 else 1))
                for b, sign in choices:
                    img = apply_to_symbol(p, (b, i), y)
                    if not img:
                        continue
                    key = (rem - i, used + b)
                    term = partial * img * sign
                    new[key] = new.get(key, OpPolynomial(p)) + term
        states = new
        prefix_degree += y.degree
    return states.get((0, e), OpPolynomial(p))


@lru_cache(maxsize=200_000)
def apply_to_symbol(p: int, op: tuple[int, int], sym: Symbol) -> OpPolynomial:
    """beta^e Q^s applied to a single symbol Q^I x."""
    e, s = op
    d = sym.degree
    weight = s if p == 2 else 2 * s
    if weight < d:
        return OpPolynomial(p)
    if weight == d:
        if e:
            return OpPolynomial(p)
        return OpPolynomial.symbol(p, sym, p)
    if not sym.word or pair_admissible(p, op, sym.word[0]):
        return OpPolynomial.atom(p, sym.atom, (op,) + sym.word)
    inner = make_symbol(p, sym.word[1:], sym.atom)
    inner_poly = OpPolynomial.symbol(p, inner)
    out = OpPolynomial(p)
    head = sym.word[0]
    for c, repl in adem_pair(p, op, head):
        out = out + inner_poly.apply(repl) * c
    return out


# -- printing -----------------------------------------------------------------


def format_atom(p: int, atom: Atom, declared: set[str]) -> str:
    if atom.name in declared or builtin_degree(p, atom.name) == atom.degree:
        return atom.name
    return f"{atom.name}@{atom.degree}"


def format_symbol(p: int, sym: Symbol, exp: int, declared: set[str]) -> str:
    base = format_atom(p, sym.atom, declared)
    if sym.word:
        base = f"{format_word(sym.word)} {base}"
        if exp > 1:
            return f"({base})^{exp}"
        return base
    return base if exp == 1 else f"{base}^{exp}"


def format_polynomial(poly: OpPolynomial, declared: set[str] = frozenset()) -> str:
    if not poly.terms:
        return "0"
    parts = []
    for m, c in poly.sorted_terms():
        body = " * ".join(format_symbol(poly.p, s, e, declared) for s, e in m)
        if not body:
            parts.append(str(c))
        elif c == 1:
            parts.append(body)
        else:
            parts.append(f"{c} {body}")
    return " + ".join(parts)


def word_on_atom(p: int, entries, atom: Atom) -> OpPolynomial:
    """Evaluate the (not necessarily admissible) word on an atom, formally."""
    return OpPolynomial.atom(p, atom).apply(make_word(p, entries))
