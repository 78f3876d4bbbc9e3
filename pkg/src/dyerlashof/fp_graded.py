"""Free graded-commutative algebras over F_p, truncated at a degree bound.

Elements are sparse maps from exponent vectors to residues mod p.  For odd p,
odd-degree generators are exterior and anticommute; for p = 2 every generator
is polynomial.  Products landing above the algebra's degree bound are dropped,
i.e. all computation happens in the Postnikov truncation at that bound.

Ideals are handled degree by degree: the homogeneous part of an ideal in degree
d is the span of ``r * m`` over relations ``r`` and monomials ``m`` of the
complementary degree, put in reduced row echelon form over F_p.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence


class AlgebraError(ValueError):
    """Structural misuse: mixed ambient algebras, bad degrees, bad relations."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def inverse_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {p}")
    return pow(a, p - 2, p)


@dataclass(frozen=True)
class FpScalar:
    """A residue mod a prime; mostly useful at API boundaries."""

    value: int
    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise AlgebraError(f"{self.p} is not prime")
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other) -> int:
        if isinstance(other, FpScalar):
            if other.p != self.p:
                raise AlgebraError("scalars over different primes")
            return other.value
        return int(other)

    def __add__(self, other):
        return FpScalar(self.value + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FpScalar(self.value - self._coerce(other), self.p)

    def __neg__(self):
        return FpScalar(-self.value, self.p)

    def __mul__(self, other):
        return FpScalar(self.value * self._coerce(other), self.p)

    __rmul__ = __mul__

    def inverse(self) -> "FpScalar":
        return FpScalar(inverse_mod(self.value, self.p), self.p)

    def __truediv__(self, other):
        return self * FpScalar(self._coerce(other), self.p).inverse()

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    degree: int

    def __post_init__(self):
        if self.degree < 0:
            raise AlgebraError(f"generator {self.name} has negative degree")


Monomial = tuple  # exponent vector, one entry per generator


class FreeAlgebra:
    """Free graded-commutative F_p-algebra on weighted generators, truncated at ``bound``.

    Generators are kept in the order given; that order fixes the canonical
    form of monomials and the Koszul sign of every product.
    """

    def __init__(self, p: int, generators: Sequence[GeneratorSpec | tuple], bound: int):
        if not is_prime(p):
            raise AlgebraError(f"{p} is not prime")
        if bound < 0:
            raise AlgebraError("degree bound must be non-negative")
        gens = tuple(g if isinstance(g, GeneratorSpec) else GeneratorSpec(*g) for g in generators)
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise AlgebraError(f"duplicate generator names in {names}")
        self.p = p
        self.bound = bound
        self.generators = gens
        self.degrees = tuple(g.degree for g in gens)
        self.exterior = tuple(p != 2 and g.degree % 2 == 1 for g in gens)
        self._index = {g.name: i for i, g in enumerate(gens)}
        self._basis_cache: dict[int, tuple[Monomial, ...]] = {}

    def __repr__(self):
        gens = ", ".join(f"{g.name}@{g.degree}" for g in self.generators)
        return f"FreeAlgebra(p={self.p}, [{gens}], bound={self.bound})"

    # structural equality: two algebras built from the same data are interchangeable
    def _key(self):
        return (self.p, self.bound, self.generators)

    def __eq__(self, other):
        return isinstance(other, FreeAlgebra) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise AlgebraError(f"unknown generator {name!r}") from None

    def has_generator(self, name: str) -> bool:
        return name in self._index

    # -- elements -----------------------------------------------------------

    def zero(self) -> "AlgElement":
        return AlgElement(self, {})

    def one(self) -> "AlgElement":
        return AlgElement(self, {self.unit_monomial: 1})

    @cached_property
    def unit_monomial(self) -> Monomial:
        return (0,) * self.ngens

    def scalar(self, c: int) -> "AlgElement":
        return AlgElement(self, {self.unit_monomial: c})

    def gen(self, name: str) -> "AlgElement":
        i = self.index(name)
        if self.degrees[i] > self.bound:
            raise AlgebraError(f"generator {name} lies above the degree bound {self.bound}")
        return self.monomial_element(tuple(1 if j == i else 0 for j in range(self.ngens)))

    def monomial_element(self, mono: Monomial, coeff: int = 1) -> "AlgElement":
        mono = tuple(mono)
        if len(mono) != self.ngens:
            raise AlgebraError("exponent vector has the wrong length")
        if any(e > 1 for e, ext in zip(mono, self.exterior) if ext):
            return self.zero()
        if self.mono_degree(mono) > self.bound:
            return self.zero()
        return AlgElement(self, {mono: coeff})

    def mono_degree(self, mono: Monomial) -> int:
        return sum(e * d for e, d in zip(mono, self.degrees))

    def mono_odd(self, mono: Monomial) -> bool:
        return sum(e for e, ext in zip(mono, self.exterior) if ext) % 2 == 1

    def mul_monomials(self, a: Monomial, b: Monomial) -> tuple[int, Monomial] | None:
        """Product of two monomials as (sign, monomial), or None if it vanishes."""
        sign = 1
        if self.p != 2:
            # moving each odd generator of b leftward past the larger-index odd generators of a
            swaps = 0
            odd_after = 0
            for i in range(self.ngens - 1, -1, -1):
                if not self.exterior[i]:
                    continue
                if b[i] and odd_after:
                    swaps += odd_after
                if a[i]:
                    if b[i]:
                        return None
                    odd_after += 1
            if swaps % 2:
                sign = -1
        prod = tuple(x + y for x, y in zip(a, b))
        if self.mono_degree(prod) > self.bound:
            return None
        return sign, prod

    # -- bases --------------------------------------------------------------

    def basis(self, degree: int) -> tuple[Monomial, ...]:
        """Monomials of the given degree, sorted lexicographically by exponent vector."""
        if degree < 0 or degree > self.bound:
            return ()
        if degree not in self._basis_cache:
            out = sorted(self._monomials_of_degree(degree, 0))
            self._basis_cache[degree] = tuple(out)
        return self._basis_cache[degree]

    def _monomials_of_degree(self, degree: int, start: int) -> Iterator[Monomial]:
        n = self.ngens
        if start == n:
            if degree == 0:
                yield (0,) * 0
            return
        d = self.degrees[start]
        if d == 0:
            # degree-zero generators would make every graded piece infinite
            raise AlgebraError("degree-zero generators are not supported in bases")
        max_e = degree // d
        if self.exterior[start]:
            max_e = min(max_e, 1)
        for e in range(max_e + 1):
            for rest in self._monomials_of_degree(degree - e * d, start + 1):
                yield (e,) + rest

    def dimension(self, degree: int) -> int:
        return len(self.basis(degree))

    def poincare_series(self, bound: int | None = None) -> list[int]:
        bound = self.bound if bound is None else bound
        return [self.dimension(d) for d in range(bound + 1)]

    def to_vector(self, x: "AlgElement", degree: int) -> list[int]:
        basis = self.basis(degree)
        pos = self._position(degree)
        vec = [0] * len(basis)
        for m, c in x.terms.items():
            if self.mono_degree(m) == degree:
                vec[pos[m]] = c
        return vec

    def from_vector(self, vec: Sequence[int], degree: int) -> "AlgElement":
        basis = self.basis(degree)
        if len(vec) != len(basis):
            raise AlgebraError("coordinate vector has the wrong length")
        return AlgElement(self, {m: c for m, c in zip(basis, vec)})

    def _position(self, degree: int) -> dict:
        key = ("pos", degree)
        if key not in self._basis_cache:
            self._basis_cache[key] = {m: i for i, m in enumerate(self.basis(degree))}
        return self._basis_cache[key]

    # -- printing -----------------------------------------------------------

    def format_monomial(self, mono: Monomial) -> str:
        parts = []
        for g, e in zip(self.generators, mono):
            if e == 1:
                parts.append(g.name)
            elif e > 1:
                parts.append(f"{g.name}^{e}")
        return " * ".join(parts) if parts else "1"


class AlgElement:
    """An element of a :class:`FreeAlgebra`: sparse, exact, immutable."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: FreeAlgebra, terms: Mapping[Monomial, int]):
        p = algebra.p
        clean = {}
        for m, c in terms.items():
            c %= p
            if c:
                clean[tuple(m)] = c
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, key, value):
        raise AttributeError("AlgElement is immutable")

    def _check(self, other: "AlgElement"):
        if not isinstance(other, AlgElement):
            return NotImplemented
        if other.algebra != self.algebra:
            raise AlgebraError("elements live in different algebras")
        return None

    def _lift(self, other):
        if isinstance(other, int):
            return self.algebra.scalar(other)
        return other

    def __add__(self, other):
        other = self._lift(other)
        if self._check(other) is NotImplemented:
            return NotImplemented
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return AlgElement(self.algebra, terms)

    __radd__ = __add__

    def __neg__(self):
        return AlgElement(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return AlgElement(self.algebra, {m: c * other for m, c in self.terms.items()})
        if self._check(other) is NotImplemented:
            return NotImplemented
        A = self.algebra
        out: dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                r = A.mul_monomials(m1, m2)
                if r is None:
                    continue
                sign, m = r
                out[m] = out.get(m, 0) + sign * c1 * c2
        return AlgElement(A, out)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            raise AlgebraError("negative powers are not defined")
        result = self.algebra.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.algebra.scalar(other)
        if not isinstance(other, AlgElement):
            return NotImplemented
        return self.algebra == other.algebra and self.terms == other.terms

    def __hash__(self):
        return hash((self.algebra, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {self.algebra.mono_degree(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> int:
        """Degree of a nonzero homogeneous element."""
        ds = self.degrees()
        if len(ds) != 1:
            raise AlgebraError(f"element {self} is not homogeneous of a single degree")
        return ds.pop()

    def component(self, degree: int) -> "AlgElement":
        A = self.algebra
        return AlgElement(A, {m: c for m, c in self.terms.items() if A.mono_degree(m) == degree})

    def components(self) -> dict[int, "AlgElement"]:
        return {d: self.component(d) for d in sorted(self.degrees())}

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        A = self.algebra
        return sorted(self.terms.items(), key=lambda mc: (A.mono_degree(mc[0]), mc[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = self.algebra.format_monomial(m)
            if c == 1:
                parts.append(mono)
            elif mono == "1":
                parts.append(str(c))
            else:
                parts.append(f"{c} {mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"AlgElement({self})"


def rref(rows: list[list[int]], p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form over F_p; returns (nonzero rows, pivot columns)."""
    rows = [[x % p for x in r] for r in rows]
    pivots: list[int] = []
    ncols = len(rows[0]) if rows else 0
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = inverse_mod(rows[r][col], p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(rows: list[list[int]], p: int) -> int:
    return len(rref(rows, p)[1]) if rows else 0


def reduce_vector(vec: list[int], echelon: list[list[int]], pivots: list[int], p: int) -> list[int]:
    vec = [x % p for x in vec]
    for row, col in zip(echelon, pivots):
        f = vec[col]
        if f:
            vec = [(a - f * b) % p for a, b in zip(vec, row)]
    return vec


def nullspace(rows: list[list[int]], ncols: int, p: int) -> list[list[int]]:
    """Basis of {v : rows . v = 0} over F_p."""
    if not rows:
        return [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    ech, piv = rref(rows, p)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, c in zip(ech, piv):
            v[c] = (-row[f]) % p
        basis.append(v)
    return basis


class GradedIdeal:
    """Homogeneous ideal of a :class:`FreeAlgebra`, materialised up to the bound."""

    def __init__(self, algebra: FreeAlgebra, relations: Iterable[AlgElement] = ()):
        self.algebra = algebra
        rels = []
        for r in relations:
            if r.algebra != algebra:
                raise AlgebraError("relation lives in a different algebra")
            for d, comp in r.components().items():
                if d > algebra.bound:
                    raise AlgebraError(f"relation {r} has degree {d} above the bound {algebra.bound}")
                if comp:
                    rels.append(comp)
        self.relations = tuple(rels)
        self._spans: dict[int, tuple[list[list[int]], list[int]]] = {}

    def span(self, degree: int) -> tuple[list[list[int]], list[int]]:
        """Echelon basis (rows, pivots) of the degree-``degree`` part of the ideal."""
        if degree not in self._spans:
            A = self.algebra
            rows = []
            for r in self.relations:
                rd = r.degree
                if rd > degree:
                    continue
                for m in A.basis(degree - rd):
                    prod = r * A.monomial_element(m)
                    if prod:
                        rows.append(A.to_vector(prod, degree))
            self._spans[degree] = rref(rows, A.p) if rows else ([], [])
        return self._spans[degree]

    def dimension(self, degree: int) -> int:
        return len(self.span(degree)[1])

    def reduce(self, x: AlgElement) -> AlgElement:
        A = self.algebra
        if x.algebra != A:
            raise AlgebraError("element lives in a different algebra")
        out = A.zero()
        for d, comp in x.components().items():
            ech, piv = self.span(d)
            if not piv:
                out = out + comp
                continue
            vec = reduce_vector(A.to_vector(comp, d), ech, piv, A.p)
            out = out + A.from_vector(vec, d)
        return out

    def contains(self, x: AlgElement) -> bool:
        return self.reduce(x).is_zero()

    def extended(self, more: Iterable[AlgElement]) -> "GradedIdeal":
        return GradedIdeal(self.algebra, list(self.relations) + list(more))

    def same_as(self, other: "GradedIdeal") -> bool:
        """Equality of ideals degree by degree up to the bound."""
        if other.algebra != self.algebra:
            return False
        for d in range(self.algebra.bound + 1):
            a, b = self.span(d), other.span(d)
            if a[1] != b[1] or a[0] != b[0]:
                return False
        return True


class Quotient:
    """A quotient ``free / ideal``; canonical forms are reductions against the ideal."""

    def __init__(self, free: FreeAlgebra, ideal: GradedIdeal | Iterable[AlgElement] = ()):
        self.free = free
        if not isinstance(ideal, GradedIdeal):
            ideal = GradedIdeal(free, ideal)
        if ideal.algebra != free:
            raise AlgebraError("ideal lives in a different algebra")
        self.ideal = ideal

    @property
    def p(self) -> int:
        return self.free.p

    @property
    def bound(self) -> int:
        return self.free.bound

    def reduce(self, x: AlgElement) -> AlgElement:
        return self.ideal.reduce(x)

    def basis(self, degree: int) -> tuple[Monomial, ...]:
        """Monomials that are not pivots of the ideal: a basis of the quotient."""
        _, piv = self.ideal.span(degree)
        piv = set(piv)
        return tuple(m for i, m in enumerate(self.free.basis(degree)) if i not in piv)

    def dimension(self, degree: int) -> int:
        return self.free.dimension(degree) - self.ideal.dimension(degree)

    def poincare_series(self, bound: int | None = None) -> list[int]:
        bound = self.bound if bound is None else bound
        if bound > self.bound:
            raise AlgebraError(f"requested bound {bound} exceeds construction bound {self.bound}")
        return [self.dimension(d) for d in range(bound + 1)]

    def to_vector(self, x: AlgElement, degree: int) -> list[int]:
        """Coordinates of the class of ``x`` in the quotient basis of ``degree``."""
        red = self.reduce(x.component(degree))
        return [red.terms.get(m, 0) for m in self.basis(degree)]

    def from_vector(self, vec: Sequence[int], degree: int) -> AlgElement:
        basis = self.basis(degree)
        if len(vec) != len(basis):
            raise AlgebraError("coordinate vector has the wrong length")
        return AlgElement(self.free, dict(zip(basis, vec)))

    def with_relations(self, more: Iterable[AlgElement]) -> "Quotient":
        return Quotient(self.free, self.ideal.extended(more))


def quotient_reduce(x: AlgElement, ideal: GradedIdeal) -> AlgElement:
    return ideal.reduce(x)


def poincare_series(algebra: FreeAlgebra | Quotient, bound: int | None = None) -> list[int]:
    return algebra.poincare_series(bound)



def apply_hom(x: AlgElement, images: Mapping[str, AlgElement], target: FreeAlgebra) -> AlgElement:
    """Image of ``x`` under the ring map sending each generator name to ``images[name]``.

    Generators missing from ``images`` are sent to zero.  The caller is
    responsible for the images having the right parity, so that this really is
    a map of graded-commutative algebras.
    """
    A = x.algebra
    imgs = [images.get(g.name) for g in A.generators]
    out = target.zero()
    for mono, c in x.terms.items():
        term = target.scalar(c)
        for i, e in enumerate(mono):
            if not e:
                continue
            img = imgs[i]
            if img is None:
                term = target.zero()
                break
            term = term * img**e
        out = out + term
    return out


def rename(x: AlgElement, target: FreeAlgebra) -> AlgElement:
    """Transport ``x`` to an algebra with the same generator degrees, by position."""
    if target.degrees != x.algebra.degrees or target.p != x.algebra.p:
        raise AlgebraError("algebras do not have matching generators")
    return AlgElement(target, x.terms)


def solve(columns: Sequence[Sequence[int]], target: Sequence[int], p: int) -> list[int] | None:
    """Coefficients v with sum_j v_j * columns[j] = target over F_p, or None."""
    n = len(target)
    k = len(columns)
    rows = [[columns[j][i] for j in range(k)] + [target[i]] for i in range(n)]
    if not rows:
        return [0] * k
    ech, piv = rref(rows, p)
    if k in piv:
        return None
    v = [0] * k
    for row, c in zip(ech, piv):
        v[c] = row[k]
    return v
