"""Free unstable algebras over the Dyer-Lashof algebra, degree by degree.

The free unstable algebra on generators x_j is the free graded-commutative
algebra on the symbols Q^I x_j with I admissible and excess(I) + e_1 > |x_j|.
This module lists those symbols up to a bound and counts the resulting
monomials.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .fp_graded import AlgElement, FreeAlgebra, GeneratorSpec, apply_hom, rank
from .op_expr.formal import Atom, format_atom
from .op_expr.words import Word, format_word, op_degree, pair_admissible, passes_excess_gate, is_admissible


@dataclass(frozen=True)
class FreeGenerator:
    word: Word
    atom: Atom
    degree: int
    parity: str

    @property
    def text(self) -> str:
        arg = self.atom.name if not self.word else f"{format_word(self.word)} {self.atom.name}"
        return arg

    def annotated(self, p: int) -> str:
        base = format_atom(p, self.atom, set())
        return base if not self.word else f"{format_word(self.word)} {base}"

    def sort_key(self):
        return (self.degree, self.word, self.atom.name)


def _atoms(gens) -> list[Atom]:
    out = []
    for g in gens:
        if isinstance(g, Atom):
            a = g
        elif isinstance(g, GeneratorSpec):
            a = Atom(g.name, g.degree)
        else:
            a = Atom(*g)
        if a.degree <= 0:
            raise ValueError(f"generator {a.name} must have positive degree")
        out.append(a)
    names = [a.name for a in out]
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate generator names in {names}")
    return out


def _parity(p: int, degree: int) -> str:
    return "odd" if p != 2 and degree % 2 else "even"


def _ops_above(p: int, degree: int, bound: int):
    """Operations (e, s) whose leading weight beats ``degree`` and land at or below ``bound``."""
    s = degree // (1 if p == 2 else 2) + 1
    while True:
        emitted = False
        for e in ((0,) if p == 2 else (1, 0)):
            if degree + op_degree(p, (e, s)) <= bound:
                emitted = True
                yield (e, s)
        if not emitted:
            return
        s += 1


def enumerate_generators(p: int, gens: Iterable, bound: int) -> list[FreeGenerator]:
    """All Q^I x with I admissible, passing the excess gate, and degree at most ``bound``.

    Words are grown from the inside out: a new leading operation must beat
    the degree of what it is applied to (which is the excess gate for the
    whole word) and be admissible against the previous leading operation.
    """
    found = []
    for atom in _atoms(gens):
        if atom.degree > bound:
            continue
        stack: list[tuple[Word, int]] = [((), atom.degree)]
        while stack:
            word, deg = stack.pop()
            found.append(FreeGenerator(word, atom, deg, _parity(p, deg)))
            for op in _ops_above(p, deg, bound):
                if word and not pair_admissible(p, op, word[0]):
                    continue
                stack.append(((op,) + word, deg + op_degree(p, op)))
    found.sort(key=FreeGenerator.sort_key)
    return found


def free_algebra_on(p: int, generators: Sequence[FreeGenerator], bound: int) -> FreeAlgebra:
    specs = [GeneratorSpec(g.annotated(p), g.degree) for g in generators]
    return FreeAlgebra(p, specs, bound)


def free_unstable_poincare(p: int, gens: Iterable, bound: int) -> list[int]:
    """Dimensions, degree by degree, of the free unstable algebra truncated at ``bound``."""
    gens = enumerate_generators(p, gens, bound)
    return free_algebra_on(p, gens, bound).poincare_series()


def free_poincare(p: int, degrees: Iterable[int], bound: int) -> list[int]:
    """Poincare series of the free graded-commutative algebra on generators of these degrees."""
    specs = [GeneratorSpec(f"g{i}", d) for i, d in enumerate(degrees) if d <= bound]
    return FreeAlgebra(p, specs, bound).poincare_series()


def lowest_new_generator(p: int, gens: Iterable, bound: int) -> FreeGenerator | None:
    """The lowest-degree generator that is not one of the inputs."""
    for g in enumerate_generators(p, gens, bound):
        if g.word:
            return g
    return None


def first_difference(a: Sequence[int], b: Sequence[int]) -> int | None:
    for d, (x, y) in enumerate(zip(a, b)):
        if x != y:
            return d
    return None


def brute_force_generators(p: int, gens: Iterable, bound: int) -> list[FreeGenerator]:
    """Independent check: every word with entries up to the bound, filtered by the definitions."""
    out = []
    atoms = _atoms(gens)
    eps = (0,) if p == 2 else (0, 1)
    ops = [(e, s) for s in range(bound + 1) for e in eps if op_degree(p, (e, s)) > 0 or (e, s) == (0, 0)]

    def grow(word, deg, atom):
        if deg > bound:
            return
        if is_admissible(p, word) and passes_excess_gate(p, word, atom.degree):
            out.append(FreeGenerator(word, atom, deg, _parity(p, deg)))
        if len(word) >= bound:
            return
        for op in ops:
            d = op_degree(p, op)
            if d <= 0:
                continue
            grow(word + (op,), deg + d, atom)

    for atom in atoms:
        grow((), atom.degree, atom)
    out.sort(key=FreeGenerator.sort_key)
    return out


def subalgebra_poincare(elements: Sequence[AlgElement], bound: int) -> tuple[list[int], list[int]]:
    """(dimensions of the subalgebra generated by ``elements``, free series on their degrees).

    The two agree exactly when the elements are algebraically independent
    through the bound, i.e. generate a free graded-commutative subalgebra.
    """
    if not elements:
        return [1] + [0] * bound, [1] + [0] * bound
    A = elements[0].algebra
    p = A.p
    degs = [e.degree for e in elements]
    source = FreeAlgebra(p, [GeneratorSpec(f"y{i}", d) for i, d in enumerate(degs)], bound)
    images = {f"y{i}": e for i, e in enumerate(elements)}

    span = []
    for d in range(bound + 1):
        rows = []
        for m in source.basis(d):
            img = apply_hom(source.monomial_element(m), images, A)
            rows.append(A.to_vector(img, d))
        span.append(rank(rows, p) if rows else 0)
    return span, source.poincare_series()
