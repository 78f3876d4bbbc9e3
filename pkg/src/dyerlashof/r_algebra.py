"""Finitely presented algebras with partial Dyer-Lashof data.

An :class:`AlgebraPresentation` is a truncated quotient of a free
graded-commutative algebra together with a finite list of recorded operation
values.  Everything here quantifies only over recorded values; operations
on other elements are derived through Cartan and instability when the
recorded data on generators suffices, and reported as unverifiable
otherwise.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .fp_graded import (
    AlgElement,
    AlgebraError,
    FreeAlgebra,
    GeneratorSpec,
    GradedIdeal,
    Quotient,
    apply_hom,
    rank,
    rref,
    solve,
)
from .dual_steenrod import SteenrodDual
from .op_expr.action import ActionContext, DegreeBoundExceeded, MissingTableEntry, act
from .op_expr.words import Word, format_word, make_word, word_degree, op_degree


class PresentationError(AlgebraError):
    pass


class SearchBudgetExceeded(RuntimeError):
    def __init__(self, size: int, budget: int):
        self.size = size
        self.budget = budget
        super().__init__(f"isomorphism search needs {size} candidate assignments, budget is {budget}")


@dataclass(frozen=True)
class QDatum:
    word: Word
    arg: AlgElement
    value: AlgElement

    def describe(self) -> str:
        return f"{format_word(self.word)} ({self.arg}) = {self.value}"


def _key(x: AlgElement):
    return frozenset(x.terms.items())


class AlgebraPresentation:
    """Truncated graded-commutative algebra with recorded operation values."""

    def __init__(self, free: FreeAlgebra, relations: Iterable[AlgElement] = (),
                 q_data: Iterable[tuple] = (), name: str = ""):
        self.quotient = Quotient(free, list(relations))
        self.name = name
        self._q: dict = {}
        for item in q_data:
            if isinstance(item, QDatum):
                word, arg, value = item.word, item.arg, item.value
            else:
                word, arg, value = item
            self._record(make_word(free.p, word), arg, value)

    # -- basic structure ----------------------------------------------------

    @property
    def free(self) -> FreeAlgebra:
        return self.quotient.free

    @property
    def p(self) -> int:
        return self.free.p

    @property
    def bound(self) -> int:
        return self.free.bound

    @property
    def relations(self) -> tuple:
        return self.quotient.ideal.relations

    @property
    def q_data(self) -> list[QDatum]:
        return [self._q[k] for k in sorted(self._q, key=lambda k: (self._q[k].arg.degree, k[0], str(self._q[k].arg)))]

    def reduce(self, x: AlgElement) -> AlgElement:
        return self.quotient.reduce(x)

    def gen(self, name: str) -> AlgElement:
        return self.free.gen(name)

    def dimension(self, d: int) -> int:
        return self.quotient.dimension(d)

    def poincare_series(self) -> list[int]:
        return self.quotient.poincare_series()

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<AlgebraPresentation{label} p={self.p} bound={self.bound} dims={self.poincare_series()}>"

    # -- operation data -----------------------------------------------------

    def _record(self, word: Word, arg: AlgElement, value: AlgElement):
        p = self.p
        if arg.algebra != self.free or value.algebra != self.free:
            raise PresentationError("operation data must live in the presentation's free algebra")
        arg = self.reduce(arg)
        value = self.reduce(value)
        if not arg or not arg.is_homogeneous():
            raise PresentationError(f"operation argument {arg} must be a nonzero homogeneous class")
        d = arg.degree
        target = d + word_degree(p, word)
        if value and value.degree != target:
            raise PresentationError(f"{format_word(word)} ({arg}) = {value}: value must have degree {target}")
        if target > self.bound and value:
            raise PresentationError(f"{format_word(word)} ({arg}) lands above the bound")
        # instability on the innermost operation
        e, s = word[-1]
        weight = s if p == 2 else 2 * s
        if weight <= d and len(word) == 1:
            forced = self.reduce(arg**p) if (weight == d and not e) else self.free.zero()
            if forced != value:
                raise PresentationError(
                    f"{format_word(word)} ({arg}) = {value} violates instability (forced value {forced})"
                )
        key = (word, _key(arg))
        old = self._q.get(key)
        if old is not None and old.value != value:
            raise PresentationError(f"conflicting values recorded for {format_word(word)} ({arg})")
        self._q[key] = QDatum(word, arg, value)

    def recorded(self, word: Word, x: AlgElement) -> AlgElement | None:
        x = self.reduce(x)
        hit = self._q.get((tuple(word), _key(x)))
        if hit is not None:
            return hit.value
        # operations are F_p-linear, so scalar multiples of recorded classes are known too
        for c in range(2, self.p):
            hit = self._q.get((tuple(word), _key(self.reduce(x * pow(c, -1, self.p)))))
            if hit is not None:
                return hit.value * c
        return None

    def context(self) -> ActionContext:
        def lookup(word, gen):
            return self.recorded(word, self.free.gen(gen))

        return ActionContext(self.free, lookup, "recorded", self.reduce)

    def q_value(self, word, x: AlgElement) -> AlgElement:
        """Q^w x from recorded data, Cartan and instability; MissingTableEntry if undetermined."""
        word = make_word(self.p, word)
        x = self.reduce(x)
        if not x:
            return self.free.zero()
        if x.is_homogeneous():
            hit = self.recorded(word, x)
            if hit is not None:
                return hit
        try:
            return self.reduce(act(self.context(), word, x))
        except DegreeBoundExceeded:
            # everything above the bound is zero in a truncated algebra
            return self.free.zero()

    def with_q_data(self, q_data: Iterable, name: str | None = None) -> "AlgebraPresentation":
        return AlgebraPresentation(self.free, self.relations, q_data, self.name if name is None else name)

    def bare(self) -> "AlgebraPresentation":
        return AlgebraPresentation(self.free, self.relations, (), self.name)

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "bound": self.bound,
            "generators": [{"name": g.name, "degree": g.degree} for g in self.free.generators],
            "relations": [str(r) for r in self.relations],
            "q_values": [q.describe() for q in self.q_data],
            "poincare": self.poincare_series(),
        }


# -- constructions -------------------------------------------------------------


def from_dual_steenrod(sd: SteenrodDual, side: str = "left") -> AlgebraPresentation:
    """A_* as a presentation, with the chosen side's table as operation data."""
    data = [(e.word, sd.milnor.gen(e.generator), e.value) for e in sd.entries() if e.side == side]
    return AlgebraPresentation(sd.milnor, (), data, name=f"A_*({side})")


def _restrict(x: AlgElement, target: FreeAlgebra) -> AlgElement:
    """Move ``x`` into an algebra on a subset of its generators, dropping terms that vanish there."""
    src = x.algebra
    idx = [src.index(g.name) for g in target.generators]
    kept = set(idx)
    terms = {}
    for mono, c in x.terms.items():
        if any(e for i, e in enumerate(mono) if i not in kept):
            continue
        new = tuple(mono[i] for i in idx)
        if target.mono_degree(new) <= target.bound:
            terms[new] = c
    return AlgElement(target, terms)


def postnikov_truncate(X: AlgebraPresentation, n: int) -> AlgebraPresentation:
    """Keep degrees <= n; generators, relations and operation values above n are dropped."""
    if n < 0 or n > X.bound:
        raise PresentationError(f"truncation degree {n} must lie in [0, {X.bound}]")
    gens = [g for g in X.free.generators if g.degree <= n]
    free = FreeAlgebra(X.p, gens, n)
    rels = []
    for r in X.relations:
        if r.degree <= n:
            rels.append(_restrict(r, free))
    data = []
    for q in X.q_data:
        target = q.arg.degree + word_degree(X.p, q.word)
        if target <= n:
            data.append((q.word, _restrict(q.arg, free), _restrict(q.value, free)))
    return AlgebraPresentation(free, rels, data, name=f"P_{n}({X.name})" if X.name else "")


# -- graded modules over an exterior algebra -----------------------------------


@dataclass
class GradedModule:
    """Finite graded module over Lambda[x_n]: dimensions and the matrices of x_n.

    ``action[l]`` is the matrix (rows indexed by the basis of degree l + n,
    columns by degree l).  Degrees at or below ``known_through`` are known;
    above it the module is unknown unless ``known_through`` is None, which
    means the listed dimensions are the whole module.
    """

    p: int
    n: int
    dims: list[int]
    action: dict[int, list[list[int]]] = field(default_factory=dict)
    known_through: int | None = None

    def dim(self, l: int) -> int:
        if l < 0:
            return 0
        if self.known_through is not None and l > self.known_through:
            raise PresentationError(f"module data needed in degree {l}, known only through {self.known_through}")
        return self.dims[l] if l < len(self.dims) else 0

    def matrix(self, l: int) -> list[list[int]]:
        """Matrix of x_n from degree l to degree l + n."""
        rows, cols = self.dim(l + self.n), self.dim(l)
        m = self.action.get(l)
        if m is None:
            return [[0] * cols for _ in range(rows)]
        if len(m) != rows or any(len(r) != cols for r in m):
            raise PresentationError(f"action matrix in degree {l} has the wrong shape")
        return m

    def check(self):
        """x_n squares to zero and matrices have the right shapes."""
        top = len(self.dims)
        for l in range(top):
            a = self.matrix(l)
            b = self.matrix(l + self.n)
            prod = _matmul(b, a, self.p)
            if any(v for row in prod for v in row):
                raise PresentationError(f"x_n^2 is nonzero on degree {l}")


def _matmul(a, b, p):
    if not a or not b:
        return [[0] * (len(b[0]) if b else 0) for _ in range(len(a))]
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) % p for j in range(len(b[0]))] for i in range(len(a))]


def _rank(m, p):
    return rank([list(r) for r in m], p) if m and m[0] else 0


def tor_exterior(M: GradedModule, n: int | None = None, k_max: int = 3, l_max: int = 10) -> dict:
    """Tor^{Lambda[x_n]}_{k,l}(F_p, M) for k <= k_max, l <= l_max, from the periodic resolution.

    Tor_{0,l} = M_l / x M_{l-n}, and for k >= 1 Tor_{k,l} is the homology at
    M_{l-kn} of the complex whose maps are all multiplication by x.
    Returns ``{(k, l): dimension}``.
    """
    n = M.n if n is None else n
    if n != M.n:
        raise PresentationError("module is over a different exterior algebra")
    needed = l_max
    if M.known_through is not None and M.known_through < needed:
        raise PresentationError(
            f"Tor through internal degree {l_max} needs module data in degrees 0..{needed}; "
            f"known only through {M.known_through}"
        )
    p = M.p
    table = {}
    for k in range(k_max + 1):
        for l in range(l_max + 1):
            src = l - k * n
            if src < 0:
                table[(k, l)] = 0
                continue
            dim_src = M.dim(src)
            incoming = _rank(M.matrix(src - n), p) if src - n >= 0 else 0
            if k == 0:
                table[(k, l)] = dim_src - incoming
            else:
                outgoing = _rank(M.matrix(src), p)
                table[(k, l)] = dim_src - outgoing - incoming
    return table


def module_from_presentation(X: AlgebraPresentation, x: AlgElement) -> GradedModule:
    """X_* as a module over Lambda[x_n] with x_n acting by multiplication by ``x``."""
    n = x.degree
    dims = X.poincare_series()
    action = {}
    for l in range(X.bound + 1):
        if l + n > X.bound:
            continue
        cols = []
        for m in X.quotient.basis(l):
            prod = X.reduce(X.free.monomial_element(m) * x)
            cols.append(X.quotient.to_vector(prod, l + n))
        rows = len(X.quotient.basis(l + n))
        action[l] = [[cols[j][i] for j in range(len(cols))] for i in range(rows)]
    return GradedModule(X.p, n, dims, action, None)


def random_module(rng: random.Random, p: int, n: int, top: int = 12, pieces: int = 5) -> GradedModule:
    """A connective module: free and trivial cyclic pieces, mixed by random changes of basis."""
    dims = [0] * (top + 1)
    maps = []  # (source degree, source index, target index) for free pieces
    for _ in range(rng.randint(1, pieces)):
        a = rng.randint(0, top)
        if rng.random() < 0.5 and a + n <= top:
            i, j = dims[a], dims[a + n]
            dims[a] += 1
            dims[a + n] += 1
            maps.append((a, i, j))
        else:
            dims[a] += 1
    action = {}
    for l in range(top + 1):
        if l + n > top:
            continue
        m = [[0] * dims[l] for _ in range(dims[l + n])]
        for a, i, j in maps:
            if a == l:
                m[j][i] = 1
        action[l] = m
    # conjugate by random invertible matrices in each degree
    bases = [_random_invertible(rng, d, p) for d in dims]
    inverses = [_invert(b, p) for b in bases]
    for l, m in action.items():
        action[l] = _matmul(_matmul(bases[l + n], m, p), inverses[l], p)
    return GradedModule(p, n, dims, action, None)


def _random_invertible(rng, d, p):
    while True:
        m = [[rng.randrange(p) for _ in range(d)] for _ in range(d)]
        if d == 0 or _rank(m, p) == d:
            return m


def _invert(m, p):
    d = len(m)
    if d == 0:
        return []
    aug = [list(row) + [1 if i == j else 0 for j in range(d)] for i, row in enumerate(m)]
    ech, _ = rref(aug, p)
    return [row[d:] for row in ech]


# -- killing a top class -------------------------------------------------------


@dataclass
class KillReport:
    result: AlgebraPresentation
    tor: dict
    tor0_matches: bool


def kill_element(X: AlgebraPresentation, x: AlgElement, k_max: int = 2) -> KillReport:
    """Kill a top-degree class: the degree <= n part of F_p (x) over Lambda[x_n] of X_*.

    Operation data is not carried over; the result is only a ring.
    """
    x = X.reduce(x)
    n = X.bound
    if X.dimension(0) != 1:
        raise PresentationError("the degree-zero part must be F_p")
    if not x:
        return KillReport(X, {}, True)
    if not x.is_homogeneous() or x.degree != n:
        raise PresentationError(f"can only kill a class in the top degree {n}, got {x}")
    M = module_from_presentation(X, x)
    tor = tor_exterior(M, n, k_max, n)
    result = AlgebraPresentation(X.free, list(X.relations) + [x], (), name=f"{X.name}/({x})" if X.name else "")
    tor0 = [tor[(0, l)] for l in range(n + 1)]
    higher = any(v for (k, l), v in tor.items() if k > 0 and k + l <= n)
    if higher:
        raise PresentationError("higher Tor contributes in total degree <= n; the lemma does not apply")
    return KillReport(result, tor, tor0 == result.poincare_series())


# -- morphisms -----------------------------------------------------------------


@dataclass
class MorphismVerdict:
    ok: bool
    violation: dict | None = None
    checked: int = 0

    def __bool__(self):
        return self.ok


def _images(f: Mapping[str, AlgElement], X: AlgebraPresentation, Y: AlgebraPresentation) -> dict:
    imgs = {}
    for g in X.free.generators:
        if g.degree > X.bound:
            continue
        if g.name not in f:
            raise PresentationError(f"no image given for generator {g.name}")
        img = f[g.name]
        if img.algebra != Y.free:
            raise PresentationError(f"image of {g.name} does not live in the target algebra")
        img = Y.reduce(img)
        if img and (not img.is_homogeneous() or img.degree != g.degree):
            raise PresentationError(f"image of {g.name} must have degree {g.degree}, got {img}")
        imgs[g.name] = img
    return imgs


def apply_map(f: Mapping[str, AlgElement], x: AlgElement, Y: AlgebraPresentation) -> AlgElement:
    return Y.reduce(apply_hom(x, f, Y.free))


def check_morphism(f: Mapping[str, AlgElement], X: AlgebraPresentation, Y: AlgebraPresentation,
                   use_q: bool = True) -> MorphismVerdict:
    """Is the generator assignment a well-defined, operation-preserving ring map X -> Y?"""
    if X.p != Y.p:
        raise PresentationError("presentations over different primes")
    imgs = _images(f, X, Y)
    checked = 0
    for r in X.relations:
        checked += 1
        img = apply_map(imgs, r, Y)
        if img:
            return MorphismVerdict(False, {"kind": "relation", "relation": str(r), "image": str(img)}, checked)
    if X.bound < Y.bound:
        # X vanishes above its bound, so products landing there must vanish in Y
        wide = FreeAlgebra(X.p, X.free.generators, Y.bound)
        for d in range(X.bound + 1, Y.bound + 1):
            for m in wide.basis(d):
                checked += 1
                img = Y.reduce(apply_hom(wide.monomial_element(m), imgs, Y.free))
                if img:
                    return MorphismVerdict(
                        False, {"kind": "truncation", "monomial": wide.format_monomial(m), "image": str(img)}, checked
                    )
    if use_q:
        for q in X.q_data:
            checked += 1
            lhs = apply_map(imgs, q.value, Y)
            try:
                rhs = Y.q_value(q.word, apply_map(imgs, q.arg, Y))
            except MissingTableEntry as exc:
                return MorphismVerdict(
                    False,
                    {"kind": "unverifiable", "word": format_word(q.word), "arg": str(q.arg), "reason": str(exc)},
                    checked,
                )
            if lhs != rhs:
                return MorphismVerdict(
                    False,
                    {"kind": "operation", "word": format_word(q.word), "arg": str(q.arg),
                     "f(value)": str(lhs), "value(f(arg))": str(rhs)},
                    checked,
                )
    return MorphismVerdict(True, None, checked)


def degree_matrix(f: Mapping[str, AlgElement], X: AlgebraPresentation, Y: AlgebraPresentation, d: int):
    """Columns: images of X's quotient basis in degree d, in Y's quotient coordinates."""
    cols = []
    for m in X.quotient.basis(d):
        img = apply_map(f, X.free.monomial_element(m), Y)
        cols.append(Y.quotient.to_vector(img, d))
    return cols


def invert_map(f: Mapping[str, AlgElement], X: AlgebraPresentation, Y: AlgebraPresentation) -> dict | None:
    """Generator assignment of the inverse map Y -> X, or None if f is not bijective."""
    top = max(X.bound, Y.bound)
    for d in range(top + 1):
        dx = X.dimension(d) if d <= X.bound else 0
        dy = Y.dimension(d) if d <= Y.bound else 0
        if dx != dy:
            return None
        if dx and rank([list(c) for c in degree_matrix(f, X, Y, d)], X.p) != dx:
            return None
    inv = {}
    for h in Y.free.generators:
        if h.degree > Y.bound:
            continue
        target = Y.quotient.to_vector(Y.free.gen(h.name), h.degree)
        cols = degree_matrix(f, X, Y, h.degree)
        v = solve(cols, target, X.p) if cols else ([] if not any(target) else None)
        if v is None:
            return None
        inv[h.name] = X.quotient.from_vector(v, h.degree) if cols else X.free.zero()
    return inv


def _candidates(X: AlgebraPresentation, Y: AlgebraPresentation):
    per_gen = []
    for g in X.free.generators:
        if g.degree > X.bound:
            continue
        d = g.degree
        dim = Y.dimension(d) if d <= Y.bound else 0
        vecs = [Y.quotient.from_vector(list(v), d) for v in itertools.product(range(X.p), repeat=dim)]
        per_gen.append((g.name, vecs))
    return per_gen


def find_isomorphisms(X: AlgebraPresentation, Y: AlgebraPresentation, use_q: bool = True,
                      budget: int = 10**6) -> list[dict]:
    """Every generator assignment giving an isomorphism X -> Y (respecting recorded operations)."""
    if X.p != Y.p:
        return []
    per_gen = _candidates(X, Y)
    size = 1
    for _, vecs in per_gen:
        size *= len(vecs)
    if size > budget:
        raise SearchBudgetExceeded(size, budget)
    names = [n for n, _ in per_gen]
    found = []
    for choice in itertools.product(*[v for _, v in per_gen]):
        f = dict(zip(names, choice))
        if not check_morphism(f, X, Y, use_q=False):
            continue
        inv = invert_map(f, X, Y)
        if inv is None:
            continue
        if use_q and not (check_morphism(f, X, Y) and check_morphism(inv, Y, X)):
            continue
        found.append(f)
    return found


def compose(f: Mapping[str, AlgElement], g: Mapping[str, AlgElement], X, Y, Z) -> dict:
    """g after f, as a generator assignment X -> Z."""
    return {name: apply_map(g, img, Z) for name, img in f.items()}


# -- the extended module A_* (x) X_* ------------------------------------------


class ExtendedModule:
    """A_* (x) X_* with the maps mu (multiplication) and eta (unit) on homotopy.

    Generators are named ``a:<name>`` for the A_* factor and ``x:<name>`` for
    X_*.  Operations are known on A_* (x) 1, where they come from A_*.
    """

    def __init__(self, X: AlgebraPresentation, A: SteenrodDual | None = None):
        self.X = X
        self.A = A or SteenrodDual(X.p, X.bound)
        if self.A.p != X.p:
            raise PresentationError("prime mismatch between A_* and X")
        gens = [GeneratorSpec(f"a:{g.name}", g.degree) for g in self.A.milnor.generators if g.degree <= X.bound]
        gens += [GeneratorSpec(f"x:{g.name}", g.degree) for g in X.free.generators]
        self.free = FreeAlgebra(X.p, gens, X.bound)
        self._to_x = {f"x:{g.name}": X.free.gen(g.name) for g in X.free.generators}
        rels = [apply_hom(r, {g.name: self.free.gen(f"x:{g.name}") for g in X.free.generators}, self.free)
                for r in X.relations]
        self.quotient = Quotient(self.free, rels)

    @property
    def p(self):
        return self.X.p

    def reduce(self, z: AlgElement) -> AlgElement:
        return self.quotient.reduce(z)

    def a(self, a: AlgElement) -> AlgElement:
        """a (x) 1."""
        imgs = {g.name: self.free.gen(f"a:{g.name}") for g in a.algebra.generators if self.free.has_generator(f"a:{g.name}")}
        return self.reduce(apply_hom(a, imgs, self.free))

    def eta(self, x: AlgElement) -> AlgElement:
        """eta_*(x) = 1 (x) x."""
        imgs = {g.name: self.free.gen(f"x:{g.name}") for g in self.X.free.generators}
        return self.reduce(apply_hom(x, imgs, self.free))

    def mu(self, z: AlgElement) -> AlgElement:
        """mu_*(a (x) x) = a x for a in A_0 and 0 when |a| > 0."""
        return self.X.reduce(apply_hom(z, self._to_x, self.X.free))

    def a_generators(self) -> list[str]:
        return [g.name for g in self.free.generators if g.name.startswith("a:")]

    def x_generators(self) -> list[str]:
        return [g.name for g in self.free.generators if g.name.startswith("x:")]

    def a_degree(self, mono) -> int:
        return sum(e * g.degree for e, g in zip(mono, self.free.generators) if g.name.startswith("a:"))

    def q_on_a(self, word, a: AlgElement) -> AlgElement:
        """Q^w (a (x) 1) = (Q^w a) (x) 1, with the left action on A_*."""
        return self.a(self.A.q_act("left", word, a))


@dataclass
class ChainStep:
    equation: str
    justification: str
    holds: bool
    detail: str = ""

    def as_dict(self):
        return {"equation": self.equation, "justification": self.justification, "holds": self.holds,
                "detail": self.detail}


@dataclass
class TransferResult:
    verdict: str  # "certificate", "counterexample" or "failed"
    steps: list[ChainStep]
    first_failure: ChainStep | None
    assumptions: list[str]
    y1_zero: bool

    def as_dict(self):
        return {
            "verdict": self.verdict,
            "y1_zero": self.y1_zero,
            "first_failure": self.first_failure.as_dict() if self.first_failure else None,
            "steps": [s.as_dict() for s in self.steps],
            "assumptions": self.assumptions,
        }


def extend_and_transfer(X: AlgebraPresentation, Y: AlgebraPresentation,
                        phi: Mapping[str, AlgElement], psi: Mapping[str, AlgElement]) -> TransferResult:
    """Check the argument that a ring isomorphism phi preserves operations, given psi on A_* (x) -.

    ``phi`` assigns X-generators to elements of Y; ``psi`` assigns the
    generators of ``ExtendedModule(X)`` to elements of ``ExtendedModule(Y)``.
    Every step that can be evaluated is evaluated; the verdict is a
    certificate when Y_1 = 0 and every step holds, a counterexample trace
    when Y_1 != 0 and some step fails.
    """
    EX, EY = ExtendedModule(X), ExtendedModule(Y)
    phi = _images(phi, X, Y)
    psi_imgs = {}
    for g in EX.free.generators:
        if g.name not in psi:
            raise PresentationError(f"psi needs an image for {g.name}")
        psi_imgs[g.name] = EY.reduce(psi[g.name])

    def psi_of(z):
        return EY.reduce(apply_hom(z, psi_imgs, EY.free))

    def phi_of(x):
        return apply_map(phi, x, Y)

    # unit compatibility is a precondition: psi(1 (x) x) = 1 (x) phi(x)
    for g in X.free.generators:
        lhs = psi_of(EX.eta(X.gen(g.name)))
        rhs = EY.eta(phi_of(X.gen(g.name)))
        if lhs != rhs:
            raise PresentationError(f"psi is not unit-compatible on {g.name}: {lhs} != {rhs}")

    steps: list[ChainStep] = []
    assumptions = [
        "psi preserves operations (it is induced on HF_p-homology)",
        "mu_Y preserves operations (mu is a map of H_inf HF_p-algebras)",
    ]

    def step(eq, why, holds, detail=""):
        steps.append(ChainStep(eq, why, bool(holds), detail))

    for g in X.free.generators:
        x = X.gen(g.name)
        step(f"ψ(1⊗{g.name}) = 1⊗φ({g.name})", "top square commutes (η_Y∘φ = ψ∘η_X)", True,
             str(psi_of(EX.eta(x))))

    # psi preserves operations on A_* (x) 1 wherever both sides can be evaluated
    for entry in EX.A.entries():
        if entry.side != "left":
            continue
        a = EX.A.milnor.gen(entry.generator)
        if word_degree(X.p, entry.word) + a.degree > X.bound:
            continue
        image = psi_of(EX.a(a))
        inside = _in_a_factor(EY, image)
        if inside is None:
            assumptions.append(f"ψ({format_word(entry.word)} {entry.generator}⊗1) not checkable: "
                               f"ψ({entry.generator}⊗1) leaves A_*⊗1")
            continue
        lhs = psi_of(EX.q_on_a(entry.word, a))
        rhs = EY.q_on_a(entry.word, inside)
        step(f"ψ({format_word(entry.word)} {entry.generator}⊗1) = {format_word(entry.word)} ψ({entry.generator}⊗1)",
             "ψ preserves operations", lhs == rhs, f"{lhs} vs {rhs}")

    tau0 = "xi1" if X.p == 2 else "tau0"
    y1_zero = Y.dimension(1) == 0 if Y.bound >= 1 else True
    val = EY.mu(psi_of(EX.a(EX.A.milnor.gen(tau0))))
    step("μ_Y∘ψ(τ_0⊗1) = 0", "π_1(Y) = 0 and τ_0 has degree 1", not val, f"value {val}")

    for name in EX.a_generators():
        g = name[2:]
        val = EY.mu(psi_of(EX.free.gen(name)))
        step(f"μ_Y∘ψ({g}⊗1) = 0", "A_* is generated by τ_0 over the Dyer-Lashof algebra", not val, f"value {val}")

    bad = []
    for d in range(1, X.bound + 1):
        for m in EX.quotient.basis(d):
            if EX.a_degree(m) > 0:
                val = EY.mu(psi_of(EX.free.monomial_element(m)))
                if val:
                    bad.append(f"{EX.free.format_monomial(m)} -> {val}")
    step("μ_Y∘ψ(a⊗x) = 0 for |a| > 0", "μ_Y∘ψ is a ring map", not bad, "; ".join(bad[:5]))

    for g in X.free.generators:
        x = X.gen(g.name)
        val = EY.mu(psi_of(EX.eta(x)))
        step(f"μ_Y∘ψ(1⊗{g.name}) = φ({g.name})", "ψ(1⊗x) = 1⊗φ(x) and μ_Y(1⊗y) = y",
             val == phi_of(x), f"{val} vs {phi_of(x)}")

    bad = []
    for d in range(X.bound + 1):
        for m in EX.quotient.basis(d):
            z = EX.free.monomial_element(m)
            lhs = EY.mu(psi_of(z))
            rhs = phi_of(EX.mu(z))
            if lhs != rhs:
                bad.append(f"{EX.free.format_monomial(m)}: {lhs} vs {rhs}")
    step("μ_Y∘ψ = φ∘μ_X", "bottom square, checked on a basis", not bad, "; ".join(bad[:5]))

    for q in X.q_data:
        lhs = phi_of(q.value)
        try:
            rhs = Y.q_value(q.word, phi_of(q.arg))
            ok, detail = lhs == rhs, f"{lhs} vs {rhs}"
        except MissingTableEntry as exc:
            ok, detail = False, f"unverifiable: {exc}"
        step(f"φ({format_word(q.word)} ({q.arg})) = {format_word(q.word)} φ({q.arg})",
             "φ(Q^s x) = μ_Y∘ψ(Q^s(1⊗x)) = Q^s μ_Y(1⊗φ(x)) = Q^s φ(x)", ok, detail)

    failure = next((s for s in steps if not s.holds), None)
    if failure is None:
        verdict = "certificate" if y1_zero else "holds-without-hypothesis"
    else:
        verdict = "counterexample" if not y1_zero else "failed"
    return TransferResult(verdict, steps, failure, assumptions, y1_zero)


def _in_a_factor(E: ExtendedModule, z: AlgElement) -> AlgElement | None:
    """If z only involves A_* generators, return it as an element of A_*."""
    A = E.A.milnor
    terms = {}
    a_idx = [E.free.index(f"a:{g.name}") if E.free.has_generator(f"a:{g.name}") else None for g in A.generators]
    for mono, c in z.terms.items():
        if any(e for g, e in zip(E.free.generators, mono) if g.name.startswith("x:")):
            return None
        terms[tuple(mono[i] if i is not None else 0 for i in a_idx)] = c
    return AlgElement(A, terms)
