"""The dual Steenrod algebra A_*, truncated at a degree bound.

Elements are stored in the Milnor generators (xi_r, and tau_s for odd p).
The conjugate generators zeta_r = chi(xi_r) and taubar_s = chi(tau_s) are
derived expressions.  Two Dyer-Lashof actions are carried: ``left`` (Q,
coming from the left unit) and ``right`` (Q~, from the right unit), each
given by a table of values on generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .fp_graded import AlgElement, AlgebraError, FreeAlgebra, GeneratorSpec, apply_hom, rename
from .op_expr.action import ActionContext, MissingTableEntry, act, act_iterated
from .op_expr.formal import builtin_degree
from .op_expr.grammar import AtomResolver, check_word, evaluate, parse_ast, parse_equation, ParseError
from .op_expr.words import Word, format_word, make_word, word_degree, is_admissible

SIDES = ("left", "right")


@dataclass(frozen=True)
class QTableEntry:
    side: str
    word: Word
    generator: str
    value: AlgElement
    provenance: str

    def describe(self) -> str:
        tilde = "~" if self.side == "right" else ""
        return f"{format_word(self.word).replace('Q', 'Q' + tilde)} {self.generator} = {self.value}"


class SteenrodDual:
    """Truncated dual Steenrod algebra with its antipode and two Q-actions."""

    def __init__(self, p: int, bound: int | None = None, extra_entries: Iterable[QTableEntry] = ()):
        self.p = p
        self.bound = 2 * p * p if bound is None else bound
        gens, conj = [], []
        if p == 2:
            r = 1
            while 2**r - 1 <= self.bound:
                gens.append(GeneratorSpec(f"xi{r}", 2**r - 1))
                conj.append(GeneratorSpec(f"zeta{r}", 2**r - 1))
                r += 1
        else:
            k = 0
            while 2 * p**k - 1 <= self.bound:
                if k >= 1:
                    gens.append(GeneratorSpec(f"xi{k}", 2 * (p**k - 1)))
                    conj.append(GeneratorSpec(f"zeta{k}", 2 * (p**k - 1)))
                gens.append(GeneratorSpec(f"tau{k}", 2 * p**k - 1))
                conj.append(GeneratorSpec(f"taubar{k}", 2 * p**k - 1))
                k += 1
        self.milnor = FreeAlgebra(p, gens, self.bound)
        self.conjugate = FreeAlgebra(p, conj, self.bound)
        self._tables = {side: {} for side in SIDES}
        for entry in self._shipped_entries():
            self._tables[entry.side][(entry.word, entry.generator)] = entry
        for entry in extra_entries:
            self._install(entry)

    def __repr__(self):
        return f"SteenrodDual(p={self.p}, bound={self.bound})"

    # -- generators ---------------------------------------------------------

    def _need(self, name: str) -> AlgElement:
        deg = builtin_degree(self.p, name)
        if deg is None or not self.milnor.has_generator(name.replace("zeta", "xi").replace("taubar", "tau")):
            raise AlgebraError(f"{name} is not available below the degree bound {self.bound}")
        return deg

    def xi(self, r: int) -> AlgElement:
        if r == 0:
            return self.milnor.one()
        self._need(f"xi{r}")
        return self.milnor.gen(f"xi{r}")

    def tau(self, s: int) -> AlgElement:
        if self.p == 2:
            raise AlgebraError("tau generators exist only for odd p")
        self._need(f"tau{s}")
        return self.milnor.gen(f"tau{s}")

    @cached_property
    def _zetas(self) -> dict[int, AlgElement]:
        # zeta_n = -sum_{j<n} zeta_j xi_{n-j}^{p^j}, from chi applied to the coproduct of xi_n
        out = {0: self.milnor.one()}
        r = 1
        while self.milnor.has_generator(f"xi{r}"):
            acc = self.milnor.zero()
            for j in range(r):
                acc = acc + out[j] * self.xi(r - j) ** (self.p**j)
            out[r] = -acc
            r += 1
        return out

    @cached_property
    def _taubars(self) -> dict[int, AlgElement]:
        # taubar_s + taubar_{s-1} xi_1^{p^{s-1}} + ... + taubar_0 xi_s + tau_s = 0
        out: dict[int, AlgElement] = {}
        s = 0
        while self.p != 2 and self.milnor.has_generator(f"tau{s}"):
            acc = self.tau(s)
            for j in range(s):
                acc = acc + out[j] * self.xi(s - j) ** (self.p**j)
            out[s] = -acc
            s += 1
        return out

    def zeta(self, r: int) -> AlgElement:
        """zeta_r = chi(xi_r) in Milnor coordinates."""
        if r not in self._zetas:
            raise AlgebraError(f"zeta{r} lies above the degree bound {self.bound}")
        return self._zetas[r]

    def taubar(self, s: int) -> AlgElement:
        """taubar_s = chi(tau_s) in Milnor coordinates."""
        if s not in self._taubars:
            raise AlgebraError(f"taubar{s} is not available (p={self.p}, bound={self.bound})")
        return self._taubars[s]

    def element(self, name: str) -> AlgElement:
        """Named generator of either system, expressed in Milnor coordinates."""
        for prefix, fn in (("taubar", self.taubar), ("tau", self.tau), ("zeta", self.zeta), ("xi", self.xi)):
            if name.startswith(prefix) and name[len(prefix):].isdigit():
                return fn(int(name[len(prefix):]))
        raise AlgebraError(f"unknown dual Steenrod generator {name!r}")

    # -- antipode and change of generators ---------------------------------

    @cached_property
    def _chi_images(self) -> dict[str, AlgElement]:
        imgs = {}
        for g in self.milnor.generators:
            if g.name.startswith("xi"):
                imgs[g.name] = self.zeta(int(g.name[2:]))
            else:
                imgs[g.name] = self.taubar(int(g.name[3:]))
        return imgs

    def chi(self, x: AlgElement) -> AlgElement:
        """The antipode: the ring map xi_r -> zeta_r, tau_s -> taubar_s."""
        return apply_hom(x, self._chi_images, self.milnor)

    def to_conjugate(self, x: AlgElement) -> AlgElement:
        """Express ``x`` as a polynomial in zeta/taubar (an element of ``conjugate``).

        Since chi is an involution, x = chi(chi(x)); writing chi(x) = P(xi, tau)
        gives x = P(zeta, taubar).
        """
        return rename(self.chi(x), self.conjugate)

    def from_conjugate(self, y: AlgElement) -> AlgElement:
        imgs = {}
        for g in self.conjugate.generators:
            imgs[g.name] = self.element(g.name)
        return apply_hom(y, imgs, self.milnor)

    def xi_in_zeta(self, r: int) -> AlgElement:
        return self.to_conjugate(self.xi(r))

    def zeta_in_xi(self, r: int) -> AlgElement:
        return self.zeta(r)

    def tau_bar_in_mixed(self, s: int) -> AlgElement:
        return self.taubar(s)

    # -- Dyer-Lashof tables -------------------------------------------------

    def _shipped_entries(self) -> list[QTableEntry]:
        p, out = self.p, []
        if p == 2:
            # Q^{2^s-2} xi_1 = zeta_s and Q~^{2^s-2} xi_1 = xi_s; s = 1 is Q^0 xi_1,
            # which instability already sends to zero, so the table starts at s = 2
            s = 2
            while 2**s - 1 <= self.bound:
                w = ((0, 2**s - 2),)
                out.append(QTableEntry("left", w, "xi1", self.zeta(s), "paper"))
                out.append(QTableEntry("right", w, "xi1", self.xi(s), "paper"))
                s += 1
            return out
        s = 1
        while self.milnor.has_generator(f"tau{s}"):
            n = (p**s - 1) // (p - 1)
            sign = (-1) ** s
            out.append(QTableEntry("left", ((0, n),), "tau0", self.taubar(s) * sign, "paper"))
            out.append(QTableEntry("left", ((1, n),), "tau0", self.zeta(s) * sign, "paper"))
            # right action from chi(Q x) = Q~ chi(x) with chi(tau_0) = -tau_0
            out.append(QTableEntry("right", ((0, n),), "tau0", self.tau(s) * (-sign), "derived:chi"))
            out.append(QTableEntry("right", ((1, n),), "tau0", self.xi(s) * (-sign), "derived:chi"))
            s += 1
        return out

    def table(self, side: str) -> dict:
        if side not in SIDES:
            raise ValueError(f"side must be one of {SIDES}")
        return dict(self._tables[side])

    def entries(self) -> list[QTableEntry]:
        out = []
        for side in SIDES:
            out.extend(self._tables[side][k] for k in sorted(self._tables[side]))
        return out

    def context(self, side: str = "left") -> ActionContext:
        table = self._tables[side]

        def lookup(word, gen):
            entry = table.get((tuple(word), gen))
            return None if entry is None else entry.value

        return ActionContext(self.milnor, lookup, side)

    def q_act(self, side: str, word, x: AlgElement) -> AlgElement:
        """Q^w x (side='left') or Q~^w x (side='right'); raises MissingTableEntry when data runs out."""
        if side not in SIDES:
            raise ValueError(f"side must be one of {SIDES}")
        return act(self.context(side), make_word(self.p, word), x)

    def q_act_iterated(self, side: str, word, x: AlgElement) -> AlgElement:
        return act_iterated(self.context(side), make_word(self.p, word), x)

    # -- extensions ---------------------------------------------------------

    def _install(self, entry: QTableEntry):
        check_entry(self, entry)
        self._tables[entry.side][(entry.word, entry.generator)] = entry

    def with_entries(self, entries: Iterable[QTableEntry]) -> "SteenrodDual":
        extra = [e for e in self.entries() if not e.provenance.startswith(("paper", "derived"))]
        return SteenrodDual(self.p, self.bound, extra + list(entries))

    def entry_from_text(self, side: str, text: str, provenance: str) -> QTableEntry:
        """Build an entry from ``"Q^s gen = expression"`` in the operation grammar."""
        if not provenance:
            raise ValueError("table entries need a provenance string")
        lhs, rhs = parse_equation(text)
        from .op_expr.grammar import Apply, AtomRef

        if not (isinstance(lhs, Apply) and isinstance(lhs.arg, AtomRef)):
            raise ParseError("left side must be an operation word applied to a generator", text, 0)
        if not self.milnor.has_generator(lhs.arg.name):
            raise ParseError(f"{lhs.arg.name!r} is not a Milnor generator", text, lhs.arg.pos)
        word = make_word(self.p, lhs.ops)
        value = self.evaluate_ast(rhs, side, text)
        return QTableEntry(side, word, lhs.arg.name, value, provenance)

    # -- expression evaluation ---------------------------------------------

    def evaluate_ast(self, node, side: str = "left", text: str = "") -> AlgElement:
        check_word(self.p, node, text)
        resolve = AtomResolver(self.p)

        def atom(ref):
            resolve(ref, text)
            try:
                return self.element(ref.name)
            except AlgebraError as exc:
                raise ParseError(str(exc), text, ref.pos) from None

        return evaluate(
            node,
            const=self.milnor.scalar,
            atom=atom,
            apply=lambda word, x: self.q_act(side, word, x),
            text=text,
        )

    def evaluate(self, text: str, side: str = "left") -> AlgElement:
        return self.evaluate_ast(parse_ast(text), side, text)


def check_entry(sd: SteenrodDual, entry: QTableEntry):
    """Gate a user-supplied table entry: degree, instability, chi-compatibility, conflicts."""
    p = sd.p
    if entry.side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}")
    if not entry.provenance:
        raise ValueError("table entries need a provenance string")
    if not sd.milnor.has_generator(entry.generator):
        raise AlgebraError(f"{entry.generator} is not a generator below the bound")
    if not is_admissible(p, entry.word) or not entry.word:
        raise AlgebraError(f"table words must be nonempty and admissible, got {format_word(entry.word)}")
    gdeg = sd.milnor.degrees[sd.milnor.index(entry.generator)]
    target = gdeg + word_degree(p, entry.word)
    value = entry.value
    if value and value.degrees() != {target}:
        raise AlgebraError(f"entry {entry.describe()} is not homogeneous of degree {target}")
    existing = sd._tables[entry.side].get((entry.word, entry.generator))
    if existing is not None and existing.value != value:
        raise AlgebraError(f"entry {entry.describe()} conflicts with {existing.provenance} value {existing.value}")
    # instability decides the value whenever the leading weight does not exceed the degree
    e, s = entry.word[0]
    inner = target - (s if p == 2 else 2 * s - e)
    if len(entry.word) == 1:
        weight = s if p == 2 else 2 * s
        if weight <= gdeg:
            forced = sd.milnor.zero() if (weight < gdeg or e) else sd.milnor.gen(entry.generator) ** p
            if forced != value:
                raise AlgebraError(f"entry {entry.describe()} contradicts instability (forced {forced})")
    elif (s if p == 2 else 2 * s) <= inner:
        raise AlgebraError(f"entry {entry.describe()} is decided by instability")
    # chi-compatibility with the other side when the other side can be evaluated
    other = "right" if entry.side == "left" else "left"
    probe = SteenrodDual.__new__(SteenrodDual)
    probe.__dict__.update(sd.__dict__)
    probe._tables = {k: dict(v) for k, v in sd._tables.items()}
    probe._tables[entry.side][(entry.word, entry.generator)] = entry
    try:
        mirrored = probe.q_act(other, entry.word, probe.chi(probe.milnor.gen(entry.generator)))
    except MissingTableEntry:
        return
    if probe.chi(value) != mirrored:
        raise AlgebraError(f"entry {entry.describe()} breaks chi-equivariance: chi(value) = {probe.chi(value)}, other side gives {mirrored}")


# -- oracles -------------------------------------------------------------------


def series_identity_residual(sd: SteenrodDual) -> dict[int, AlgElement]:
    """Nonzero coefficients of xi(zeta(t)) - t, computed by honest series composition.

    Series are dicts from t-exponent to coefficient.  For p = 2,
    xi(t) = sum xi_i t^{2^i}; for odd p only the even part is used,
    xi(t) = sum xi_i t^{p^i}.  Coefficients are truncated at the bound.
    """
    A, p = sd.milnor, sd.p
    per = 1 if p == 2 else 2  # degree of the coefficient of t^k is per*(k-1)
    top = sd.bound // per + 1

    def mul(f, g):
        h: dict[int, AlgElement] = {}
        for a, x in f.items():
            for b, y in g.items():
                if a + b > top:
                    continue
                h[a + b] = h.get(a + b, A.zero()) + x * y
        return {k: v for k, v in h.items() if v}

    zeta_series = {}
    r = 0
    while p**r <= top:
        if r in sd._zetas:
            zeta_series[p**r] = sd._zetas[r]
        r += 1
    comp: dict[int, AlgElement] = {}
    power = zeta_series  # zeta(t)^{p^i}
    i = 0
    while p**i <= top and (i == 0 or A.has_generator(f"xi{i}")):
        coeff = sd.xi(i)
        for k, v in power.items():
            comp[k] = comp.get(k, A.zero()) + coeff * v
        nxt = power
        for _ in range(p - 1):
            nxt = mul(nxt, power)
        power = nxt
        i += 1
    comp[1] = comp.get(1, A.zero()) - A.one()
    return {k: v for k, v in sorted(comp.items()) if v}


def taubar_via_left_antipode(sd: SteenrodDual, s: int) -> AlgElement:
    """chi(tau_s) from the other antipode identity: -sum_i zeta_{s-i}^{p^i} tau_i."""
    acc = sd.milnor.zero()
    for i in range(s + 1):
        acc = acc + sd.zeta(s - i) ** (sd.p**i) * sd.tau(i)
    return -acc


def eq1_residual(sd: SteenrodDual, s: int, taubar=None) -> AlgElement:
    """Left side of taubar_s + sum_j taubar_j xi_{s-j}^{p^j} + tau_s, for given taubar values."""
    taubar = taubar or (lambda j: taubar_via_left_antipode(sd, j))
    acc = taubar(s) + sd.tau(s)
    for j in range(s):
        acc = acc + taubar(j) * sd.xi(s - j) ** (sd.p**j)
    return acc


def chi_equivariance_failures(sd: SteenrodDual) -> list[tuple[QTableEntry, str]]:
    """Table pairs where chi(Q^w x) != Q~^w chi(x) (or the mirror); unevaluable pairs are skipped."""
    bad = []
    for entry in sd.entries():
        other = "right" if entry.side == "left" else "left"
        x = sd.milnor.gen(entry.generator)
        try:
            rhs = sd.q_act(other, entry.word, sd.chi(x))
        except MissingTableEntry as exc:
            bad.append((entry, f"missing {exc}"))
            continue
        if sd.chi(entry.value) != rhs:
            bad.append((entry, f"chi(value) = {sd.chi(entry.value)} but mirrored action gives {rhs}"))
    return bad
