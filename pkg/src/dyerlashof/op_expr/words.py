"""Operation words beta^e1 Q^s1 ... beta^ek Q^sk and their Adem rewriting.

A word is a tuple of ``(e, s)`` pairs read left to right; the leftmost pair
is applied last.  At p = 2 every ``e`` is 0 and ``Q^s`` raises degree by ``s``;
at odd p, ``beta^e Q^s`` raises degree by ``2s(p-1) - e``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

Word = tuple  # tuple[tuple[int, int], ...]

INFINITY = math.inf


class WordError(ValueError):
    pass


def make_word(p: int, entries: Iterable) -> Word:
    """Build a word from ``[s1, s2, ...]`` (p = 2) or ``[(e1, s1), ...]``."""
    out = []
    for item in entries:
        if isinstance(item, int):
            e, s = 0, item
        else:
            e, s = item
        if e not in (0, 1):
            raise WordError(f"Bockstein flag must be 0 or 1, got {e}")
        if p == 2 and e:
            raise WordError("no Bockstein decorations at p = 2")
        if s < 0:
            raise WordError(f"negative operation index {s}")
        out.append((e, s))
    return tuple(out)


def op_degree(p: int, op: tuple[int, int]) -> int:
    e, s = op
    if p == 2:
        return s
    return 2 * s * (p - 1) - e


def word_degree(p: int, word: Word) -> int:
    return sum(op_degree(p, op) for op in word)


def excess(p: int, word: Word):
    """Excess of a sequence; the empty sequence has infinite excess."""
    if not word:
        return INFINITY
    e1, s1 = word[0]
    tail = word_degree(p, word[1:])
    if p == 2:
        return s1 - tail
    return 2 * s1 - e1 - tail


def passes_excess_gate(p: int, word: Word, arg_degree: int) -> bool:
    """excess(I) + e_1 > |x|, the condition for Q^I x to be a free generator."""
    if not word:
        return True
    return excess(p, word) + word[0][0] > arg_degree


def pair_admissible(p: int, left: tuple[int, int], right: tuple[int, int]) -> bool:
    if p == 2:
        return left[1] <= 2 * right[1]
    return left[1] <= p * right[1] - right[0]


def is_admissible(p: int, word: Word) -> bool:
    return all(pair_admissible(p, word[j], word[j + 1]) for j in range(len(word) - 1))


def first_inadmissible(p: int, word: Word, strategy: str = "left") -> int | None:
    idx = range(len(word) - 1)
    if strategy == "right":
        idx = reversed(idx)
    for j in idx:
        if not pair_admissible(p, word[j], word[j + 1]):
            return j
    return None


def format_word(word: Word) -> str:
    parts = []
    for e, s in word:
        parts.append(("b " if e else "") + f"Q^{s}")
    return " ".join(parts)


def binom_pair(a: int, b: int, p: int) -> int:
    """(a, b) = (a+b)! / (a! b!) mod p, zero when either entry is negative."""
    if a < 0 or b < 0:
        return 0
    return math.comb(a + b, a) % p


@lru_cache(maxsize=None)
def adem_pair(p: int, left: tuple[int, int], right: tuple[int, int]) -> tuple:
    """Rewrite an inadmissible pair as a combination of admissible pairs.

    Returns a tuple of ``(coefficient, word)`` with words of length two (or
    empty when everything cancels).  Raises if the pair is already admissible.
    """
    if pair_admissible(p, left, right):
        raise WordError(f"pair {format_word((left, right))} is admissible")
    e1, r = left
    e2, s = right
    out: dict[Word, int] = {}

    def add(coef, word):
        coef %= p
        if coef:
            out[word] = (out.get(word, 0) + coef) % p

    if p == 2:
        for i in range(0, r - s):
            add(binom_pair(2 * i - r, r - s - i - 1, 2), ((0, r + s - i), (0, i)))
    elif e2 == 0:
        for i in range(0, r - (p - 1) * s):
            c = (-1) ** (r + i) * binom_pair(p * i - r, r - (p - 1) * s - i - 1, p)
            add(c, ((e1, r + s - i), (0, i)))
    else:
        for i in range(0, r - (p - 1) * s + 1):
            sign = (-1) ** (r + i)
            c1 = sign * binom_pair(p * i - r, r - (p - 1) * s - i, p)
            c2 = -sign * binom_pair(p * i - r - 1, r - (p - 1) * s - i, p)
            # beta applied on the left kills any term that already starts with beta
            if not e1:
                add(c1, ((1, r + s - i), (0, i)))
            add(c2, ((e1, r + s - i), (1, i)))
    return tuple(sorted((c, w) for w, c in out.items() if c))


@dataclass(frozen=True)
class AdmissibleSequence:
    """A word together with its prime; thin convenience wrapper."""

    p: int
    entries: Word

    @classmethod
    def of(cls, p: int, entries) -> "AdmissibleSequence":
        return cls(p, make_word(p, entries))

    @property
    def degree(self) -> int:
        return word_degree(self.p, self.entries)

    @property
    def excess(self):
        return excess(self.p, self.entries)

    @property
    def is_admissible(self) -> bool:
        return is_admissible(self.p, self.entries)

    def __str__(self):
        return format_word(self.entries)


def normalize_words(p: int, combo: dict, strategy: str = "left") -> dict:
    """Rewrite a linear combination of words into admissible words.

    ``combo`` maps words to coefficients.  ``strategy`` picks which
    inadmissible adjacent pair is rewritten first; the result must not depend
    on it.
    """
    done: dict[Word, int] = {}
    todo = dict(combo)
    while todo:
        word, coef = todo.popitem()
        coef %= p
        if not coef:
            continue
        j = first_inadmissible(p, word, strategy)
        if j is None:
            done[word] = (done.get(word, 0) + coef) % p
            continue
        for c, repl in adem_pair(p, word[j], word[j + 1]):
            new = word[:j] + repl + word[j + 2:]
            todo[new] = (todo.get(new, 0) + c * coef) % p
    return {w: c for w, c in sorted(done.items()) if c}


def adem_normalize(p: int, word: Word, strategy: str = "left") -> dict:
    return normalize_words(p, {tuple(word): 1}, strategy)
