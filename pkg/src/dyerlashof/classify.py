"""Counting Postnikov extensions with exterior homotopy Lambda_{F_p}(x_n).

Extensions of HF_p of type (HF_p, n) over a base R are classified by
THH_R^{n+2}(HF_p, HF_p) modulo Aut(F_p) = F_p^x.  Over HZ that ring is
F_p[sigma_2]; over the sphere it is the divided power algebra Gamma[alpha_2].
Both rings are taken as given.  The forgetful map sends sigma_2 to alpha_2,
so sigma_2^k goes to k! gamma_k, which dies exactly when k >= p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .fp_graded import is_prime

BASE_RING = {"HZ": "polynomial", "S": "divided"}


class ClassificationError(ValueError):
    pass


@dataclass(frozen=True)
class ThhRing:
    """F_p[sigma_2] (``polynomial``) or Gamma[alpha_2] (``divided``), in cohomological degrees <= bound."""

    variant: str
    p: int
    bound: int = 64

    def __post_init__(self):
        if self.variant not in ("polynomial", "divided"):
            raise ClassificationError(f"unknown variant {self.variant!r}")
        if not is_prime(self.p):
            raise ClassificationError(f"{self.p} is not prime")

    @property
    def symbol(self) -> str:
        return "sigma2" if self.variant == "polynomial" else "alpha2"

    def dimension(self, degree: int) -> int:
        return 1 if 0 <= degree <= self.bound and degree % 2 == 0 else 0

    def basis_name(self, k: int) -> str:
        if self.variant == "polynomial":
            return "1" if k == 0 else (f"sigma2^{k}" if k > 1 else "sigma2")
        return f"gamma{k}"

    def multiply(self, i: int, j: int) -> int:
        """Coefficient c with b_i * b_j = c * b_{i+j} for the basis b_k in degree 2k."""
        if 2 * (i + j) > self.bound:
            return 0
        if self.variant == "polynomial":
            return 1 % self.p
        return math.comb(i + j, i) % self.p

    def generator_power(self, k: int) -> int:
        """Coefficient of b_k in (b_1)^k; for divided powers this is k!."""
        c = 1 % self.p
        for i in range(1, k):
            c = c * self.multiply(i, 1) % self.p
        return c if 2 * k <= self.bound else 0


def comparison_image(p: int, k: int) -> int:
    """phi(sigma_2^k) as a multiple of gamma_k, computed in the divided power ring."""
    return ThhRing("divided", p, 2 * k).generator_power(k)


def orbit_count(p: int, dim: int) -> int:
    """Orbits of F_p^x on F_p^dim: the zero vector plus (p^dim - 1)/(p - 1) lines."""
    return 1 + (p**dim - 1) // (p - 1)


@dataclass
class ClassificationReport:
    p: int
    n: int
    base: str
    count: int
    representatives: list[str]
    annotations: list[str] = field(default_factory=list)
    note: str = ""

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "base": self.base,
            "count": self.count,
            "representatives": self.representatives,
            "annotations": self.annotations,
            "note": self.note,
        }


def postnikov_classes(base: str, p: int, n: int) -> ClassificationReport:
    if base not in BASE_RING:
        raise ClassificationError(f"base must be one of {sorted(BASE_RING)}")
    if n < 0:
        raise ClassificationError("n must be non-negative")
    ring = ThhRing(BASE_RING[base], p, n + 2)
    deg = n + 2
    dim = ring.dimension(deg)
    reps = ["0"]
    if dim:
        reps.append(ring.basis_name(deg // 2))
    report = ClassificationReport(p, n, base, orbit_count(p, dim), reps)
    if base == "HZ" and n == 0:
        report.annotations = ["HΛ_{F_p}(x_0)", "HZ/p^2"]
    if base == "S" and n > 0:
        report.note = (
            "count read off the ring structure; Gamma[alpha_2] is concentrated in even degrees, "
            "so nonzero classes need n even (a sentence stating the reverse parity looks transposed)"
        )
    return report


@dataclass
class CollapseVerdict:
    p: int
    n: int
    k: int
    image_coefficient: int
    collapse: bool
    provenance: str

    @property
    def label(self) -> str:
        return "COLLAPSE" if self.collapse else "NO COLLAPSE"

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "k": self.k,
            "image": f"{self.image_coefficient} gamma{self.k}",
            "verdict": self.label,
            "provenance": self.provenance,
        }


def comparison_collapse(p: int, n: int) -> CollapseVerdict:
    """Does phi: F_p[sigma_2] -> Gamma[alpha_2] kill sigma_2^{(n+2)/2}?

    If it does, the two HZ-algebras with homotopy Lambda_{F_p}(x_n) become
    equivalent as S-algebras.
    """
    if n <= 0 or n % 2:
        raise ClassificationError(f"n = {n}: the comparison needs n even and positive (two HZ classes)")
    k = (n + 2) // 2
    c = comparison_image(p, k)
    provenance = "paper" if n == 2 * p - 2 else "derived"
    return CollapseVerdict(p, n, k, c, c == 0, provenance)


def classification_table(p: int, n_max: int) -> list[dict]:
    rows = []
    for n in range(n_max + 1):
        hz = postnikov_classes("HZ", p, n)
        s = postnikov_classes("S", p, n)
        row = {
            "n": n,
            "hz_classes": hz.count,
            "s_classes": s.count,
            "annotations": hz.annotations,
            "collapse": None,
        }
        if n > 0 and n % 2 == 0:
            row["collapse"] = comparison_collapse(p, n).as_dict()
        rows.append(row)
    return rows


def format_table(p: int, rows: list[dict]) -> str:
    lines = [f"p = {p}", f"{'n':>3}  {'HZ':>3}  {'S':>3}  verdict"]
    for r in rows:
        verdict = ""
        if r["collapse"]:
            c = r["collapse"]
            verdict = f"{c['verdict']} ({c['image']}, {c['provenance']})"
        elif r["annotations"]:
            verdict = ", ".join(r["annotations"])
        lines.append(f"{r['n']:>3}  {r['hz_classes']:>3}  {r['s_classes']:>3}  {verdict}")
    return "\n".join(lines)
