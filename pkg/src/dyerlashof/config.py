"""Declarative config files (YAML or JSON) for presentations and evaluation contexts.

A presentation::

    prime: 2
    bound: 3
    generators: [{name: xi1, degree: 1}, {name: xi2, degree: 3}]
    relations: ["xi1^4", "xi2^2", "xi1 * xi2"]
    q_values: ["Q^2 xi1 = xi1^3"]

A dual Steenrod context::

    prime: 3
    bound: 18
    dual_steenrod: true
    table:
      - {side: left, entry: "Q^4 tau0 = ...", provenance: "my notes"}

Relations that land above the bound are zero in the truncated algebra and
are accepted silently.
"""

from __future__ import annotations

from pathlib import Path

import yaml

from .dual_steenrod import SteenrodDual
from .fp_graded import AlgElement, FreeAlgebra, GeneratorSpec, is_prime
from .op_expr.grammar import Apply, AtomRef, ParseError, check_word, evaluate, parse_ast, parse_equation
from .op_expr.words import make_word
from .r_algebra import AlgebraPresentation

BUILTIN_CONTEXTS = {"p2-dual": (2, 31), "p3-dual": (3, 18)}


class ConfigError(ValueError):
    pass


def load_file(path) -> dict:
    text = Path(path).read_text()
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a mapping at top level")
    return data


def _prime(data: dict) -> int:
    p = data.get("prime", data.get("p"))
    if not isinstance(p, int) or not is_prime(p):
        raise ConfigError(f"prime must be a prime integer, got {p!r}")
    return p


def _generators(data: dict) -> list[GeneratorSpec]:
    raw = data.get("generators", [])
    if isinstance(raw, dict):
        raw = [{"name": k, "degree": v} for k, v in raw.items()]
    gens = []
    for g in raw:
        if not isinstance(g, dict) or "name" not in g or "degree" not in g:
            raise ConfigError(f"generator entries need a name and a degree, got {g!r}")
        gens.append(GeneratorSpec(str(g["name"]), int(g["degree"])))
    return gens


def element_from_ast(free: FreeAlgebra, node, text: str = "") -> AlgElement:
    """Evaluate an operation-free expression in ``free``."""

    def atom(ref: AtomRef):
        if not free.has_generator(ref.name):
            raise ParseError(f"unknown generator {ref.name!r}", text, ref.pos)
        deg = free.degrees[free.index(ref.name)]
        if ref.degree is not None and ref.degree != deg:
            raise ParseError(f"degree annotation {ref.degree} does not match |{ref.name}| = {deg}", text, ref.pos)
        return free.gen(ref.name) if deg <= free.bound else free.zero()

    def apply(word, x):
        raise ParseError("operations are not allowed here", text, 0)

    return evaluate(node, const=free.scalar, atom=atom, apply=apply, text=text)


def element_from_text(free: FreeAlgebra, text: str) -> AlgElement:
    return element_from_ast(free, parse_ast(text), text)


def q_value_from_text(free: FreeAlgebra, text: str) -> tuple:
    """``"Q^2 xi1 = xi1^3"`` -> (word, argument, value)."""
    lhs, rhs = parse_equation(text)
    if not isinstance(lhs, Apply):
        raise ParseError("left side must be an operation word applied to an element", text, 0)
    check_word(free.p, lhs, text)
    word = make_word(free.p, lhs.ops)
    return word, element_from_ast(free, lhs.arg, text), element_from_ast(free, rhs, text)


def presentation_from_dict(data: dict, name: str = "") -> AlgebraPresentation:
    p = _prime(data)
    bound = int(data.get("bound", 0))
    free = FreeAlgebra(p, _generators(data), bound)
    rels = [element_from_text(free, r) for r in data.get("relations", [])]
    q = [q_value_from_text(free, t) for t in data.get("q_values", [])]
    return AlgebraPresentation(free, [r for r in rels if r], q, name=data.get("name", name))


def load_presentation(path) -> AlgebraPresentation:
    return presentation_from_dict(load_file(path), name=Path(path).stem)


def dual_from_dict(data: dict) -> SteenrodDual:
    p = _prime(data)
    sd = SteenrodDual(p, data.get("bound"))
    entries = []
    for item in data.get("table", []):
        if not isinstance(item, dict) or "entry" not in item:
            raise ConfigError(f"table items need 'side', 'entry' and 'provenance', got {item!r}")
        prov = item.get("provenance")
        if not prov:
            raise ConfigError(f"table entry {item['entry']!r} has no provenance")
        entries.append(sd.entry_from_text(item.get("side", "left"), item["entry"], str(prov)))
    return sd.with_entries(entries) if entries else sd


def load_context(spec: str | None, p: int | None = None, bound: int | None = None):
    """A builtin name, a config path, or None (the dual Steenrod algebra at ``p``).

    Returns a SteenrodDual or an AlgebraPresentation.
    """
    if spec is None:
        p = p or 2
        return SteenrodDual(p, bound)
    if spec in BUILTIN_CONTEXTS:
        bp, bb = BUILTIN_CONTEXTS[spec]
        if p is not None and p != bp:
            raise ConfigError(f"context {spec} is at p = {bp}, not {p}")
        return SteenrodDual(bp, bound if bound is not None else bb)
    data = load_file(spec)
    if p is not None and _prime(data) != p:
        raise ConfigError(f"{spec} is at p = {_prime(data)}, not {p}")
    if bound is not None:
        data = dict(data, bound=bound)
    if data.get("dual_steenrod"):
        return dual_from_dict(data)
    return presentation_from_dict(data, name=Path(spec).stem)
