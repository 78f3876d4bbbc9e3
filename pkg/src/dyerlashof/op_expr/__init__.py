"""Dyer-Lashof operation words: bookkeeping, rewriting, parsing, evaluation."""

from .words import (
    AdmissibleSequence,
    INFINITY,
    Word,
    adem_normalize,
    adem_pair,
    excess,
    format_word,
    is_admissible,
    make_word,
    normalize_words,
    passes_excess_gate,
    word_degree,
)
from .formal import Atom, OpPolynomial, Symbol, apply_op, apply_to_symbol, builtin_degree, make_symbol
from .grammar import ParseError, parse, parse_ast, parse_equation, format_ast, to_text
from .action import ActionContext, DegreeBoundExceeded, MissingTableEntry, act, act_iterated

__all__ = [
    "AdmissibleSequence", "INFINITY", "Word", "adem_normalize", "adem_pair", "excess", "format_word",
    "is_admissible", "make_word", "normalize_words", "passes_excess_gate", "word_degree",
    "Atom", "OpPolynomial", "Symbol", "apply_op", "apply_to_symbol", "builtin_degree", "make_symbol",
    "ParseError", "parse", "parse_ast", "parse_equation", "format_ast", "to_text",
    "ActionContext", "DegreeBoundExceeded", "MissingTableEntry", "act", "act_iterated",
]
