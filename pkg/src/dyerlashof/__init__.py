"""Mod-p Dyer-Lashof operations on graded-commutative algebras."""

from .fp_graded import AlgElement, FreeAlgebra, GeneratorSpec, GradedIdeal, Quotient
from .dual_steenrod import SteenrodDual
from .r_algebra import AlgebraPresentation, check_morphism, find_isomorphisms, kill_element, postnikov_truncate
from .classify import comparison_collapse, postnikov_classes

__version__ = "0.1.0"

__all__ = [
    "AlgElement", "FreeAlgebra", "GeneratorSpec", "GradedIdeal", "Quotient", "SteenrodDual",
    "AlgebraPresentation", "check_morphism", "find_isomorphisms", "kill_element", "postnikov_truncate",
    "comparison_collapse", "postnikov_classes",
]
