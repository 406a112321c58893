"""Exact finite models of supersymmetric Euclidean field theories and Clifford-module K-theory."""

__version__ = "0.1.0"

from .grassmann import CircleValue, GrassmannAlgebra, GrassmannElement, body, exp_nilpotent_even, multiply
from .clifford import (
    GradedCliffordModule,
    ModuleClass,
    QuotientGroup,
    abs_quotient,
    abs_quotient_complex,
    decompose,
    double,
    irreducible_graded_modules,
    restrict,
)

__all__ = [
    "__version__",
    "CircleValue",
    "GrassmannAlgebra",
    "GrassmannElement",
    "body",
    "exp_nilpotent_even",
    "multiply",
    "GradedCliffordModule",
    "ModuleClass",
    "QuotientGroup",
    "abs_quotient",
    "abs_quotient_complex",
    "decompose",
    "double",
    "irreducible_graded_modules",
    "restrict",
]
