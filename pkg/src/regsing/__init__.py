"""Local solutions of linear differential equations at a regular singular point.

Exact arithmetic over Q and finite fields: indicial data, Frobenius-type
solution bases in characteristic 0 and p, p-curvature and prime scans.
"""

from .diffop import DiffOp, indicial, is_regular_singular, shift_normalize
from .errors import (
    BadPrime,
    DomainError,
    IncompleteSplitting,
    IrregularSingularity,
    MathError,
    NonRationalExponent,
    ParseError,
    RegsingError,
)
from .exactalg import FieldDesc, FieldElem, Poly
from .frobenius0 import solve0
from .frobeniusp import solve_p
from .parser import parse
from .pcurvature import grothendieck_scan, p_curvature

__all__ = [
    "BadPrime",
    "DiffOp",
    "DomainError",
    "FieldDesc",
    "FieldElem",
    "IncompleteSplitting",
    "IrregularSingularity",
    "MathError",
    "NonRationalExponent",
    "ParseError",
    "Poly",
    "RegsingError",
    "grothendieck_scan",
    "indicial",
    "is_regular_singular",
    "p_curvature",
    "parse",
    "shift_normalize",
    "solve0",
    "solve_p",
]
