"""Exact arithmetic substrate."""

from .cyclotomic import CycNum, cyc_reduce, cyclotomic_polynomial
from .linalg import bareiss_det, det, nullspace_cofactor
from .mpoly import MPoly, mpoly_partial
from .radical import RadicalElement
from .ramified import RamifiedFunction, ratfun_normalize

__all__ = [
    "CycNum",
    "MPoly",
    "RadicalElement",
    "RamifiedFunction",
    "bareiss_det",
    "cyc_reduce",
    "cyclotomic_polynomial",
    "det",
    "mpoly_partial",
    "nullspace_cofactor",
    "ratfun_normalize",
]
