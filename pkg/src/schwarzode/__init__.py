"""Linear ODEs whose Schwarz maps parametrize curves invariant under finite groups."""

from __future__ import annotations

__version__ = "0.1.0"

from .builder import OdeResult, construct_ode
from .errors import (
    AnalysisScopeError,
    DegenerateInputError,
    ParseError,
    SchwarzError,
    ValidationError,
    VerificationError,
)
from .invariants import GroupSpec, InvariantBasis, klein_preset, preset
from .problem import ProblemSpec, load_problem, parse_problem
from .singular import analyze
from .numeric import NumericConfig, verify

__all__ = [
    "AnalysisScopeError",
    "DegenerateInputError",
    "GroupSpec",
    "InvariantBasis",
    "NumericConfig",
    "OdeResult",
    "ParseError",
    "ProblemSpec",
    "SchwarzError",
    "ValidationError",
    "VerificationError",
    "analyze",
    "construct_ode",
    "klein_preset",
    "load_problem",
    "parse_problem",
    "preset",
    "verify",
]
