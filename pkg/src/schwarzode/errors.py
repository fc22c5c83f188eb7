"""Typed errors raised across the package.

Each class carries the process exit code the CLI maps it to.
"""

from __future__ import annotations


class SchwarzError(Exception):
    exit_code = 1


class ParseError(SchwarzError):
    """Malformed problem file or expression; carries an optional position."""

    exit_code = 2

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{message} ({where})"
        super().__init__(message)


class ValidationError(SchwarzError):
    exit_code = 2


class DegenerateInputError(SchwarzError):
    """Algebraic input violates a genericity condition of the construction."""

    exit_code = 3


class DegenerateDependence(DegenerateInputError):
    pass


class DegenerateGeneratorSet(DegenerateInputError):
    pass


class NotExpressible(DegenerateInputError):
    pass


class AnalysisScopeError(SchwarzError):
    exit_code = 4


class IrregularSingularity(AnalysisScopeError):
    pass


class NonRationalExponents(AnalysisScopeError):
    pass


class LogarithmicCase(AnalysisScopeError):
    pass


class VerificationError(SchwarzError):
    exit_code = 5


class NoInitialPoint(VerificationError):
    pass


class IntegrationStalled(VerificationError):
    pass
