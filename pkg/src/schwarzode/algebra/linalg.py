"""Exact determinants and cofactor null vectors over commutative rings."""

from __future__ import annotations

from typing import Sequence

from ..errors import DegenerateDependence

COFACTOR_MAX = 4


def _is_zero(x) -> bool:
    if hasattr(x, "is_zero"):
        return x.is_zero()
    return x == 0


def _exact_div(a, b):
    if hasattr(a, "exact_div"):
        return a.exact_div(b)
    return a / b


def _cofactor_det(m: list[list]):
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    # expand along the last column: callers put the bulkiest column there
    total = None
    for i in range(n):
        entry = m[i][n - 1]
        if _is_zero(entry):
            continue
        minor = [row[: n - 1] for k, row in enumerate(m) if k != i]
        term = _cofactor_det(minor) * entry
        if (i + n - 1) % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        return m[0][0] - m[0][0]
    return total


def bareiss_det(m: Sequence[Sequence]):
    """Fraction-free Bareiss elimination; every division is exact."""
    a = [list(row) for row in m]
    n = len(a)
    sign = 1
    prev = None
    for k in range(n - 1):
        if _is_zero(a[k][k]):
            swap = next((r for r in range(k + 1, n) if not _is_zero(a[r][k])), None)
            if swap is None:
                return a[0][0] - a[0][0]
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                v = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = v if prev is None else _exact_div(v, prev)
        prev = a[k][k]
    d = a[n - 1][n - 1]
    return d if sign > 0 else -d


def det(m: Sequence[Sequence]):
    """Exact determinant of a square matrix.

    Cofactor expansion up to 4x4, Bareiss above.
    """
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    if n <= COFACTOR_MAX:
        return _cofactor_det([list(row) for row in m])
    return bareiss_det(m)


def nullspace_cofactor(m: Sequence[Sequence]) -> list:
    """Null vector of an n x (n+1) matrix from its signed maximal minors.

    C_i = (-1)^i det(m with column i deleted), so that m . C = 0 by
    Laplace expansion of a matrix with a repeated row.
    """
    n = len(m)
    if any(len(row) != n + 1 for row in m):
        raise ValueError("nullspace_cofactor expects an n x (n+1) matrix")
    out = []
    for i in range(n + 1):
        minor = [list(row[:i]) + list(row[i + 1 :]) for row in m]
        d = det(minor)
        out.append(-d if i % 2 else d)
    if all(_is_zero(c) for c in out):
        raise DegenerateDependence("degenerate dependence: matrix has rank below n")
    return out
