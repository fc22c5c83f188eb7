"""Conversions between MPoly and python-flint multivariate polynomials."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import flint

from .cyclotomic import CycNum
from .mpoly import MPoly
from .ramified import flint_ctx, from_fmpq, to_fmpq


def is_rational_poly(p: MPoly) -> bool:
    for c in p.coefficients():
        if isinstance(c, CycNum):
            if not c.is_rational():
                return False
        elif not isinstance(c, (int, Fraction)):
            return False
    return True


def _rational(c) -> Fraction:
    if isinstance(c, CycNum):
        return c.to_rational()
    return Fraction(c)


def to_flint(p: MPoly, ctx: flint.fmpq_mpoly_ctx, offset: int = 0) -> flint.fmpq_mpoly:
    """Rational MPoly into ctx, its variables mapped to ctx variables offset.."""
    nv = ctx.nvars()
    out = {}
    for e, c in p.terms.items():
        ne = [0] * nv
        ne[offset : offset + len(e)] = e
        out[tuple(ne)] = to_fmpq(_rational(c))
    return ctx.from_dict(out)


def from_flint(q: flint.fmpq_mpoly, nvars: int | None = None, offset: int = 0) -> MPoly:
    nvars = q.context().nvars() - offset if nvars is None else nvars
    terms = {}
    for e, c in q.to_dict().items():
        if any(e[:offset]) or any(e[offset + nvars :]):
            raise ValueError("polynomial involves variables outside the requested range")
        terms[tuple(e[offset : offset + nvars])] = from_fmpq(c)
    return MPoly(nvars, terms)


def cyclotomic_ctx(n: int) -> flint.fmpq_mpoly_ctx:
    return flint_ctx(tuple(f"X{i + 1}" for i in range(n)) + ("zeta",))


def cyc_to_flint(c, m: int, ctx: flint.fmpq_mpoly_ctx) -> flint.fmpq_mpoly:
    """A scalar of Q(zeta_m) as a polynomial in the last ctx variable."""
    nv = ctx.nvars()
    if not isinstance(c, CycNum):
        c = CycNum(m, [c])
    elif c.m != m:
        c = c.embed(m)
    out = {}
    for k, q in enumerate(c.coeffs):
        if q:
            e = [0] * nv
            e[-1] = k
            out[tuple(e)] = to_fmpq(q)
    return ctx.from_dict(out)


def mpoly_to_flint_cyc(p: MPoly, m: int, ctx: flint.fmpq_mpoly_ctx) -> flint.fmpq_mpoly:
    nv = ctx.nvars()
    total = ctx.from_dict({})
    for e, c in p.terms.items():
        mono = list(e) + [0] * (nv - len(e))
        total += cyc_to_flint(c, m, ctx) * ctx.from_dict({tuple(mono): 1})
    return total


def cyclotomic_modulus(m: int, ctx: flint.fmpq_mpoly_ctx) -> flint.fmpq_mpoly:
    from .cyclotomic import cyclotomic_polynomial

    nv = ctx.nvars()
    out = {}
    for k, a in enumerate(cyclotomic_polynomial(m)):
        if a:
            e = [0] * nv
            e[-1] = k
            out[tuple(e)] = a
    return ctx.from_dict(out)


def flint_cyc_to_mpoly(q: flint.fmpq_mpoly, n: int, m: int) -> MPoly:
    """Inverse of mpoly_to_flint_cyc for a polynomial reduced mod Phi_m."""
    grouped: dict[tuple, list] = {}
    for e, c in q.to_dict().items():
        mono = tuple(e[:n])
        vec = grouped.setdefault(mono, [])
        k = e[-1]
        if len(vec) <= k:
            vec.extend([0] * (k + 1 - len(vec)))
        vec[k] = from_fmpq(c)
    terms = {}
    for mono, vec in grouped.items():
        c = CycNum(m, vec)
        terms[mono] = c.to_rational() if c.is_rational() else c
    return MPoly(n, terms)


def substitute_linear(q: flint.fmpq_mpoly, rows: Sequence[flint.fmpq_mpoly], ctx) -> flint.fmpq_mpoly:
    """q(X) with X_i replaced by rows[i]; remaining variables map to themselves."""
    gens = ctx.gens()
    subs = list(rows) + list(gens[len(rows) :])
    return q.compose(*subs, ctx=ctx)
