"""Sparse multivariate polynomials over an arbitrary exact coefficient ring.

Terms live in a dict keyed by exponent tuples.  Coefficients may be ints,
Fractions, CycNum or RamifiedFunction values -- anything with exact ring
arithmetic and a working ``== 0``.  Canonical term order is degree-lex.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Sequence


def _is_zero(c) -> bool:
    return c == 0


def deglex_key(exp: tuple[int, ...]) -> tuple:
    return (sum(exp), exp)


class MPoly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        clean = {}
        if terms:
            for exp, c in terms.items():
                if len(exp) != nvars:
                    raise ValueError(f"exponent {exp} does not have {nvars} entries")
                if not _is_zero(c):
                    clean[tuple(exp)] = c
        self.terms = clean

    # -- constructors -------------------------------------------------
    @classmethod
    def constant(cls, nvars: int, c) -> "MPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, i: int, coeff=1) -> "MPoly":
        exp = [0] * nvars
        exp[i] = 1
        return cls(nvars, {tuple(exp): coeff})

    @classmethod
    def gens(cls, nvars: int) -> list["MPoly"]:
        return [cls.variable(nvars, i) for i in range(nvars)]

    def zero(self) -> "MPoly":
        return MPoly(self.nvars)

    # -- inspection ---------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def coefficient(self, exp: Sequence[int]):
        return self.terms.get(tuple(exp), 0)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def homogeneous_components(self) -> dict[int, "MPoly"]:
        parts: dict[int, dict] = {}
        for e, c in self.terms.items():
            parts.setdefault(sum(e), {})[e] = c
        return {d: MPoly(self.nvars, t) for d, t in sorted(parts.items())}

    def sorted_terms(self) -> list[tuple[tuple[int, ...], object]]:
        return sorted(self.terms.items(), key=lambda t: deglex_key(t[0]), reverse=True)

    def leading_term(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        exp = max(self.terms, key=deglex_key)
        return exp, self.terms[exp]

    # -- arithmetic ---------------------------------------------------
    def _lift(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other.nvars != self.nvars:
                raise ValueError("polynomials live in different variable counts")
            return other
        return MPoly.constant(self.nvars, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                s = out[e] + c
                if _is_zero(s):
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = c
        return MPoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            if _is_zero(other):
                return self.zero()
            return MPoly(self.nvars, {e: c * other for e, c in self.terms.items()})
        other = self._lift(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if e in out:
                    out[e] = out[e] + c1 * c2
                else:
                    out[e] = c1 * c2
        return MPoly(self.nvars, out)

    def __rmul__(self, other):
        if _is_zero(other):
            return self.zero()
        return MPoly(self.nvars, {e: other * c for e, c in self.terms.items()})

    def __truediv__(self, scalar):
        if isinstance(scalar, MPoly):
            return self.exact_div(scalar)
        if isinstance(scalar, int):
            scalar = Fraction(scalar)
        return MPoly(self.nvars, {e: c / scalar for e, c in self.terms.items()})

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = MPoly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        try:
            return self.terms == MPoly.constant(self.nvars, other).terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def exact_div(self, divisor: "MPoly") -> "MPoly":
        """Quotient of an exact division; raises ArithmeticError otherwise."""
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lexp, lc = divisor.leading_term()
        rem = self
        quot: dict = {}
        while rem.terms:
            exp, c = rem.leading_term()
            shift = tuple(a - b for a, b in zip(exp, lexp))
            if min(shift) < 0:
                raise ArithmeticError("polynomial division is not exact")
            q = c / lc
            quot[shift] = q
            rem = rem - MPoly(self.nvars, {shift: q}) * divisor
        return MPoly(self.nvars, quot)

    # -- calculus and substitution -----------------------------------
    def partial(self, i: int) -> "MPoly":
        """Formal derivative with respect to variable i (0-based)."""
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                ne = list(e)
                ne[i] = k - 1
                out[tuple(ne)] = c * k
        return MPoly(self.nvars, out)

    def evaluate(self, values: Sequence):
        """Substitute ring elements (or MPolys) for every variable."""
        powers: list[dict[int, object]] = [{} for _ in range(self.nvars)]

        def pw(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = values[i] ** k
            return cache[k]

        total = 0
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    term = term * pw(i, k)
            total = total + term
        return total

    def compose(self, polys: Sequence["MPoly"]) -> "MPoly":
        if len(polys) != self.nvars:
            raise ValueError("need one substitution per variable")
        target = polys[0].nvars if polys else 0
        result = self.evaluate(polys)
        if not isinstance(result, MPoly):
            result = MPoly.constant(target, result)
        return result

    def map_coeffs(self, fn: Callable) -> "MPoly":
        return MPoly(self.nvars, {e: fn(c) for e, c in self.terms.items()})

    def coefficients(self) -> Iterable:
        return self.terms.values()

    # -- display ------------------------------------------------------
    def to_str(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        names = names or [f"X{i + 1}" for i in range(self.nvars)]
        out = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k
            )
            cs = str(c)
            if not mono:
                out.append(cs)
            elif c == 1:
                out.append(mono)
            elif c == -1:
                out.append("-" + mono)
            else:
                if any(ch in cs[1:] for ch in "+- ") or "/" in cs:
                    cs = f"({cs})"
                out.append(f"{cs}*{mono}")
        return " + ".join(out).replace("+ -", "- ")

    def __repr__(self):
        return f"MPoly({self.to_str()})"


def mpoly_partial(p: MPoly, i: int) -> MPoly:
    """Partial derivative with respect to X_i, 1-based as in the math."""
    if not 1 <= i <= p.nvars:
        raise IndexError(f"variable index {i} outside 1..{p.nvars}")
    return p.partial(i - 1)
