"""Rational functions of z (and parameters) admitting fractional powers.

A RamifiedFunction is a quotient of polynomials in *root* variables.  Every
base variable v (``z`` or a parameter such as ``mu``) is tied to its root by
``v = sign * root^r``.  Fractional powers of v become integer powers of the
root; ``sign = -1`` absorbs expressions like ``(-mu)^(1/9)``.

Numerator and denominator are python-flint ``fmpq_mpoly`` objects; flint does
the multivariate gcd that keeps every value in lowest terms.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Mapping

import flint

BASE_ORDER_FIRST = "z"


def root_name(base: str) -> str:
    return "w" if base == BASE_ORDER_FIRST else f"{base}_root"


def order_bases(bases) -> tuple[str, ...]:
    bases = set(bases)
    head = (BASE_ORDER_FIRST,) if BASE_ORDER_FIRST in bases else ()
    return head + tuple(sorted(bases - {BASE_ORDER_FIRST}))


@lru_cache(maxsize=None)
def flint_ctx(names: tuple[str, ...]) -> flint.fmpq_mpoly_ctx:
    return flint.fmpq_mpoly_ctx.get(names if names else ("_",), "deglex")


def to_fmpq(q) -> flint.fmpq:
    if isinstance(q, flint.fmpq):
        return q
    q = Fraction(q)
    return flint.fmpq(q.numerator, q.denominator)


def from_fmpq(q) -> Fraction:
    return Fraction(int(q.p), int(q.q))


class RamificationConflict(ArithmeticError):
    pass


class RamifiedFunction:
    """Element of Q(root_1, ..., root_k) with base_i = sign_i * root_i^r_i."""

    __slots__ = ("bases", "ram", "num", "den")

    def __init__(self, bases, ram, num, den=None, *, normalize: bool = True):
        self.bases = tuple(bases)
        self.ram = tuple((int(r), int(s)) for r, s in ram)
        ctx = self.ctx
        if not isinstance(num, flint.fmpq_mpoly):
            num = ctx.from_dict({(0,) * max(len(self.bases), 1): to_fmpq(num)})
        if den is None:
            den = ctx.from_dict({(0,) * max(len(self.bases), 1): 1})
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        self.num = num
        self.den = den
        if normalize:
            self._normalize()

    # -- construction -------------------------------------------------
    @property
    def ctx(self) -> flint.fmpq_mpoly_ctx:
        return flint_ctx(tuple(root_name(b) for b in self.bases))

    @classmethod
    def constant(cls, q) -> "RamifiedFunction":
        return cls((), (), q)

    @classmethod
    def variable(cls, base: str, r: int = 1, sign: int = 1) -> "RamifiedFunction":
        """The base variable itself, expressed through a root of index r."""
        ctx = flint_ctx((root_name(base),))
        (root,) = ctx.gens()
        return cls((base,), ((r, sign),), sign * root**r)

    @classmethod
    def root(cls, base: str, r: int, sign: int = 1) -> "RamifiedFunction":
        """The root variable t with base = sign * t^r."""
        ctx = flint_ctx((root_name(base),))
        (t,) = ctx.gens()
        return cls((base,), ((r, sign),), t, normalize=False)

    def _normalize(self) -> None:
        num, den = self.num, self.den
        if num.is_zero():
            self.bases, self.ram = (), ()
            ctx = self.ctx
            self.num = ctx.from_dict({})
            self.den = ctx.from_dict({(0,): 1})
            return
        g = num.gcd(den)
        if not g.is_one():
            num = num / g
            den = den / g
        lc = den.leading_coefficient()
        if lc != 1:
            num = num / lc
            den = den / lc
        self.num, self.den = num, den
        self._reduce_ramification()

    def _reduce_ramification(self) -> None:
        nd = self.num.to_dict()
        dd = self.den.to_dict()
        keep = []
        new_ram = []
        factors = []
        signs = []
        for i, (base, (r, s)) in enumerate(zip(self.bases, self.ram)):
            used = any(e[i] for e in nd) or any(e[i] for e in dd)
            if not used:
                continue
            g = r
            for e in list(nd) + list(dd):
                g = math.gcd(g, e[i])
                if g == 1:
                    break
            keep.append(i)
            factors.append(g)
            r2 = r // g
            if r2 == 1 and s == -1:
                # root' = -base: flip the root so the result reads in base
                signs.append(-1)
                s = 1
            else:
                signs.append(1)
            new_ram.append((r2, s))
        if len(keep) == len(self.bases) and all(f == 1 for f in factors) and all(x == 1 for x in signs):
            return
        bases = tuple(self.bases[i] for i in keep)
        ctx = flint_ctx(tuple(root_name(b) for b in bases)) if bases else flint_ctx(())
        nvars = max(len(bases), 1)

        def remap(d):
            out = {}
            for e, c in d.items():
                ne = [0] * nvars
                sgn = 1
                for j, i in enumerate(keep):
                    k = e[i] // factors[j]
                    ne[j] = k
                    if signs[j] == -1 and k % 2:
                        sgn = -sgn
                out[tuple(ne)] = c * sgn
            return ctx.from_dict(out)

        self.bases = bases
        self.ram = tuple(new_ram)
        self.num = remap(nd)
        self.den = remap(dd)
        lc = self.den.leading_coefficient()
        if lc != 1:
            self.num = self.num / lc
            self.den = self.den / lc

    # -- unification --------------------------------------------------
    def lifted(self, bases, ram) -> tuple:
        """(num, den) re-expressed over the given (finer) ramification."""
        ctx = flint_ctx(tuple(root_name(b) for b in bases)) if bases else flint_ctx(())
        if self.bases == tuple(bases) and self.ram == tuple(ram):
            return self.num, self.den
        gens = ctx.gens()
        subs = []
        for base, (r, s) in zip(self.bases, self.ram):
            j = bases.index(base)
            big_r, big_s = ram[j]
            if big_r % r:
                raise RamificationConflict(f"cannot lift index {r} to {big_r} for {base}")
            step = big_r // r
            # old root = c * new_root^step with s * c^r = big_s
            c = 1
            if big_s != s:
                if r % 2 == 0:
                    raise RamificationConflict(f"incompatible sign branches for {base}")
                c = -1
            subs.append(c * gens[j] ** step)
        if not self.bases:
            zero = (0,) * max(len(bases), 1)
            return (ctx.from_dict({zero: self.num.to_dict().get((0,), 0)}),
                    ctx.from_dict({zero: self.den.to_dict().get((0,), 1)}))
        return self.num.compose(*subs, ctx=ctx), self.den.compose(*subs, ctx=ctx)

    @staticmethod
    def common_ramification(*fns: "RamifiedFunction"):
        table: dict[str, tuple[int, int]] = {}
        for f in fns:
            for base, (r, s) in zip(f.bases, f.ram):
                if base in table:
                    r0, s0 = table[base]
                    if s0 != s:
                        # sign flips are only realizable through odd indices
                        odd = r0 if r0 % 2 else r if r % 2 else None
                        if odd is None:
                            raise RamificationConflict(f"incompatible sign branches for {base}")
                        s = -1
                    table[base] = (r0 * r // math.gcd(r0, r), s)
                else:
                    table[base] = (r, s)
        bases = order_bases(table)
        return bases, tuple(table[b] for b in bases)

    def _coerce(self, other) -> "RamifiedFunction":
        if isinstance(other, RamifiedFunction):
            return other
        if isinstance(other, (int, Rational)):
            return RamifiedFunction.constant(other)
        if isinstance(other, flint.fmpq):
            return RamifiedFunction.constant(from_fmpq(other))
        return NotImplemented

    def _binary(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return None
        bases, ram = RamifiedFunction.common_ramification(self, other)
        a = self.lifted(bases, ram)
        b = other.lifted(bases, ram)
        return bases, ram, a, b

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        if isinstance(other, (int, Rational)) and other == 0:
            return self
        u = self._binary(other)
        if u is None:
            return NotImplemented
        bases, ram, (an, ad), (bn, bd) = u
        if ad == bd:
            return RamifiedFunction(bases, ram, an + bn, ad)
        return RamifiedFunction(bases, ram, an * bd + bn * ad, ad * bd)

    __radd__ = __add__

    def __neg__(self):
        return RamifiedFunction(self.bases, self.ram, -self.num, self.den, normalize=False)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            if other == 0:
                return RamifiedFunction.constant(0)
            return RamifiedFunction(self.bases, self.ram, self.num * to_fmpq(other), self.den, normalize=False)
        u = self._binary(other)
        if u is None:
            return NotImplemented
        bases, ram, (an, ad), (bn, bd) = u
        return RamifiedFunction(bases, ram, an * bn, ad * bd)

    __rmul__ = __mul__

    def inverse(self) -> "RamifiedFunction":
        if self.num.is_zero():
            raise ZeroDivisionError("division by the zero function")
        return RamifiedFunction(self.bases, self.ram, self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RamifiedFunction(self.bases, self.ram, self.num**k, self.den**k)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return self.num.is_zero() and other.num.is_zero()
        try:
            u = self._binary(other)
        except RamificationConflict:
            return False
        _, _, (an, ad), (bn, bd) = u
        return an * bd == bn * ad

    def __hash__(self):
        if self.is_constant():
            return hash(self.to_fraction())
        return hash((self.bases, self.ram, str(self.num), str(self.den)))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def to_fraction(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        n = self.num.to_dict()
        d = self.den.to_dict()
        nv = next(iter(n.values()), flint.fmpq(0))
        dv = next(iter(d.values()))
        return from_fmpq(nv) / from_fmpq(dv)

    # -- calculus -----------------------------------------------------
    def derivative(self, base: str = "z") -> "RamifiedFunction":
        """d/d(base); parameters other than ``base`` are constants."""
        if base not in self.bases:
            return RamifiedFunction.constant(0)
        i = self.bases.index(base)
        r, s = self.ram[i]
        dn = self.num.derivative(i)
        dd = self.den.derivative(i)
        top = dn * self.den - self.num * dd
        bottom = self.den**2
        if r != 1 or s != 1:
            # d/dv = 1/(s r t^(r-1)) d/dt
            t = self.ctx.gens()[i]
            bottom = bottom * (s * r) * t ** (r - 1)
        return RamifiedFunction(self.bases, self.ram, top, bottom)

    # -- evaluation ---------------------------------------------------
    def evaluate(self, roots: Mapping[str, complex]) -> complex:
        """Numeric value given the root value of every base variable."""
        vals = [complex(roots[b]) for b in self.bases]

        def ev(p):
            total = 0j
            for e, c in p.to_dict().items():
                term = complex(float(from_fmpq(c)))
                for v, k in zip(vals, e):
                    if k:
                        term *= v ** int(k)
                total += term
            return total

        return ev(self.num) / ev(self.den)

    def substitute_params(self, values: Mapping[str, Fraction]) -> "RamifiedFunction":
        """Specialize unramified parameters to rational numbers."""
        gens = {}
        for base, (r, s) in zip(self.bases, self.ram):
            if base in values:
                if r != 1 or s != 1:
                    raise ValueError(f"parameter {base} is ramified; cannot specialize rationally")
                gens[base] = RamifiedFunction.constant(values[base])
            else:
                gens[base] = RamifiedFunction.root(base, r, s)

        def ev(p):
            acc = RamifiedFunction.constant(0)
            for e, c in p.to_dict().items():
                term = RamifiedFunction.constant(from_fmpq(c))
                for base, k in zip(self.bases, e):
                    if k:
                        term = term * gens[base] ** int(k)
                acc = acc + term
            return acc

        return ev(self.num) / ev(self.den)

    # -- display ------------------------------------------------------
    def variable_names(self) -> list[str]:
        return [b if r == 1 and s == 1 else root_name(b) for b, (r, s) in zip(self.bases, self.ram)]

    def poly_str(self, p) -> str:
        names = self.variable_names()
        if not self.bases:
            d = p.to_dict()
            return str(from_fmpq(next(iter(d.values())))) if d else "0"
        terms = []
        for e, c in sorted(p.to_dict().items(), key=lambda t: (sum(t[0]), t[0]), reverse=True):
            c = from_fmpq(c)
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"

    def ramification_note(self) -> str:
        notes = []
        for b, (r, s) in zip(self.bases, self.ram):
            if r != 1 or s != 1:
                lhs = b if s == 1 else f"-{b}"
                notes.append(f"{lhs} = {root_name(b)}^{r}")
        return ", ".join(notes)

    def __str__(self):
        n = self.poly_str(self.num)
        if self.den.is_one():
            return n
        d = self.poly_str(self.den)
        return f"({n})/({d})"

    def __repr__(self):
        note = self.ramification_note()
        return f"RamifiedFunction({self}{'; ' + note if note else ''})"


def common_denominator_form(values):
    """Lift values to one ramification and write each as N_i / L."""
    bases, ram = RamifiedFunction.common_ramification(*values)
    lifted = [v.lifted(bases, ram) for v in values]
    ctx = flint_ctx(tuple(root_name(b) for b in bases)) if bases else flint_ctx(())
    L = ctx.from_dict({(0,) * max(len(bases), 1): 1})
    for _, d in lifted:
        g = L.gcd(d)
        L = L * (d / g)
    nums = [n * (L / d) for n, d in lifted]
    return bases, ram, nums, L


def ratfun_normalize(f: RamifiedFunction) -> RamifiedFunction:
    """Canonical form: lowest terms, monic denominator, minimal ramification."""
    return RamifiedFunction(f.bases, f.ram, f.num, f.den)
