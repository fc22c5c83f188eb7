"""Elements of the cyclotomic field Q(zeta_m).

An element is stored as its coefficient vector in the power basis
1, zeta, ..., zeta^(phi(m)-1), i.e. reduced modulo the m-th cyclotomic
polynomial, so equality is coefficient equality.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(num: list, den: list) -> tuple[list, list]:
    """Quotient and remainder of coefficient lists (low degree first)."""
    num = list(num)
    den = _trim(list(den))
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    lead = den[-1]
    quot = [Fraction(0)] * max(len(num) - len(den) + 1, 0)
    for shift in range(len(num) - len(den), -1, -1):
        c = num[shift + len(den) - 1]
        if c == 0:
            continue
        c = Fraction(c) / lead
        quot[shift] = c
        for i, d in enumerate(den):
            num[shift + i] -= c * d
    return _trim(quot), _trim(num[: len(den) - 1])


def _poly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_sub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_m, lowest degree first."""
    if m < 1:
        raise ValueError("conductor must be positive")
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            poly, rem = _poly_divmod(poly, list(cyclotomic_polynomial(d)))
            assert not rem
    return tuple(int(c) for c in poly)


def euler_phi(m: int) -> int:
    return len(cyclotomic_polynomial(m)) - 1


def cyc_reduce(m: int, coeffs) -> tuple[Fraction, ...]:
    """Canonical coefficient vector (length phi(m)) of sum coeffs[k] zeta_m^k."""
    phi = cyclotomic_polynomial(m)
    n = len(phi) - 1
    work = [Fraction(c) for c in coeffs]
    # zeta^m = 1 first, then reduce by the monic Phi_m
    if len(work) > m:
        folded = [Fraction(0)] * m
        for k, c in enumerate(work):
            folded[k % m] += c
        work = folded
    for top in range(len(work) - 1, n - 1, -1):
        c = work[top]
        if c:
            for i in range(n + 1):
                work[top - n + i] -= c * phi[i]
    work = work[:n] + [Fraction(0)] * (n - len(work))
    return tuple(work)


class CycNum:
    """Exact element of Q(zeta_m)."""

    __slots__ = ("m", "coeffs")

    def __init__(self, m: int, coeffs=()):
        self.m = int(m)
        self.coeffs = cyc_reduce(self.m, coeffs)

    @classmethod
    def zeta(cls, m: int, k: int = 1) -> "CycNum":
        k %= m
        return cls(m, [0] * k + [1])

    @classmethod
    def rational(cls, m: int, q) -> "CycNum":
        return cls(m, [q])

    def _coerce(self, other) -> "CycNum | None":
        if isinstance(other, CycNum):
            if other.m == self.m:
                return other
            return None
        if isinstance(other, (int, Rational)):
            return CycNum(self.m, [other])
        return NotImplemented

    def embed(self, m: int) -> "CycNum":
        """Same number viewed in Q(zeta_m); requires self.m | m."""
        if m % self.m:
            raise ValueError(f"Q(zeta_{self.m}) does not embed in Q(zeta_{m})")
        step = m // self.m
        lifted = [Fraction(0)] * (step * len(self.coeffs))
        for k, c in enumerate(self.coeffs):
            lifted[k * step] = c
        return CycNum(m, lifted)

    def _pair(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented, NotImplemented
        if o is None:
            common = self.m * other.m // math.gcd(self.m, other.m)
            return self.embed(common), other.embed(common)
        return self, o

    def __add__(self, other):
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        return CycNum(a.m, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.m, [-x for x in self.coeffs])

    def __sub__(self, other):
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        return CycNum(a.m, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, CycNum):
            return CycNum(self.m, [x * other for x in self.coeffs])
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        return CycNum(a.m, _poly_mul(list(a.coeffs), list(b.coeffs)))

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_m)")
        # extended Euclid: s*self + t*Phi = 1
        r0, r1 = [Fraction(c) for c in cyclotomic_polynomial(self.m)], _trim(list(self.coeffs))
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        c = r1[0]
        return CycNum(self.m, [x / c for x in s1])

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, CycNum):
            return CycNum(self.m, [x / other for x in self.coeffs])
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = CycNum(self.m, [1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        return a.coeffs == b.coeffs

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.m, self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def __complex__(self):
        z = cmath.exp(2j * cmath.pi / self.m)
        return complex(sum(float(c) * z**k for k, c in enumerate(self.coeffs)))

    def __repr__(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                parts.append(str(c))
            else:
                mono = f"zeta{self.m}" + (f"^{k}" if k > 1 else "")
                parts.append(mono if c == 1 else f"-{mono}" if c == -1 else f"({c})*{mono}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"
