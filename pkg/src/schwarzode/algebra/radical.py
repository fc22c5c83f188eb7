"""Elements of K[phi]/(phi^k - a) over the rational function field K.

Used for pullbacks that are only known through a relation, e.g. the degree-21
pullback of the Klein preset when just its square is determined.
"""

from __future__ import annotations

from .ramified import RamifiedFunction


def _as_rf(x) -> RamifiedFunction:
    if isinstance(x, RamifiedFunction):
        return x
    return RamifiedFunction.constant(x)


class RadicalElement:
    __slots__ = ("k", "a", "coeffs")

    def __init__(self, k: int, a, coeffs):
        if k < 1:
            raise ValueError("radical index must be positive")
        self.k = k
        self.a = _as_rf(a)
        cs = [_as_rf(c) for c in coeffs]
        folded = [RamifiedFunction.constant(0) for _ in range(k)]
        for e, c in enumerate(cs):
            if c.is_zero():
                continue
            folded[e % k] = folded[e % k] + c * self.a ** (e // k)
        self.coeffs = tuple(folded)

    @classmethod
    def generator(cls, k: int, a) -> "RadicalElement":
        """phi itself, a root of phi^k = a."""
        return cls(k, a, [0, 1] if k > 1 else [a])

    def _same(self, other) -> "RadicalElement":
        if isinstance(other, RadicalElement):
            if other.k != self.k or not (other.a == self.a):
                raise ValueError("radical elements over different extensions")
            return other
        return RadicalElement(self.k, self.a, [other])

    def __add__(self, other):
        o = self._same(other)
        return RadicalElement(self.k, self.a, [x + y for x, y in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return RadicalElement(self.k, self.a, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._same(other))

    def __rsub__(self, other):
        return self._same(other) - self

    def __mul__(self, other):
        o = self._same(other)
        out = [RamifiedFunction.constant(0)] * (2 * self.k)
        for i, x in enumerate(self.coeffs):
            if x.is_zero():
                continue
            for j, y in enumerate(o.coeffs):
                if not y.is_zero():
                    out[i + j] = out[i + j] + x * y
        return RadicalElement(self.k, self.a, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers of radical elements are not supported")
        result = RadicalElement(self.k, self.a, [1])
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __eq__(self, other):
        try:
            return (self - other).is_zero()
        except ValueError:
            return False

    def __hash__(self):
        return hash(self.coeffs)

    def in_base_field(self) -> bool:
        return all(c.is_zero() for c in self.coeffs[1:])

    def ratio(self, other: "RadicalElement") -> RamifiedFunction | None:
        """self/other when it lies in K (componentwise proportional), else None."""
        o = self._same(other)
        scale = None
        for x, y in zip(self.coeffs, o.coeffs):
            if y.is_zero():
                if not x.is_zero():
                    return None
                continue
            q = x / y
            if scale is None:
                scale = q
            elif not (scale == q):
                return None
        if scale is None:
            raise ZeroDivisionError("division by the zero radical element")
        return scale

    def __repr__(self):
        parts = [f"({c})*phi^{e}" for e, c in enumerate(self.coeffs) if not c.is_zero()]
        return f"RadicalElement({' + '.join(parts) or '0'}; phi^{self.k} = {self.a})"
