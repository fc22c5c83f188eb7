"""Singular points, characteristic exponents and curve invariants of an ODE.

Only Fuchsian equations with rational coefficients in z and rational
exponents are in scope; anything else raises a typed scope error.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import flint

from .algebra.ramified import RamifiedFunction, from_fmpq
from .builder import OdeResult
from .errors import (
    AnalysisScopeError,
    IrregularSingularity,
    LogarithmicCase,
    NonRationalExponents,
    ValidationError,
)


# ---------------------------------------------------------------------------
# univariate rational functions over Q


class URat:
    __slots__ = ("num", "den")

    def __init__(self, num: flint.fmpq_poly, den: flint.fmpq_poly | None = None):
        den = flint.fmpq_poly([1]) if den is None else den
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = num, flint.fmpq_poly([1])
            return
        g = num.gcd(den)
        if g.degree() > 0:
            num, _ = divmod(num, g)
            den, _ = divmod(den, g)
        lc = den.leading_coefficient()
        self.num, self.den = num / lc, den / lc

    @classmethod
    def from_ramified(cls, f: RamifiedFunction) -> "URat":
        if f.bases and (f.bases != ("z",) or f.ram != ((1, 1),)):
            raise AnalysisScopeError(
                "analysis scope: coefficients must be rational functions of z without parameters"
            )

        def conv(p):
            d = p.to_dict()
            if not d:
                return flint.fmpq_poly([])
            top = max(e[0] for e in d)
            coeffs = [flint.fmpq(0)] * (top + 1)
            for e, c in d.items():
                coeffs[e[0]] = c
            return flint.fmpq_poly(coeffs)

        return cls(conv(f.num), conv(f.den))

    def __add__(self, o):
        return URat(self.num * o.den + o.num * self.den, self.den * o.den)

    def __mul__(self, o):
        if isinstance(o, URat):
            return URat(self.num * o.num, self.den * o.den)
        return URat(self.num * o, self.den)

    def __truediv__(self, o):
        return URat(self.num * o.den, self.den * o.num)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def derivative(self) -> "URat":
        return URat(self.num.derivative() * self.den - self.num * self.den.derivative(), self.den * self.den)

    def at_inverse(self) -> "URat":
        """f(1/t) as a rational function of t."""
        dn, dd = max(self.num.degree(), 0), max(self.den.degree(), 0)

        def rev(p, d):
            cs = p.coeffs() + [0] * (d + 1 - len(p.coeffs()))
            return flint.fmpq_poly(list(reversed(cs[: d + 1])))

        num, den = rev(self.num, dn), rev(self.den, dd)
        if dn > dd:
            den = den * flint.fmpq_poly([0] * (dn - dd) + [1])
        elif dd > dn:
            num = num * flint.fmpq_poly([0] * (dd - dn) + [1])
        return URat(num, den)

    def degree_at_infinity(self) -> int:
        """deg num - deg den (order of growth; -inf for zero)."""
        if self.num.is_zero():
            return -(10**9)
        return self.num.degree() - self.den.degree()


T = flint.fmpq_poly([0, 1])


# ---------------------------------------------------------------------------
# points


@dataclass(frozen=True)
class SingularPoint:
    """A finite rational point, a class of conjugate algebraic points, or infinity."""

    kind: str  # "finite", "algebraic" or "infinity"
    value: Fraction | None = None
    factor: tuple = ()  # coefficients of the irreducible factor, low degree first

    @property
    def multiplicity(self) -> int:
        return len(self.factor) - 1 if self.kind == "algebraic" else 1

    def label(self) -> str:
        if self.kind == "infinity":
            return "oo"
        if self.kind == "finite":
            return str(self.value)
        p = flint.fmpq_poly([flint.fmpq(Fraction(c).numerator, Fraction(c).denominator) for c in self.factor])
        return f"roots of {p.str(var='z')}"

    def sort_key(self):
        if self.kind == "finite":
            return (0, self.value, ())
        if self.kind == "algebraic":
            return (1, Fraction(0), self.factor)
        return (2, Fraction(0), ())


INFINITY = SingularPoint("infinity")


def _coeff_rats(ode: OdeResult) -> list[URat]:
    return [URat.from_ramified(c) for c in ode.coeffs]


def transformed_at_infinity(coeffs: Sequence[URat]) -> list[URat]:
    """Normalized coefficients in t = 1/z.

    d^j/dz^j = sum_i b[j][i] d^i/dt^i with b[j+1][i] = -t^2 (b[j][i]' + b[j][i-1]).
    """
    n = len(coeffs)
    b = [[flint.fmpq_poly([1])]]
    for j in range(n):
        prev = b[-1] + [flint.fmpq_poly([])]
        row = []
        for i in range(j + 2):
            s = prev[i].derivative() if i <= j else flint.fmpq_poly([])
            if i > 0:
                s = s + prev[i - 1]
            row.append(-(T * T) * s)
        b.append(row)
    full = list(coeffs) + [URat(flint.fmpq_poly([1]))]
    inv = [c.at_inverse() for c in full]
    out = []
    lead = b[n][n]
    for i in range(n):
        acc = URat(flint.fmpq_poly([]))
        for j in range(i, n + 1):
            if i < len(b[j]) and not b[j][i].is_zero():
                acc = acc + inv[j] * b[j][i]
        out.append(acc / URat(lead))
    return out


def singular_points(ode: OdeResult) -> list[SingularPoint]:
    coeffs = _coeff_rats(ode)
    pts: set[SingularPoint] = set()
    for c in coeffs:
        if c.den.degree() <= 0:
            continue
        _, factors = c.den.factor()
        for f, _mult in factors:
            if f.degree() == 1:
                a, b = f.coeffs()
                pts.add(SingularPoint("finite", from_fmpq(-a / b)))
            else:
                lc = f.leading_coefficient()
                pts.add(SingularPoint("algebraic", factor=tuple(from_fmpq(x / lc) for x in f.coeffs())))
    at_inf = transformed_at_infinity(coeffs)
    if any(c.den.degree() > 0 and c.den.coeffs()[0] == 0 for c in at_inf):
        pts.add(INFINITY)
    return sorted(pts, key=SingularPoint.sort_key)


# ---------------------------------------------------------------------------
# exponents


def _falling(e_poly_degree: int) -> list[flint.fmpq_poly]:
    """Falling factorials e(e-1)...(e-j+1) for j = 0..n as polynomials in e."""
    out = [flint.fmpq_poly([1])]
    for j in range(e_poly_degree):
        out.append(out[-1] * flint.fmpq_poly([-j, 1]))
    return out


def _pole_order_at_zero(r: URat) -> int:
    if r.is_zero():
        return -(10**9)
    k = 0
    for c in r.den.coeffs():
        if c != 0:
            break
        k += 1
    m = 0
    for c in r.num.coeffs():
        if c != 0:
            break
        m += 1
    return k - m


def _shift(r: URat, z0: Fraction) -> URat:
    """r(z0 + x) as a rational function of x."""
    x = flint.fmpq_poly([flint.fmpq(z0.numerator, z0.denominator), 1])

    def comp(p):
        out = flint.fmpq_poly([])
        for c in reversed(p.coeffs()):
            out = out * x + c
        return out

    return URat(comp(r.num), comp(r.den))


def _leading_at_zero(r: URat, order: int) -> Fraction:
    """lim x^order r(x) as x -> 0 (pole order of r is at most ``order``)."""
    k = _pole_order_at_zero(r)
    if k < order:
        return Fraction(0)
    num = [c for c in r.num.coeffs()]
    den = [c for c in r.den.coeffs()]
    i = next(i for i, c in enumerate(num) if c != 0)
    j = next(j for j, c in enumerate(den) if c != 0)
    return from_fmpq(num[i] / den[j])


def indicial_polynomial(ode: OdeResult, p: SingularPoint) -> flint.fmpq_poly:
    n = ode.order
    coeffs = _coeff_rats(ode)
    if p.kind == "infinity":
        local = transformed_at_infinity(coeffs)
    elif p.kind == "finite":
        local = [_shift(c, p.value) for c in coeffs]
    else:
        return _indicial_algebraic(coeffs, p, n)
    ff = _falling(n)
    poly = ff[n]
    for j, c in enumerate(local):
        if _pole_order_at_zero(c) > n - j:
            raise IrregularSingularity(f"irregular singularity at {p.label()}")
        q = _leading_at_zero(c, n - j)
        if q:
            poly = poly + ff[j] * flint.fmpq(q.numerator, q.denominator)
    return poly


def _indicial_algebraic(coeffs: Sequence[URat], p: SingularPoint, n: int) -> flint.fmpq_poly:
    """Indicial polynomial at a root alpha of an irreducible factor, as the gcd of
    its components on the power basis of Q(alpha).  Rational roots of the true
    indicial polynomial are exactly the common roots of the components."""
    fac = flint.fmpq_poly([flint.fmpq(Fraction(c).numerator, Fraction(c).denominator) for c in p.factor])
    deg = fac.degree()
    dfac = fac.derivative()

    def mod(a):
        return divmod(a, fac)[1]

    def inv(a):
        g, s, _ = a.xgcd(fac)
        return mod(s / g)

    ff = _falling(n)
    # components: comp[m] is the coefficient of alpha^m, as a polynomial in e
    comps = [flint.fmpq_poly([]) for _ in range(deg)]
    lead_comps = ff[n]
    comps[0] = lead_comps
    for j, c in enumerate(coeffs):
        if c.is_zero():
            continue
        # multiplicity of fac in the denominator
        mult, rest = 0, c.den
        while True:
            q, r = divmod(rest, fac)
            if not r.is_zero():
                break
            rest, mult = q, mult + 1
        if mult > n - j:
            raise IrregularSingularity(f"irregular singularity at {p.label()}")
        if mult < n - j:
            continue
        val = mod(c.num * inv(mod(rest * dfac**mult)))
        vc = val.coeffs()
        for m in range(deg):
            if m < len(vc) and vc[m] != 0:
                comps[m] = comps[m] + ff[j] * vc[m]
    g = None
    for comp in comps:
        if comp.is_zero():
            continue
        g = comp if g is None else g.gcd(comp)
    return g


def indicial_exponents(ode: OdeResult, p: SingularPoint) -> list[Fraction]:
    n = ode.order
    poly = indicial_polynomial(ode, p)
    roots: list[Fraction] = []
    _, factors = poly.factor()
    for f, mult in factors:
        if f.degree() == 1:
            a, b = f.coeffs()
            roots.extend([from_fmpq(-a / b)] * mult)
    if len(roots) != n:
        raise NonRationalExponents(f"non-rational exponents unsupported at {p.label()}")
    return sorted(roots)


# ---------------------------------------------------------------------------
# exponent data and classification


@dataclass
class ExponentData:
    e: Fraction
    r: int
    nu: int
    lambdas: list
    raw: list

    def reconstruct(self) -> list[Fraction]:
        out = [self.e, self.e + Fraction(self.nu, self.r)]
        acc = self.nu
        for lam in self.lambdas:
            acc += lam
            out.append(self.e + Fraction(acc, self.r))
        return out

    def to_dict(self) -> dict:
        return {
            "e": str(self.e),
            "r": self.r,
            "nu": self.nu,
            "lambdas": list(self.lambdas),
            "exponents": [str(x) for x in self.raw],
        }


def exponent_normal_form(exponents: Sequence) -> ExponentData:
    ex = sorted(Fraction(x) for x in exponents)
    if len(set(ex)) != len(ex):
        raise LogarithmicCase("logarithmic case unsupported: repeated exponents")
    if len(ex) < 2:
        raise ValidationError("exponent normal form needs at least two exponents")
    e = ex[0]
    diffs = [x - e for x in ex[1:]]
    L = 1
    for d in diffs:
        L = L * d.denominator // math.gcd(L, d.denominator)
    N = [int(d * L) for d in diffs]
    nu = N[0]
    lambdas = [b - a for a, b in zip(N, N[1:])]
    g = L
    for v in [nu] + lambdas:
        g = math.gcd(g, v)
    return ExponentData(e, L // g, nu // g, [x // g for x in lambdas], ex)


@dataclass
class Classification:
    labels: list
    smooth: bool
    apparent: bool

    def to_dict(self) -> dict:
        return {"labels": self.labels, "smooth": self.smooth, "apparent": self.apparent}


def classify_point(data: ExponentData, m: int = 1, n: int | None = None, local_type: bool = True) -> Classification:
    """Smoothness and apparent-singularity tests; cusp/flex type when in scope."""
    n = len(data.raw) if n is None else n
    labels = []
    smooth = data.nu == 1 and all(x == 1 for x in data.lambdas)
    apparent = data.r == 1
    if local_type:
        if m != 1 or n != 3:
            raise AnalysisScopeError("cusp/flex labels need a degree-1 quotient map and order 3")
        lam = data.lambdas[0]
        if data.nu >= 2:
            labels.append(f"({data.nu},{data.nu + lam})-cusp")
        elif lam >= 2:
            labels.append(f"(1,{1 + lam})-flex")
    if smooth:
        labels.append("smooth")
    if apparent:
        labels.append("apparent")
    return Classification(labels, smooth, apparent)


# ---------------------------------------------------------------------------
# global invariants

EULER_CONVENTIONS = ("validated", "printed")
DEGREE_SCALES = ("genus", "group-order")


def euler_characteristic(r_values: Sequence[int], group_order: int, convention: str = "validated") -> Fraction:
    if group_order <= 0:
        raise ValidationError("group order must be positive")
    s = sum((Fraction(1, r) - 1 for r in r_values), Fraction(0))
    if convention == "validated":
        chi = group_order * (2 + s)
    elif convention == "printed":
        chi = group_order * (s - 2)
    else:
        raise ValidationError(f"unknown Euler convention {convention!r}")
    if chi.denominator != 1:
        warnings.warn(f"inconsistent singularity data: Euler characteristic {chi} is not an integer")
    return chi


def curve_degree(exponent_sum, m: int, scale: int) -> Fraction:
    if m == 0:
        raise ValidationError("quotient-map degree m must be nonzero")
    return -Fraction(scale, m) * Fraction(exponent_sum)


def calibrate_degree_scale(exponent_sum, m: int, genus: int, group_order: int, target: int) -> list[str]:
    """Scale names among {genus, group-order} reproducing the target degree."""
    out = []
    for name, value in (("genus", genus), ("group-order", group_order)):
        if value is not None and curve_degree(exponent_sum, m, value) == target:
            out.append(name)
    return out


@dataclass
class PointReport:
    point: SingularPoint
    data: ExponentData
    classification: Classification

    def to_dict(self) -> dict:
        return {
            "point": self.point.label(),
            "count": self.point.multiplicity,
            **self.data.to_dict(),
            **self.classification.to_dict(),
        }


@dataclass
class CurveReport:
    points: list
    chi: Fraction
    genus: Fraction | None
    degree: Fraction | None
    m: int
    group_order: int
    euler_convention: str
    degree_scale: str
    exponent_sum: Fraction
    fuchs: tuple
    notes: list = field(default_factory=list)

    def singular_set(self) -> list[str]:
        return [p.point.label() for p in self.points]

    def to_dict(self) -> dict:
        return {
            "singular_points": [p.to_dict() for p in self.points],
            "euler_characteristic": str(self.chi),
            "genus": None if self.genus is None else str(self.genus),
            "degree": None if self.degree is None else str(self.degree),
            "m": self.m,
            "group_order": self.group_order,
            "euler_convention": self.euler_convention,
            "degree_scale": self.degree_scale,
            "exponent_sum": str(self.exponent_sum),
            "fuchs": [str(x) for x in self.fuchs],
            "notes": self.notes,
        }


def fuchs_relation(ode: OdeResult, exponents: dict) -> tuple[Fraction, Fraction]:
    """(sum of all exponents, n(n-1)/2 * (#points - 2)) over S and infinity."""
    n = ode.order
    total = Fraction(0)
    count = 0
    has_inf = False
    for p, ex in exponents.items():
        total += sum(ex) * p.multiplicity
        count += p.multiplicity
        has_inf = has_inf or p.kind == "infinity"
    if not has_inf:
        # infinity is an ordinary point: exponents 0..n-1
        total += Fraction(n * (n - 1), 2)
        count += 1
    return total, Fraction(n * (n - 1), 2) * (count - 2)


def analyze(
    ode: OdeResult,
    m: int = 1,
    group_order: int = 1,
    genus: int | None = None,
    euler_convention: str = "validated",
    degree_scale: str = "group-order",
) -> CurveReport:
    pts = singular_points(ode)
    exps = {p: indicial_exponents(ode, p) for p in pts}
    local = m == 1 and ode.order == 3
    records = []
    for p in pts:
        data = exponent_normal_form(exps[p])
        records.append(PointReport(p, data, classify_point(data, m, ode.order, local_type=local)))
    r_values = []
    for rec in records:
        r_values.extend([rec.data.r] * rec.point.multiplicity)
    chi = euler_characteristic(r_values, group_order, euler_convention)
    g = None
    if chi.denominator == 1 and chi % 2 == 0:
        g = 1 - chi / 2
    notes = []
    if genus is not None and g is not None and g != genus:
        notes.append(f"declared genus {genus} differs from 1 - chi/2 = {g}")
    esum = sum((rec.data.e * rec.point.multiplicity for rec in records), Fraction(0))
    if degree_scale == "genus":
        gv = genus if genus is not None else g
        degree = curve_degree(esum, m, int(gv)) if gv is not None else None
    elif degree_scale == "group-order":
        degree = curve_degree(esum, m, group_order)
    else:
        raise ValidationError(f"unknown degree scale {degree_scale!r}")
    fuchs = fuchs_relation(ode, exps)
    if fuchs[0] != fuchs[1]:
        notes.append("Fuchs relation violated")
    return CurveReport(records, chi, g, degree, m, group_order, euler_convention, degree_scale, esum, fuchs, notes)
