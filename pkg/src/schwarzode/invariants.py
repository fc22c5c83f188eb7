"""Finite linear groups, invariant-ring generators and rewriting in generators."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

import flint

from .algebra.bridge import (
    cyclotomic_ctx,
    cyclotomic_modulus,
    cyc_to_flint,
    from_flint,
    is_rational_poly,
    mpoly_to_flint_cyc,
    to_flint,
)
from .algebra.cyclotomic import CycNum
from .algebra.linalg import det
from .algebra.mpoly import MPoly
from .algebra.radical import RadicalElement
from .algebra.ramified import RamifiedFunction, flint_ctx, from_fmpq, to_fmpq
from .errors import DegenerateGeneratorSet, NotExpressible, ValidationError


# ---------------------------------------------------------------------------
# groups


def _scalar(x, m: int) -> CycNum:
    return x if isinstance(x, CycNum) else CycNum(m, [x])


def mat_mul(a, b):
    n = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(n)), 0) for j in range(n)] for i in range(n)]


def _scalar_matrix_value(mat):
    """sigma if mat == sigma * I, else None."""
    n = len(mat)
    s = mat[0][0]
    for i in range(n):
        for j in range(n):
            if (i == j and not (mat[i][j] == s)) or (i != j and not (mat[i][j] == 0)):
                return None
    return s


def normalize_to_sl(mat, max_order: int = 64):
    """Rescale mat by a scalar in its own field so that det = 1.

    Uses the smallest k with mat^k = sigma*I: any rescaling lambda with
    det(mat/lambda) = 1 and (mat/lambda)^k scalar satisfies lambda^k = sigma and
    lambda^n = det(mat); when gcd(n, k) = 1 Bezout gives lambda = sigma^x det^y.
    Returns (matrix, lambda) or (mat, None) if no rescaling is found.
    """
    n = len(mat)
    d = det(mat)
    if d == 1:
        return mat, 1
    power = mat
    for k in range(1, max_order + 1):
        sigma = _scalar_matrix_value(power)
        if sigma is not None:
            g, x, y = _ext_gcd(k, n)
            if g != 1:
                return mat, None
            lam = sigma**x * d**y
            scaled = [[e / lam for e in row] for row in mat]
            if det(scaled) == 1:
                return scaled, lam
            return mat, None
        power = mat_mul(power, mat)
    return mat, None


def _ext_gcd(a: int, b: int):
    if b == 0:
        return a, 1, 0
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


@dataclass
class GroupSpec:
    """Finite subgroup of GL_n given by generators over Q(zeta_m)."""

    dimension: int
    generators: list
    order: int
    det_one: bool = True
    conductor: int = 1
    name: str = ""

    def __post_init__(self):
        m = self.conductor
        gens = []
        for g in self.generators:
            if len(g) != self.dimension or any(len(r) != self.dimension for r in g):
                raise ValidationError(f"generator matrix is not {self.dimension}x{self.dimension}")
            g = [[_scalar(x, m) for x in row] for row in g]
            d = det(g)
            if d == 0:
                raise ValidationError("generator matrix is singular")
            if self.det_one and not (d == 1):
                raise ValidationError(f"generator has determinant {d}, not 1")
            gens.append(g)
        self.generators = gens
        if self.order <= 0:
            raise ValidationError("group order must be positive")


# ---------------------------------------------------------------------------
# symbolic polynomials in generator symbols


class GeneratorSymbolPoly:
    """Polynomial in generator symbols Phi_1..Phi_N.

    Coefficients may be Fractions, RamifiedFunctions or flint polynomials in
    auxiliary variables (jets of pullbacks inside the builder).
    """

    __slots__ = ("ngens", "terms", "names")

    def __init__(self, ngens: int, terms: dict | None = None, names: Sequence[str] | None = None):
        self.ngens = ngens
        self.terms = {}
        for e, c in (terms or {}).items():
            if len(e) != ngens or min(e, default=0) < 0:
                raise ValueError(f"bad exponent vector {e}")
            if not _coeff_is_zero(c):
                self.terms[tuple(e)] = c
        self.names = list(names) if names else [f"Phi{i + 1}" for i in range(ngens)]

    def __eq__(self, other):
        return isinstance(other, GeneratorSymbolPoly) and self.terms == other.terms

    def __len__(self):
        return len(self.terms)

    def weighted_degrees(self, weights: Sequence[int]) -> set[int]:
        return {sum(a * w for a, w in zip(e, weights)) for e in self.terms}

    def __add__(self, other: "GeneratorSymbolPoly"):
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return GeneratorSymbolPoly(self.ngens, out, self.names)

    def __neg__(self):
        return GeneratorSymbolPoly(self.ngens, {e: -c for e, c in self.terms.items()}, self.names)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, GeneratorSymbolPoly):
            return GeneratorSymbolPoly(self.ngens, {e: c * other for e, c in self.terms.items()}, self.names)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out[e] + c1 * c2 if e in out else c1 * c2
        return GeneratorSymbolPoly(self.ngens, out, self.names)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = GeneratorSymbolPoly(self.ngens, {(0,) * self.ngens: 1}, self.names)
        for _ in range(k):
            result = result * self
        return result

    def evaluate(self, values: Sequence):
        """Substitute ring elements for the symbols."""
        total = 0
        cache: dict = {}
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = values[i] ** k
                    term = cache[key] * term
            total = term + total
        return total

    def expand(self, basis: "InvariantBasis") -> MPoly:
        """Q(F_1, ..., F_N) as an MPoly in X (scalar coefficients only)."""
        n = basis.n
        ctx = flint_ctx(tuple(f"X{i + 1}" for i in range(n)))
        gens = [to_flint(F, ctx) for F in basis.generators]
        total = ctx.from_dict({})
        for e, c in self.terms.items():
            term = ctx.from_dict({(0,) * n: to_fmpq(Fraction(c))})
            for g, k in zip(gens, e):
                if k:
                    term *= g**k
            total += term
        return from_flint(total, n)

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(nm if k == 1 else f"{nm}^{k}" for nm, k in zip(self.names, e) if k)
            cs = str(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"{cs}*{mono}" if "+" not in cs[1:] and " " not in cs else f"({cs})*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"GeneratorSymbolPoly({self.to_str()})"


def _coeff_is_zero(c) -> bool:
    if hasattr(c, "is_zero"):
        return c.is_zero()
    return c == 0


# ---------------------------------------------------------------------------
# invariant bases


@dataclass
class InvariantBasis:
    """Generators F_1..F_N of an invariant ring with a primary subset."""

    generators: list
    degrees: tuple
    primary: tuple
    syzygies: list = field(default_factory=list)
    names: tuple = ()
    verify: bool = True

    def __post_init__(self):
        self.generators = list(self.generators)
        self.degrees = tuple(int(d) for d in self.degrees)
        self.primary = tuple(int(i) for i in self.primary)
        if not self.names:
            self.names = tuple(f"Phi{i + 1}" for i in range(len(self.generators)))
        self.names = tuple(self.names)
        if len(self.degrees) != len(self.generators):
            raise ValidationError("one degree per generator is required")
        n = self.n
        if len(self.primary) != n or len(set(self.primary)) != n:
            raise ValidationError(f"need exactly {n} distinct primary generators")
        if any(not 0 <= i < len(self.generators) for i in self.primary):
            raise ValidationError("primary index out of range")
        for F, d in zip(self.generators, self.degrees):
            if F.nvars != n:
                raise ValidationError("generators live in different variable counts")
            if F.is_zero() or not F.is_homogeneous() or F.total_degree() != d:
                raise ValidationError(f"generator {F.to_str()} is not homogeneous of degree {d}")
        if self.verify:
            if self.jacobian_determinant().is_zero():
                raise DegenerateGeneratorSet(
                    "degenerate generator set: Jacobian determinant of the primary subset vanishes"
                )
            for k, s in enumerate(self.syzygies):
                if not s.expand(self).is_zero():
                    raise ValidationError(f"syzygy {k} does not vanish on the generators")

    @property
    def n(self) -> int:
        return self.generators[0].nvars

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def primary_generators(self) -> list:
        return [self.generators[i] for i in self.primary]

    def jacobian_determinant(self) -> MPoly:
        from .builder import jacobian  # local import: builder depends on this module

        return det(jacobian(self.primary_generators(), check=False))

    def is_rational(self) -> bool:
        return all(is_rational_poly(F) for F in self.generators)

    def key(self) -> tuple:
        return (
            self.n,
            tuple(tuple(sorted((e, str(c)) for e, c in F.terms.items())) for F in self.generators),
            self.primary,
        )

    def __hash__(self):
        return hash(self.key())

    def __eq__(self, other):
        return isinstance(other, InvariantBasis) and self.key() == other.key()

    def pure_power_caps(self) -> dict[int, int]:
        """Generators whose powers can be reduced through a syzygy.

        If a syzygy contains c*Phi_k^e and no other term involving Phi_k, then
        every Phi_k^e can be traded for lower terms; exponents below e suffice.
        """
        caps = {}
        for s in self.syzygies:
            for k in range(self.ngens):
                involving = [e for e in s.terms if e[k]]
                if len(involving) == 1:
                    e = involving[0]
                    if sum(e) == e[k]:
                        caps[k] = min(caps.get(k, e[k]), e[k])
        return caps

    def implicit_relation(self, k: int):
        """(e, c, rest) with c*Phi_k^e + rest(Phi) = 0, rest free of Phi_k."""
        for s in self.syzygies:
            involving = [e for e in s.terms if e[k]]
            if len(involving) == 1 and sum(involving[0]) == involving[0][k]:
                e = involving[0]
                rest = GeneratorSymbolPoly(
                    self.ngens, {x: c for x, c in s.terms.items() if x != e}, self.names
                )
                return e[k], s.terms[e], rest
        return None


# ---------------------------------------------------------------------------
# invariance


def check_invariance(p: MPoly, g, conductor: int | None = None):
    """lambda with p(g.X) = lambda p(X), or None when p is not semi-invariant."""
    n = p.nvars
    m = conductor or _conductor_of(p, g)
    ctx = cyclotomic_ctx(n)
    gens = ctx.gens()
    rows = []
    for i in range(n):
        acc = ctx.from_dict({})
        for j in range(n):
            acc += cyc_to_flint(g[i][j], m, ctx) * gens[j]
        rows.append(acc)
    modulus = cyclotomic_modulus(m, ctx)
    pf = mpoly_to_flint_cyc(p, m, ctx)
    image = pf.compose(*rows, gens[n], ctx=ctx)
    image = divmod(image, modulus)[1]
    if p.is_zero():
        return CycNum(m, [1])
    exp, c = p.leading_term()
    target = {}
    for e, coef in image.to_dict().items():
        if tuple(e[:n]) == exp:
            target[e[n]] = from_fmpq(coef)
    vec = [target.get(k, 0) for k in range(max(target, default=0) + 1)]
    lam = CycNum(m, vec) / _scalar(c, m)
    diff = image - cyc_to_flint(lam, m, ctx) * pf
    if not divmod(diff, modulus)[1].is_zero():
        return None
    return lam


def _conductor_of(p: MPoly, g) -> int:
    m = 1
    for row in g:
        for x in row:
            if isinstance(x, CycNum):
                m = m * x.m // math.gcd(m, x.m)
    for c in p.coefficients():
        if isinstance(c, CycNum):
            m = m * c.m // math.gcd(m, c.m)
    return m


# ---------------------------------------------------------------------------
# rewriting in generators


def generator_monomials(weights: Sequence[int], d: int, caps: dict[int, int] | None = None) -> list[tuple]:
    """All a >= 0 with sum a_k w_k = d, honoring exponent caps (exclusive)."""
    caps = caps or {}
    out = []
    N = len(weights)

    def rec(k, remaining, prefix):
        if k == N:
            if remaining == 0:
                out.append(tuple(prefix))
            return
        w = weights[k]
        top = remaining // w
        if k in caps:
            top = min(top, caps[k] - 1)
        for a in range(top, -1, -1):
            prefix.append(a)
            rec(k + 1, remaining - a * w, prefix)
            prefix.pop()

    rec(0, d, [])
    return out


def _preference(exp: tuple) -> tuple:
    # smaller exponent of the last generator first, then lexicographic
    return (exp[-1],) + tuple(-a for a in exp)


class RewriteEngine:
    """Per-degree rewriting of invariants in generator symbols.

    The coefficient ring is Q[aux] for a tuple of auxiliary variable names; an
    invariant is handed over as a map X-monomial -> flint polynomial in aux.
    """

    def __init__(self, basis: InvariantBasis, aux: tuple[str, ...] = ()):
        if not basis.is_rational():
            raise ValidationError("rewriting requires generators with rational coefficients")
        self.basis = basis
        self.aux = aux
        self.xctx = flint_ctx(tuple(f"X{i + 1}" for i in range(basis.n)))
        self.actx = flint_ctx(aux)
        self.gens = [to_flint(F, self.xctx) for F in basis.generators]
        self.caps = basis.pure_power_caps()
        self._powers: dict = {}
        self._expansions: dict = {}
        self._plans: dict = {}
        self._one = self.actx.from_dict({(0,) * max(len(aux), 1): 1})

    def _power(self, k: int, e: int):
        key = (k, e)
        if key not in self._powers:
            if e == 0:
                self._powers[key] = self.xctx.from_dict({(0,) * self.basis.n: 1})
            else:
                self._powers[key] = self._power(k, e - 1) * self.gens[k]
        return self._powers[key]

    def expansion(self, exp: tuple) -> dict:
        """X-monomial -> Fraction coefficients of prod F_k^exp_k."""
        if exp not in self._expansions:
            p = self._power(0, exp[0])
            for k in range(1, len(exp)):
                if exp[k]:
                    p = p * self._power(k, exp[k])
            self._expansions[exp] = {tuple(e): c for e, c in p.to_dict().items()}
        return self._expansions[exp]

    def _plan(self, d: int):
        if d in self._plans:
            return self._plans[d]
        monos = sorted(generator_monomials(self.basis.degrees, d, self.caps), key=_preference)
        exps = [self.expansion(a) for a in monos]
        leads = [max(e) for e in exps]
        if len(set(leads)) == len(leads):
            plan = ("triangular", monos, exps, {lm: i for i, lm in enumerate(leads)})
        else:
            plan = ("linear",) + self._linear_plan(monos, exps)
        self._plans[d] = plan
        return plan

    def _linear_plan(self, monos, exps):
        rows = sorted({x for e in exps for x in e}, reverse=True)
        ridx = {x: i for i, x in enumerate(rows)}
        M = flint.fmpq_mat(len(rows), len(monos))
        for j, e in enumerate(exps):
            for x, c in e.items():
                M[ridx[x], j] = c
        # pivot columns in order of preference (columns are already sorted)
        R, rank = M.rref()
        pivots = []
        r = 0
        for j in range(len(monos)):
            if r < rank and R[r, j] != 0:
                pivots.append(j)
                r += 1
        # independent rows of the pivot submatrix
        sub = flint.fmpq_mat(len(pivots), len(rows))
        for a, j in enumerate(pivots):
            for i in range(len(rows)):
                sub[a, i] = M[i, j]
        Rt, rank_t = sub.rref()
        prow = []
        r = 0
        for i in range(len(rows)):
            if r < rank_t and Rt[r, i] != 0:
                prow.append(i)
                r += 1
        square = flint.fmpq_mat(len(pivots), len(pivots))
        for a, i in enumerate(prow):
            for b, j in enumerate(pivots):
                square[a, b] = M[i, j]
        inv = square.inv() if pivots else square
        return monos, exps, pivots, [rows[i] for i in prow], inv

    def rewrite_graded(self, graded: dict[tuple, flint.fmpq_mpoly]) -> dict[tuple, flint.fmpq_mpoly]:
        """Rewrite sum_x graded[x] X^x; returns generator-exponent -> coefficient."""
        by_degree: dict[int, dict] = {}
        for x, c in graded.items():
            if not c.is_zero():
                by_degree.setdefault(sum(x), {})[x] = c
        out: dict = {}
        for d, part in sorted(by_degree.items()):
            out.update(self._rewrite_degree(d, part))
        return out

    def _rewrite_degree(self, d: int, part: dict) -> dict:
        plan = self._plan(d)
        if plan[0] == "triangular":
            _, monos, exps, lead_index = plan
            rem = dict(part)
            sol = {}
            while rem:
                lm = max(rem)
                i = lead_index.get(lm)
                if i is None:
                    raise NotExpressible(
                        f"not expressible: X-degree {d} component is not a polynomial in the generators"
                    )
                e = exps[i]
                q = rem[lm] / e[lm]
                sol[monos[i]] = q
                for x, c in e.items():
                    v = rem.get(x)
                    v = -(q * c) if v is None else v - q * c
                    if v.is_zero():
                        rem.pop(x, None)
                    else:
                        rem[x] = v
            return sol
        _, monos, exps, pivots, prow, inv = plan
        zero = self.actx.from_dict({})
        rhs = [part.get(x, zero) for x in prow]
        sol = {}
        for a, j in enumerate(pivots):
            acc = zero
            for b in range(len(pivots)):
                c = inv[a, b]
                if c != 0 and not rhs[b].is_zero():
                    acc = acc + rhs[b] * c
            if not acc.is_zero():
                sol[monos[j]] = acc
        # consistency on every row
        check = dict(part)
        for exp, q in sol.items():
            for x, c in self.expansion(exp).items():
                v = check.get(x)
                check[x] = -(q * c) if v is None else v - q * c
        if any(not v.is_zero() for v in check.values()):
            raise NotExpressible(
                f"not expressible: X-degree {d} component is not a polynomial in the generators"
            )
        return sol


@lru_cache(maxsize=32)
def rewrite_engine(basis: InvariantBasis, aux: tuple[str, ...] = ()) -> RewriteEngine:
    return RewriteEngine(basis, aux)


def split_by_x(p: flint.fmpq_mpoly, nx: int, actx) -> dict[tuple, flint.fmpq_mpoly]:
    """Group a flint polynomial in (X, aux) by X-monomial."""
    groups: dict[tuple, dict] = {}
    for e, c in p.to_dict().items():
        groups.setdefault(tuple(e[:nx]), {})[tuple(e[nx:]) or (0,)] = c
    return {x: actx.from_dict(t) for x, t in groups.items()}


def rewrite_invariant(p, basis: InvariantBasis, group: GroupSpec | None = None) -> GeneratorSymbolPoly:
    """Q with Q(F_1..F_N) = p.  p is an MPoly over Q in the n variables X."""
    if group is not None and not group.det_one:
        raise ValidationError("rewriting requires a group of determinant-1 matrices")
    if not isinstance(p, MPoly):
        raise TypeError("rewrite_invariant expects an MPoly")
    if not is_rational_poly(p):
        raise ValidationError("rewriting supports rational coefficients only")
    eng = rewrite_engine(basis)
    graded = {
        e: eng.actx.from_dict({(0,): to_fmpq(Fraction(c) if not isinstance(c, CycNum) else c.to_rational())})
        for e, c in p.terms.items()
    }
    sol = eng.rewrite_graded(graded)
    terms = {}
    for exp, q in sol.items():
        d = q.to_dict()
        terms[exp] = from_fmpq(d.get((0,), flint.fmpq(0))) if d else Fraction(0)
    return GeneratorSymbolPoly(basis.ngens, terms, basis.names)


# ---------------------------------------------------------------------------
# pullback validation


def complete_pullbacks(basis: InvariantBasis, pullbacks: Sequence) -> list:
    """Replace implicit (None) pullbacks by radicals solved from a syzygy."""
    values = list(pullbacks)
    if len(values) != basis.ngens:
        raise ValidationError(f"expected {basis.ngens} pullbacks, got {len(values)}")
    for k, v in enumerate(values):
        if v is not None:
            continue
        rel = basis.implicit_relation(k)
        if rel is None:
            raise ValidationError(
                f"pullback for {basis.names[k]} omitted but no relation determines it"
            )
        e, c, rest = rel
        others = [x if x is not None else 0 for x in values]
        if any(x is None for i, x in enumerate(values) if i != k and any(t[i] for t in rest.terms)):
            raise ValidationError("several pullbacks omitted inside one relation")
        a = -rest.evaluate(others) / c
        if not isinstance(a, RamifiedFunction):
            a = RamifiedFunction.constant(a)
        values[k] = RadicalElement.generator(e, a)
    return values


@dataclass
class SyzygyCheck:
    index: int
    passed: bool
    residual: object

    def to_dict(self):
        return {"syzygy": self.index, "passed": self.passed, "residual": str(self.residual)}


def validate_pullbacks(basis: InvariantBasis, pullbacks: Sequence) -> list[SyzygyCheck]:
    """Evaluate every syzygy on the pullbacks; one pass/fail record per syzygy.

    Entries may be RamifiedFunction, RadicalElement or None (solved from a
    relation, so that relation holds by construction).
    """
    values = complete_pullbacks(basis, pullbacks)
    report = []
    for k, s in enumerate(basis.syzygies):
        val = s.evaluate(values)
        zero = val.is_zero() if hasattr(val, "is_zero") else val == 0
        report.append(SyzygyCheck(k, bool(zero), val))
    return report


# ---------------------------------------------------------------------------
# Klein's group of order 168


def _hessian(F: MPoly) -> list[list[MPoly]]:
    n = F.nvars
    return [[F.partial(i).partial(j) for j in range(n)] for i in range(n)]


def _klein_matrices():
    z = lambda k: CycNum.zeta(7, k)  # noqa: E731
    one, zero = CycNum(7, [1]), CycNum(7, [0])
    diag = [[z(1), zero, zero], [zero, z(2), zero], [zero, zero, z(4)]]
    perm = [[zero, one, zero], [zero, zero, one], [one, zero, zero]]
    a = z(4) - z(3)
    b = z(2) - z(5)
    c = z(1) - z(6)
    third = [[a, b, c], [b, c, a], [c, a, b]]
    return diag, perm, third


def _reverse(m):
    """Conjugate by X1 <-> X3."""
    return [list(row[::-1]) for row in m[::-1]]


def klein_matrices():
    """Group generators fixing F4 = X1^3 X2 + X2^3 X3 + X3^3 X1.

    The classical diag(b, b^2, b^4) with cyclic permutation and the (a, b, c)
    circulant fix the reversed quartic X1 X2^3 + X2 X3^3 + X3 X1^3; conjugating
    by X1 <-> X3 moves them onto F4.  The third matrix is scaled into SL_3.
    """
    diag, perm, third = (_reverse(m) for m in _klein_matrices())
    third, _ = normalize_to_sl(third)
    return [diag, perm, third]


# T in (Phi4, Phi6, Phi14, Phi21) with the coefficients exactly as printed in
# the classical source.  With F6 = Hess(F4)/54 it does not vanish: the odd
# powers of Phi6 carry the wrong sign.  KLEIN_SYZYGY is the corrected relation.
KLEIN_SYZYGY_PRINTED = {
    (9, 1, 0, 0): 2048,
    (6, 3, 0, 0): -22016,
    (7, 0, 1, 0): -256,
    (3, 5, 0, 0): 60032,
    (4, 2, 1, 0): 1088,
    (0, 7, 0, 0): -1728,
    (1, 4, 1, 0): 1008,
    (2, 1, 2, 0): 88,
    (0, 0, 3, 0): 1,
    (0, 0, 0, 2): -1,
}

KLEIN_SYZYGY = {e: c * (-1) ** e[1] for e, c in KLEIN_SYZYGY_PRINTED.items()}

KLEIN_NAMES = ("Phi4", "Phi6", "Phi14", "Phi21")


def klein_invariants() -> dict[str, MPoly]:
    """F4, its Hessian, F6, F14 and F21 by the determinant constructions."""
    return dict(_klein_invariants_cached())


@lru_cache(maxsize=1)
def _klein_invariants_cached():
    X1, X2, X3 = MPoly.gens(3)
    F4 = X1**3 * X2 + X2**3 * X3 + X3**3 * X1
    H = _hessian(F4)
    hess = det(H)
    F6 = hess / Fraction(54)
    g6 = [F6.partial(i) for i in range(3)]
    zero = MPoly(3)
    bordered = [H[0] + [g6[0]], H[1] + [g6[1]], H[2] + [g6[2]], g6 + [zero]]
    F14 = det(bordered) / Fraction(9)
    from .builder import jacobian

    F21 = det(jacobian([F4, F6, F14], check=False)) / Fraction(14)
    return (("F4", F4), ("hessian", hess), ("F6", F6), ("F14", F14), ("F21", F21))


@lru_cache(maxsize=1)
def klein_preset() -> tuple[GroupSpec, InvariantBasis]:
    group = GroupSpec(3, klein_matrices(), order=168, det_one=True, conductor=7, name="klein168")
    inv = klein_invariants()
    T = GeneratorSymbolPoly(4, {e: Fraction(c) for e, c in KLEIN_SYZYGY.items()}, KLEIN_NAMES)
    basis = InvariantBasis(
        [inv["F4"], inv["F6"], inv["F14"], inv["F21"]],
        (4, 6, 14, 21),
        (0, 1, 2),
        [T],
        KLEIN_NAMES,
    )
    return group, basis


PRESETS = {"klein168": klein_preset}


def preset(name: str) -> tuple[GroupSpec, InvariantBasis]:
    try:
        return PRESETS[name]()
    except KeyError:
        raise ValidationError(f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}") from None


def all_exponents(n: int, d: int) -> Iterable[tuple]:
    for e in product(range(d + 1), repeat=n):
        if sum(e) == d:
            yield e
