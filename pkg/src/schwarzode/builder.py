"""Construction of the linear ODE whose Schwarz map parametrizes an invariant curve.

Pipeline: extend d/dz to polynomials in X by dX_i = 0, run the recursion for
the derivatives of the solution vector, take the linear dependence among the
columns by signed maximal minors, rewrite the invariant ratios in the
generators, then substitute the pullbacks.

The table is built once per invariant basis with the jets d^j f_k kept as
formal symbols u_k_j.  Every step is polynomial in the jets, so the result is
specialized at the very end.  That keeps the expensive parts (minors and
rewriting) independent of the pullbacks and cacheable.
"""

from __future__ import annotations

import hashlib
import math
import os
import pickle
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Sequence

import flint

from .algebra.bridge import to_flint
from .algebra.linalg import det, nullspace_cofactor
from .algebra.mpoly import MPoly
from .algebra.radical import RadicalElement
from .algebra.ramified import (
    RamifiedFunction,
    common_denominator_form,
    flint_ctx,
    from_fmpq,
    root_name,
)
from .errors import DegenerateDependence, DegenerateGeneratorSet, NotExpressible, ValidationError
from .invariants import (
    GroupSpec,
    InvariantBasis,
    complete_pullbacks,
    rewrite_engine,
    split_by_x,
    validate_pullbacks,
)


# ---------------------------------------------------------------------------
# step (i)


@dataclass
class DerivationContext:
    """d/dz on ramified functions; the variables X are constants."""

    bases: tuple
    ram: tuple
    pullbacks: list
    params: tuple = ()

    @property
    def r(self) -> int:
        if "z" in self.bases:
            return self.ram[self.bases.index("z")][0]
        return 1

    def delta(self, f):
        if isinstance(f, RamifiedFunction):
            return f.derivative("z")
        if isinstance(f, (int, Fraction)):
            return RamifiedFunction.constant(0)
        raise TypeError(f"cannot differentiate {type(f).__name__}")

    def jets(self, f, order: int) -> list:
        out = []
        cur = f
        for _ in range(order):
            cur = self.delta(cur)
            out.append(cur)
        return out


def setup_derivation(pullbacks: Sequence, params: Sequence[str] = ()) -> DerivationContext:
    """Lift all explicit pullbacks to their common ramification."""
    explicit = [f for f in pullbacks if isinstance(f, RamifiedFunction)]
    bases, ram = RamifiedFunction.common_ramification(*explicit) if explicit else ((), ())
    lifted = []
    for f in pullbacks:
        if isinstance(f, RamifiedFunction) and not f.is_zero():
            num, den = f.lifted(bases, ram)
            lifted.append(RamifiedFunction(bases, ram, num, den, normalize=False))
        else:
            lifted.append(f)
    return DerivationContext(tuple(bases), tuple(ram), lifted, tuple(params))


def jacobian(Fs: Sequence[MPoly], check: bool = True) -> list[list[MPoly]]:
    n = len(Fs)
    if any(F.nvars != n for F in Fs):
        raise ValidationError("jacobian needs n polynomials in n variables")
    J = [[F.partial(j) for j in range(n)] for F in Fs]
    if check and det(J).is_zero():
        raise DegenerateGeneratorSet("degenerate generator set: Jacobian determinant is identically zero")
    return J


# ---------------------------------------------------------------------------
# step (ii): the table with formal jets


def jet_name(k: int, j: int) -> str:
    return f"u{k}_{j}"


@dataclass
class XijTable:
    """X_{i,j} = P[j][i] / D^exps[j] over Q[X, u]; column 0 is X itself."""

    n: int
    ctx: flint.fmpq_mpoly_ctx
    jet_names: tuple
    D: flint.fmpq_mpoly
    exps: tuple
    columns: list
    values: dict | None = None  # jet name -> RamifiedFunction, when specialized

    @property
    def nx(self) -> int:
        return self.n

    def entry(self, i: int, j: int):
        """(numerator, denominator) of X_{i,j} as MPolys; jets specialized if known."""
        num = _specialize(self.columns[j][i], self.n, self.jet_names, self.values)
        den = _specialize(self.D ** self.exps[j], self.n, self.jet_names, None)
        return num, den

    def numeric_entry(self, i: int, j: int, x: Sequence[complex], jets: dict) -> complex:
        vals = list(x) + [jets[name] for name in self.jet_names]
        return complex(_eval_flint(self.columns[j][i], vals)) / complex(_eval_flint(self.D, vals)) ** self.exps[j]


def _eval_flint(p: flint.fmpq_mpoly, vals: Sequence[complex]) -> complex:
    total = 0j
    for e, c in p.to_dict().items():
        term = complex(float(from_fmpq(c)))
        for v, k in zip(vals, e):
            if k:
                term *= v ** int(k)
        total += term
    return total


def _specialize(p: flint.fmpq_mpoly, n: int, jet_names, values) -> MPoly:
    terms: dict = {}
    for e, c in p.to_dict().items():
        x = tuple(e[:n])
        coef = from_fmpq(c)
        if values is not None:
            val = RamifiedFunction.constant(coef)
            for name, k in zip(jet_names, e[n:]):
                if k:
                    val = val * values[name] ** k
            terms[x] = terms[x] + val if x in terms else val
        else:
            if any(e[n:]):
                raise ValueError("jets present but no values supplied")
            terms[x] = terms.get(x, 0) + coef
    return MPoly(n, terms)


def _adjugate(J: list[list]) -> list[list]:
    n = len(J)
    if n == 1:
        return [[J[0][0] ** 0]]
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1 :] for k, row in enumerate(J) if k != i]
            c = det(minor)
            adj[j][i] = -c if (i + j) % 2 else c
    return adj


@lru_cache(maxsize=16)
def universal_table(basis: InvariantBasis) -> XijTable:
    """Steps (i)-(ii) with formal jets; cached per basis."""
    if not basis.is_rational():
        raise ValidationError("the construction requires generators with rational coefficients")
    n = basis.n
    jets = tuple(jet_name(k + 1, j) for k in range(n) for j in range(1, n + 1))
    ctx = flint_ctx(tuple(f"X{i + 1}" for i in range(n)) + jets)
    gens = ctx.gens()
    X = list(gens[:n])
    U = {(k, j): gens[n + k * n + (j - 1)] for k in range(n) for j in range(1, n + 1)}
    Fs = [to_flint(F, ctx) for F in basis.primary_generators()]
    J = [[F.derivative(j) for j in range(n)] for F in Fs]
    D = det(J)
    if D.is_zero():
        raise DegenerateGeneratorSet("degenerate generator set: Jacobian determinant is identically zero")
    A = _adjugate(J)
    # column 1: J^{-1} u_1 = A u_1 / D
    P1 = [sum((A[i][k] * U[(k, 1)] for k in range(n)), ctx.from_dict({})) for i in range(n)]
    dD = [D.derivative(l) for l in range(n)]
    DD = sum((dD[l] * P1[l] for l in range(n)), ctx.from_dict({}))

    def delta(P):
        # d/dz acts on jets only: u_k_j -> u_k_{j+1}
        out = ctx.from_dict({})
        for (k, j), u in U.items():
            if j < n:
                dp = P.derivative(n + k * n + (j - 1))
                if not dp.is_zero():
                    out += dp * U[(k, j + 1)]
        return out

    columns = [X, P1]
    exps = [0, 1]
    for _ in range(2, n + 1):
        P, e = columns[-1], exps[-1]
        # d(P/D^e) = [D (sum_l dP/dX_l P1_l + D dP) - e P sum_l dD/dX_l P1_l] / D^(e+2)
        nxt = []
        for p in P:
            s = sum((p.derivative(l) * P1[l] for l in range(n)), ctx.from_dict({}))
            nxt.append(D * (s + D * delta(p)) - e * p * DD)
        columns.append(nxt)
        exps.append(e + 2)
    return XijTable(n, ctx, jets, D, tuple(exps), columns)


def build_xij(ctx: DerivationContext, basis: InvariantBasis, primary_pullbacks: Sequence) -> XijTable:
    """The table of step (ii) with the jets of the primary pullbacks attached."""
    table = universal_table(basis)
    n = basis.n
    if len(primary_pullbacks) != n:
        raise ValidationError(f"need {n} primary pullbacks")
    values = {}
    for k, f in enumerate(primary_pullbacks):
        for j, v in enumerate(ctx.jets(_as_rf(f), n), start=1):
            values[jet_name(k + 1, j)] = v
    return XijTable(table.n, table.ctx, table.jet_names, table.D, table.exps, table.columns, values)


def _as_rf(f) -> RamifiedFunction:
    if isinstance(f, RamifiedFunction):
        return f
    if isinstance(f, RadicalElement):
        raise ValidationError("primary pullbacks must be given explicitly")
    return RamifiedFunction.constant(f)


# ---------------------------------------------------------------------------
# step (iii)


@dataclass
class Dependence:
    """Null vector of the table: C_j = minors[j] * D^e_j, since column j of
    the polynomial matrix is D^e_j times column j of X."""

    table: XijTable
    minors: list

    def coefficient_exponent(self, j: int) -> int:
        return self.table.exps[j]

    def annihilation_residuals(self, x: Sequence, jets: dict) -> list[complex]:
        """sum_j C_j X_{i,j} at a numeric point, relative to the term magnitudes."""
        t = self.table
        vals = list(x) + [jets[name] for name in t.jet_names]
        Dv = complex(_eval_flint(t.D, vals))
        out = []
        for i in range(t.n):
            acc, size = 0j, 0.0
            for j in range(t.n + 1):
                C = complex(_eval_flint(self.minors[j], vals)) * Dv ** t.exps[j]
                term = C * t.numeric_entry(i, j, x, jets)
                acc += term
                size += abs(term)
            out.append(acc / size if size else acc)
        return out


def solve_dependence(table: XijTable) -> Dependence:
    n = table.n
    matrix = [[table.columns[j][i] for j in range(n + 1)] for i in range(n)]
    minors = nullspace_cofactor(matrix)
    return Dependence(table, minors)


# ---------------------------------------------------------------------------
# step (iv): universal rewriting

CACHE_VERSION = 1


@dataclass
class UniversalRewrite:
    """Invariant parts of the dependence, rewritten in generator symbols.

    c_i = Q[i] * Dpow(s[i]) / Q[n]: Q[i] rewrites minors[i] / D^k_i and s[i]
    is the exponent of D left over.  When the reduced minor and the power of D
    are not separately invariant the quotient is rewritten as a whole
    (``whole``).
    """

    basis: InvariantBasis
    dependence: Dependence
    Q: list
    s: list
    dpow: dict
    whole: dict = field(default_factory=dict)


def _strip(p, D):
    if D.is_constant():
        return p, 0
    k = 0
    while True:
        q, r = divmod(p, D)
        if not r.is_zero():
            return p, k
        p, k = q, k + 1


def _cache_path(basis: InvariantBasis):
    root = os.environ.get("SCHWARZODE_CACHE")
    if not root:
        return None
    digest = hashlib.sha256(repr(basis.key()).encode()).hexdigest()[:24]
    return Path(root) / f"rewrite-{CACHE_VERSION}-{digest}.pickle"


def _dump_symbol(sym):
    if sym is None:
        return None
    return {a: {e: (int(c.p), int(c.q)) for e, c in q.to_dict().items()} for a, q in sym.items()}


def _load_symbol(sym, actx):
    if sym is None:
        return None
    return {a: actx.from_dict({e: flint.fmpq(*c) for e, c in q.items()}) for a, q in sym.items()}


@lru_cache(maxsize=16)
def universal_rewrite(basis: InvariantBasis) -> UniversalRewrite:
    """Step (iv) on the formal table.

    With SCHWARZODE_CACHE set to a directory the result is also kept on disk,
    keyed by the generators.
    """
    path = _cache_path(basis)
    if path is not None and path.exists():
        with open(path, "rb") as fh:
            blob = pickle.load(fh)
        table = universal_table(basis)
        actx = rewrite_engine(basis, table.jet_names).actx
        return UniversalRewrite(
            basis,
            Dependence(table, None),
            [_load_symbol(q, actx) for q in blob["Q"]],
            blob["s"],
            {k: _load_symbol(v, actx) for k, v in blob["dpow"].items()},
            {k: (_load_symbol(a, actx), _load_symbol(b, actx)) for k, (a, b) in blob["whole"].items()},
        )
    uni = _compute_universal_rewrite(basis)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        blob = {
            "Q": [_dump_symbol(q) for q in uni.Q],
            "s": uni.s,
            "dpow": {k: _dump_symbol(v) for k, v in uni.dpow.items()},
            "whole": {k: (_dump_symbol(a), _dump_symbol(b)) for k, (a, b) in uni.whole.items()},
        }
        tmp = path.with_suffix(".tmp")
        with open(tmp, "wb") as fh:
            pickle.dump(blob, fh)
        os.replace(tmp, path)
    return uni


def _compute_universal_rewrite(basis: InvariantBasis) -> UniversalRewrite:
    table = universal_table(basis)
    dep = solve_dependence(table)
    n = table.n
    stripped = [_strip(c, table.D) for c in dep.minors]
    s = [table.exps[i] + stripped[i][1] - table.exps[n] - stripped[n][1] for i in range(n)]
    eng = rewrite_engine(basis, table.jet_names)

    def rew(p):
        return eng.rewrite_graded(split_by_x(p, n, eng.actx))

    Q = []
    whole = {}
    dpow = {}
    failed = []
    for i in range(n + 1):
        try:
            Q.append(rew(stripped[i][0]))
        except NotExpressible:
            Q.append(None)
            failed.append(i)
    for i in range(n):
        if s[i] and abs(s[i]) not in dpow:
            try:
                dpow[abs(s[i])] = rew(table.D ** abs(s[i]))
            except NotExpressible:
                dpow[abs(s[i])] = None
    for i in range(n):
        ok = Q[i] is not None and Q[n] is not None and (s[i] == 0 or dpow[abs(s[i])] is not None)
        if ok:
            continue
        # fall back to the whole numerator and denominator of C_i / C_n
        num, den = stripped[i][0], stripped[n][0]
        if s[i] > 0:
            num = num * table.D ** s[i]
        elif s[i] < 0:
            den = den * table.D ** (-s[i])
        whole[i] = (rew(num), rew(den))
    return UniversalRewrite(basis, dep, Q, s, dpow, whole)


# ---------------------------------------------------------------------------
# step (v)


@dataclass
class OdeResult:
    """y^(n) + c_{n-1} y^(n-1) + ... + c_0 y = 0."""

    order: int
    coeffs: list
    provenance: dict = field(default_factory=dict)

    @property
    def ramification(self) -> dict:
        out = {}
        for c in self.coeffs:
            for b, (r, s) in zip(c.bases, c.ram):
                r0, _ = out.get(b, (1, 1))
                out[b] = (r0 * r // math.gcd(r0, r), s)
        return out

    @property
    def r(self) -> int:
        return self.ramification.get("z", (1, 1))[0]

    def parameters(self) -> list[str]:
        names = set()
        for c in self.coeffs:
            names.update(b for b in c.bases if b != "z")
        return sorted(names)

    def __eq__(self, other):
        return (
            isinstance(other, OdeResult)
            and self.order == other.order
            and all(a == b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __str__(self):
        parts = [f"y^({self.order})"]
        for i in range(self.order - 1, -1, -1):
            c = self.coeffs[i]
            if not c.is_zero():
                d = "y" if i == 0 else f"y^({i})"
                parts.append(f"({c})*{d}")
        return " + ".join(parts) + " = 0"


class _Substituter:
    """Evaluates symbol polynomials at the pullbacks and their jets."""

    def __init__(self, basis: InvariantBasis, values: list, jets: dict, jet_names: tuple):
        self.basis = basis
        self.jet_names = jet_names
        self.implicit = None
        explicit = []
        for k, v in enumerate(values):
            if isinstance(v, RadicalElement):
                if self.implicit is not None:
                    raise ValidationError("at most one pullback may be left implicit")
                self.implicit = (k, v)
            else:
                explicit.append(_as_rf(v))
        jet_vals = [jets[name] for name in jet_names]
        bases, ram, nums, L = common_denominator_form(explicit + jet_vals)
        self.bases, self.ram = bases, ram
        names = tuple(root_name(b) for b in bases)
        if self.implicit is not None:
            names = names + ("phi",)
        self.ctx = flint_ctx(names)
        nv = len(bases)

        def embed(p):
            out = {}
            for e, c in p.to_dict().items():
                key = (tuple(e[:nv]) if nv else ()) + ((0,) if self.implicit is not None else ())
                out[key or (0,)] = c
            return self.ctx.from_dict(out)

        self.L = embed(L)
        nums = [embed(p) for p in nums]
        it = iter(nums)
        self.gen_targets = []
        for k in range(basis.ngens):
            if self.implicit is not None and k == self.implicit[0]:
                self.gen_targets.append(self.ctx.gens()[-1] * self.L)
            else:
                self.gen_targets.append(next(it))
        self.jet_targets = list(it)

    def _value(self, poly, T):
        # poly = L^T * (symbol value); divide back out
        LT = self.L**T
        if self.implicit is None:
            return RamifiedFunction(self.bases, self.ram, poly, LT)
        k, gen = self.implicit
        nv = len(self.bases)
        groups: dict[int, dict] = {}
        for e, c in poly.to_dict().items():
            groups.setdefault(e[-1], {})[tuple(e[:nv]) if nv else (0,)] = c
        base_ctx = flint_ctx(tuple(root_name(b) for b in self.bases))
        LT_base = base_ctx.from_dict({(tuple(e[:nv]) if nv else (0,)): c for e, c in LT.to_dict().items()})
        top = max(groups, default=0)
        coeffs = [RamifiedFunction.constant(0)] * (top + 1)
        for e, t in groups.items():
            coeffs[e] = RamifiedFunction(self.bases, self.ram, base_ctx.from_dict(t), LT_base)
        return RadicalElement(gen.k, gen.a, coeffs)

    def evaluate(self, symbol: dict):
        """Value of sum_a q_a(u) Phi^a at the pullbacks."""
        N = self.basis.ngens
        nj = len(self.jet_names)
        terms = {}
        T = 0
        for a, q in symbol.items():
            for b, c in q.to_dict().items():
                b = tuple(b[:nj]) if nj else ()
                deg = sum(a) + sum(b)
                T = max(T, deg)
                terms[tuple(a) + b] = (deg, c)
        src = flint_ctx(tuple(f"S{i}" for i in range(N + nj)) + ("h",))
        hom = src.from_dict({e + (T - deg,): c for e, (deg, c) in terms.items()})
        targets = self.gen_targets + self.jet_targets + [self.L]
        poly = hom.compose(*targets, ctx=self.ctx)
        return self._value(poly, T)


def _ratio(num, den):
    if isinstance(num, RadicalElement) or isinstance(den, RadicalElement):
        if not isinstance(num, RadicalElement):
            num = RadicalElement(den.k, den.a, [num])
        if not isinstance(den, RadicalElement):
            den = RadicalElement(num.k, num.a, [den])
        if den.is_zero():
            raise DegenerateDependence("degenerate dependence: leading coefficient vanishes on the pullbacks")
        r = num.ratio(den)
        if r is None:
            raise NotExpressible(
                "coefficient does not lie in the base field for the implicit pullback; supply it explicitly"
            )
        return r
    if den.is_zero():
        raise DegenerateDependence("degenerate dependence: leading coefficient vanishes on the pullbacks")
    return num / den


def substitute_generators(uni: UniversalRewrite, values: list, jets: dict) -> list:
    """Step (v): c_i from the rewritten symbols and the pullback data."""
    table = uni.dependence.table
    sub = _Substituter(uni.basis, values, jets, table.jet_names)
    n = table.n
    cache = {}

    def val(key, symbol):
        if key not in cache:
            cache[key] = sub.evaluate(symbol)
        return cache[key]

    coeffs = []
    for i in range(n):
        if i in uni.whole:
            num_sym, den_sym = uni.whole[i]
            coeffs.append(_ratio(val(("wn", i), num_sym), val(("wd", i), den_sym)))
            continue
        num = val(("Q", i), uni.Q[i])
        den = val(("Q", n), uni.Q[n])
        si = uni.s[i]
        if si > 0:
            num = num * val(("D", si), uni.dpow[si])
        elif si < 0:
            den = den * val(("D", -si), uni.dpow[-si])
        coeffs.append(_ratio(num, den))
    return coeffs


def construct_ode(
    basis: InvariantBasis,
    pullbacks: Sequence,
    params: Sequence[str] = (),
    group: GroupSpec | None = None,
    validate: bool = True,
) -> OdeResult:
    """Steps (i)-(v).  ``pullbacks`` has one entry per generator; None marks a
    non-primary pullback to be solved from a relation."""
    if group is not None and not group.det_one:
        raise ValidationError("construction requires a group of determinant-1 matrices")
    if len(pullbacks) != basis.ngens:
        raise ValidationError(f"expected {basis.ngens} pullbacks, got {len(pullbacks)}")
    for i in basis.primary:
        if pullbacks[i] is None:
            raise ValidationError(f"primary pullback {basis.names[i]} must be given")
    values = complete_pullbacks(basis, pullbacks)
    if validate:
        bad = [c.index for c in validate_pullbacks(basis, pullbacks) if not c.passed]
        if bad:
            raise ValidationError(f"pullbacks violate relation(s) {bad} among the generators")
    ctx = setup_derivation([v for v in values if not isinstance(v, RadicalElement)], params)
    table = build_xij(ctx, basis, [values[i] for i in basis.primary])
    uni = universal_rewrite(basis)
    coeffs = substitute_generators(uni, values, table.values)
    provenance = {
        "degrees": list(basis.degrees),
        "primary": list(basis.primary),
        "pullbacks": [None if isinstance(p, RadicalElement) or p is None else str(p) for p in pullbacks],
        "implicit": [basis.names[k] for k, p in enumerate(pullbacks) if p is None],
        "params": list(params),
    }
    return OdeResult(basis.n, coeffs, provenance)
