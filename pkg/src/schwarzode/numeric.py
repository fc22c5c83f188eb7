"""Numeric end-to-end check: integrate the ODE and compare F_i(y) with f_i."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .algebra.cyclotomic import CycNum
from .algebra.mpoly import MPoly
from .algebra.radical import RadicalElement
from .algebra.ramified import RamifiedFunction, from_fmpq
from .builder import OdeResult, _eval_flint, jet_name, universal_table
from .errors import IntegrationStalled, NoInitialPoint, ValidationError, VerificationError
from .invariants import InvariantBasis, complete_pullbacks

DEFAULT_TOLERANCE = 1e-6
DEFAULT_PATH = (0.5 + 0.5j, 1.5 + 1.0j, -0.5 + 1.5j)


# ---------------------------------------------------------------------------
# compiled evaluation


class CompiledPoly:
    """Numeric evaluation of an MPoly (and its gradient)."""

    def __init__(self, p: MPoly):
        self.nvars = p.nvars
        items = list(p.terms.items())
        self.exps = np.array([e for e, _ in items], dtype=np.int64).reshape(len(items), p.nvars)
        self.coeffs = np.array([complex(c) if isinstance(c, CycNum) else complex(float(c)) for _, c in items])

    def __call__(self, x) -> complex:
        x = np.asarray(x, dtype=complex)
        return complex(np.prod(x[None, :] ** self.exps, axis=1) @ self.coeffs) if len(self.coeffs) else 0j

    def gradient(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        out = np.zeros(self.nvars, dtype=complex)
        for i in range(self.nvars):
            e = self.exps.copy()
            k = e[:, i].copy()
            mask = k > 0
            if not mask.any():
                continue
            e[mask, i] -= 1
            vals = np.prod(x[None, :] ** e[mask], axis=1)
            out[i] = vals @ (self.coeffs[mask] * k[mask])
        return out


class CompiledFunction:
    """Numeric evaluation of a RamifiedFunction given root values of its bases."""

    def __init__(self, f: RamifiedFunction):
        self.bases = f.bases
        self.ram = f.ram

        def pack(p):
            d = p.to_dict()
            nv = max(len(f.bases), 1)
            exps = np.array([[int(k) for k in e] for e in d], dtype=np.int64).reshape(len(d), nv)
            coeffs = np.array([float(from_fmpq(c)) for c in d.values()], dtype=complex)
            return exps, coeffs

        self.num = pack(f.num)
        self.den = pack(f.den)

    def __call__(self, roots: dict) -> complex:
        """roots maps base -> (t, R, S) with base = S * t^R on a common lift."""
        if not self.bases:
            vals = np.ones(1, dtype=complex)
        else:
            vals = np.array([_own_root(roots[b], r, s) for b, (r, s) in zip(self.bases, self.ram)], dtype=complex)

        def ev(packed):
            exps, coeffs = packed
            if not len(coeffs):
                return 0j
            return np.prod(vals[None, :] ** exps, axis=1) @ coeffs

        return complex(ev(self.num) / ev(self.den))


def _own_root(fine, r: int, s: int) -> complex:
    t, R, S = fine
    if R % r:
        raise ValueError("ramification not refined by the common lift")
    v = t ** (R // r)
    if s != S:
        if r % 2 == 0:
            raise ValueError("incompatible sign branches")
        v = -v
    return v


def common_ram(functions) -> dict:
    bases, ram = RamifiedFunction.common_ramification(*functions) if functions else ((), ())
    return dict(zip(bases, ram))


def root_branch(base_value: complex, r: int, sign: int, previous: complex | None = None) -> complex:
    """A root t with sign * t^r = base_value; principal, or nearest to previous."""
    target = base_value * sign
    if r == 1:
        return target
    principal = cmath.exp(cmath.log(target) / r) if target != 0 else 0j
    if previous is None:
        return principal
    best = principal
    for k in range(1, r):
        cand = principal * cmath.exp(2j * math.pi * k / r)
        if abs(cand - previous) < abs(best - previous):
            best = cand
    return best


class BranchTracker:
    """Continues the root variables of all bases along a path."""

    def __init__(self, ram: dict, params: dict | None = None):
        self.ram = dict(ram)
        self.params = dict(params or {})
        self.state: dict[str, complex] = {}

    def roots(self, z: complex) -> dict:
        out = {}
        for base, (r, s) in self.ram.items():
            value = z if base == "z" else self.params.get(base)
            if value is None:
                raise ValidationError(f"parameter {base} needs a numeric value for verification")
            t = root_branch(complex(value), r, s, self.state.get(base))
            self.state[base] = t
            out[base] = (t, r, s)
        return out


# ---------------------------------------------------------------------------
# configuration and results


@dataclass
class NumericConfig:
    path: tuple = DEFAULT_PATH
    tolerance: float = DEFAULT_TOLERANCE
    margin: float = 0.1
    newton_starts: int = 64
    seed: int = 0
    samples_per_segment: int = 40
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ValidationError("tolerance must be positive")
        if len(self.path) < 2:
            raise ValidationError("path needs at least two points")

    @property
    def z0(self) -> complex:
        return complex(self.path[0])


@dataclass
class Trajectory:
    z: np.ndarray
    Y: np.ndarray  # shape (samples, order, components): y, y', ..., y^(n-1)

    @property
    def y(self) -> np.ndarray:
        return self.Y[:, 0, :]


@dataclass
class VerificationReport:
    residual: float
    per_pullback: list
    tolerance: float
    passed: bool
    base_point: complex
    path: tuple
    seed: int
    x0: list
    condition: float

    def to_dict(self) -> dict:
        c = lambda v: [v.real, v.imag]  # noqa: E731
        return {
            "residual": self.residual,
            "per_pullback": self.per_pullback,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "base_point": c(self.base_point),
            "path": [c(complex(p)) for p in self.path],
            "seed": self.seed,
            "x0": [c(x) for x in self.x0],
            "jacobian_condition": self.condition,
        }


# ---------------------------------------------------------------------------
# operations


def initial_point(
    Fs: Sequence[MPoly], targets: Sequence[complex], seed: int = 0, starts: int = 64, tol: float = 1e-12
) -> tuple[np.ndarray, float]:
    """Newton multi-start for F(x) = targets; returns (x0, Jacobian condition)."""
    comp = [CompiledPoly(F) for F in Fs]
    n = len(Fs)
    targets = np.asarray(targets, dtype=complex)
    degs = [F.total_degree() for F in Fs]
    scale = max(1.0, float(np.max(np.abs(targets))) if len(targets) else 1.0)
    radius = max(1.0, scale ** (1.0 / max(min(degs), 1)))
    rng = np.random.default_rng(seed)
    found_singular = False
    for _ in range(starts):
        x = radius * (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / math.sqrt(2)
        for _it in range(100):
            Fx = np.array([c(x) for c in comp]) - targets
            if np.max(np.abs(Fx)) <= tol * scale:
                break
            J = np.array([c.gradient(x) for c in comp])
            try:
                step = np.linalg.solve(J, Fx)
            except np.linalg.LinAlgError:
                break
            x = x - step
            if not np.all(np.isfinite(x)) or np.max(np.abs(x)) > 1e8:
                break
        else:
            pass
        Fx = np.array([c(x) for c in comp]) - targets
        if np.all(np.isfinite(x)) and np.max(np.abs(Fx)) <= 1e3 * tol * scale:
            J = np.array([c.gradient(x) for c in comp])
            cond = float(np.linalg.cond(J))
            if cond < 1e10:
                return x, cond
            found_singular = True
    if found_singular:
        raise NoInitialPoint("only ramified points found: Jacobian is singular at every root")
    raise NoInitialPoint("no initial point found within the Newton budget")


def numeric_jets(primary_pullbacks: Sequence[RamifiedFunction], n: int, roots: dict) -> dict:
    jets = {}
    for k, f in enumerate(primary_pullbacks):
        cur = f
        for j in range(1, n + 1):
            cur = cur.derivative("z")
            jets[jet_name(k + 1, j)] = CompiledFunction(cur)(roots)
    return jets


def derived_initials(x0, basis: InvariantBasis, primary_pullbacks: Sequence, roots: dict) -> list[np.ndarray]:
    """[y, y', ..., y^(n-1)] at the base point from the recursion table."""
    table = universal_table(basis)
    n = basis.n
    jets = numeric_jets([_rf(f) for f in primary_pullbacks], n, roots)
    D = complex(_eval_flint(table.D, list(x0) + [jets[name] for name in table.jet_names]))
    if abs(D) < 1e-14:
        raise VerificationError("singular Jacobian at the initial point")
    out = [np.asarray(x0, dtype=complex)]
    for j in range(1, n):
        out.append(np.array([table.numeric_entry(i, j, x0, jets) for i in range(n)]))
    return out


def _rf(f) -> RamifiedFunction:
    return f if isinstance(f, RamifiedFunction) else RamifiedFunction.constant(f)


def _check_path(path: Sequence[complex], singular: Sequence[complex], margin: float) -> None:
    for a, b in zip(path, path[1:]):
        a, b = complex(a), complex(b)
        for s in singular:
            d = b - a
            t = 0.0 if d == 0 else max(0.0, min(1.0, ((s - a) * d.conjugate()).real / abs(d) ** 2))
            if abs(a + t * d - s) < margin:
                raise ValidationError(f"path passes within {margin} of the singular point {s}")


def finite_singularities(ode: OdeResult) -> list[complex]:
    pts = []
    for c in ode.coeffs:
        if "z" not in c.bases:
            continue
        # numerical roots of the denominator in the root variable, mapped to z
        i = c.bases.index("z")
        r, s = c.ram[i]
        if len(c.bases) > 1:
            continue
        d = c.den.to_dict()
        top = max(e[i] for e in d)
        coeffs = [0.0] * (top + 1)
        for e, v in d.items():
            coeffs[top - e[i]] = float(from_fmpq(v))
        for w in np.roots(coeffs):
            pts.append(s * w**r)
    return pts


def integrate(ode: OdeResult, initials: Sequence, config: NumericConfig) -> Trajectory:
    """Adaptive Runge-Kutta along the polyline, companion system in complex form."""
    n = ode.order
    comp = [CompiledFunction(c) for c in ode.coeffs]
    tracker = BranchTracker(common_ram(ode.coeffs), config.params)
    tracker.roots(config.z0)
    rtol = max(config.tolerance / 100, 1e-13)  # DOP853 floor is ~2.2e-14
    state = np.array([np.atleast_1d(np.asarray(v, dtype=complex)) for v in initials])  # (order, comps)
    shape = state.shape
    zs = [config.z0]
    Ys = [state.copy()]
    for a, b in zip(config.path, config.path[1:]):
        a, b = complex(a), complex(b)
        d = b - a

        def rhs(s, V, a=a, d=d):
            roots = tracker.roots(a + s * d)
            cs = [f(roots) for f in comp]
            V = V.reshape(shape)
            out = np.empty_like(V)
            out[:-1] = V[1:]
            out[-1] = -sum(cs[i] * V[i] for i in range(n))
            return (out * d).ravel()

        ts = np.linspace(0, 1, config.samples_per_segment + 1)
        sol = solve_ivp(
            rhs, (0.0, 1.0), state.ravel(), method="DOP853", rtol=rtol, atol=rtol * 1e-3, t_eval=ts, max_step=1 / 50
        )
        if sol.status != 0:
            raise IntegrationStalled(f"integration stalled: {sol.message}")
        if not np.all(np.isfinite(sol.y)):
            raise IntegrationStalled("integration stalled: non-finite values")
        for k in range(1, len(ts)):
            zs.append(a + ts[k] * d)
            Ys.append(sol.y[:, k].reshape(shape))
        state = sol.y[:, -1].reshape(shape)
    return Trajectory(np.array(zs), np.array(Ys))


def residual(traj: Trajectory, basis: InvariantBasis, pullbacks: Sequence, config: NumericConfig, x0=None):
    """Max over samples and generators of |F_i(y) - f_i| / (1 + |f_i|)."""
    values = complete_pullbacks(basis, pullbacks)
    comps = [CompiledPoly(F) for F in basis.generators]
    explicit = [v for v in values if isinstance(v, RamifiedFunction)]
    explicit += [v.a for v in values if isinstance(v, RadicalElement)]
    tracker = BranchTracker(common_ram(explicit), config.params)
    funcs = []
    radical_state = {}
    for k, v in enumerate(values):
        if isinstance(v, RadicalElement):
            funcs.append(("radical", CompiledFunction(v.a), v.k))
        else:
            funcs.append(("explicit", CompiledFunction(_rf(v)), None))
    worst = [0.0] * len(values)
    for idx, z in enumerate(traj.z):
        y = traj.Y[idx, 0, :]
        roots = tracker.roots(complex(z))
        for k, (kind, f, e) in enumerate(funcs):
            Fy = comps[k](y)
            if kind == "explicit":
                fv = f(roots)
            else:
                a = f(roots)
                prev = radical_state.get(k, Fy if idx == 0 else None)
                fv = root_branch(a, e, 1, prev)
                radical_state[k] = fv
            worst[k] = max(worst[k], abs(Fy - fv) / (1 + abs(fv)))
    return max(worst), worst


def verify(
    ode: OdeResult,
    basis: InvariantBasis,
    pullbacks: Sequence,
    config: NumericConfig | None = None,
) -> VerificationReport:
    config = config or NumericConfig()
    _check_path(config.path, finite_singularities(ode), config.margin)
    values = complete_pullbacks(basis, pullbacks)
    primary = [_rf(values[i]) for i in basis.primary]
    roots = BranchTracker(common_ram(primary), config.params).roots(config.z0)
    targets = [CompiledFunction(f)(roots) for f in primary]
    x0, cond = initial_point(basis.primary_generators(), targets, config.seed, config.newton_starts)
    initials = derived_initials(x0, basis, primary, roots)
    traj = integrate(ode, initials, config)
    res, per = residual(traj, basis, pullbacks, config)
    return VerificationReport(
        res, per, config.tolerance, res < config.tolerance, config.z0, tuple(config.path), config.seed, list(x0), cond
    )


def perturb(ode: OdeResult, index: int, factor) -> OdeResult:
    """Copy of ode with c_index multiplied by factor (sensitivity checks)."""
    from fractions import Fraction

    coeffs = list(ode.coeffs)
    coeffs[index] = coeffs[index] * Fraction(factor)
    return OdeResult(ode.order, coeffs, dict(ode.provenance))
