from __future__ import annotations

import cmath

import numpy as np
import pytest

from schwarzode.algebra import MPoly, RamifiedFunction
from schwarzode.builder import OdeResult, construct_ode
from schwarzode.errors import ValidationError
from schwarzode.expr import parse_function as P
from schwarzode.invariants import InvariantBasis
from schwarzode.numeric import (
    CompiledPoly,
    NumericConfig,
    initial_point,
    integrate,
    perturb,
    verify,
)

X = MPoly.variable(1, 0)
zero = RamifiedFunction.constant(0)


def test_initial_point_linear():
    x, cond = initial_point([X], [2.0])
    assert abs(x[0] - 2) < 1e-12 and cond == pytest.approx(1.0)


def test_initial_point_square():
    x, _ = initial_point([X**2], [4.0])
    assert abs(abs(x[0]) - 2) < 1e-12 and abs(x[0].imag) < 1e-12


def test_initial_point_klein(klein):
    _, basis = klein
    prim = basis.primary_generators()
    targets = [0.0, 1 / 0.5**4, -12 / 0.5**9]
    x, _ = initial_point(prim, targets, seed=3)
    got = [CompiledPoly(F)(x) for F in prim]
    assert max(abs(g - t) / (1 + abs(t)) for g, t in zip(got, targets)) < 1e-12


def test_integrate_exponential():
    ode = OdeResult(1, [RamifiedFunction.constant(-1)])  # y' = y
    cfg = NumericConfig(path=(0, 1), tolerance=1e-8)
    traj = integrate(ode, [np.array([1.0])], cfg)
    assert abs(traj.y[-1, 0] - cmath.e) < 1e-10


def test_integrate_linear():
    ode = OdeResult(2, [zero, zero])  # y'' = 0 through y = z
    cfg = NumericConfig(path=(0.5, 1 + 1j, 2), tolerance=1e-8)
    traj = integrate(ode, [np.array([0.5]), np.array([1.0])], cfg)
    assert np.max(np.abs(traj.y[:, 0] - traj.z)) < 1e-12


def test_n1_residual():
    basis = InvariantBasis([X**3], (3,), (0,))
    g = P("(z^2 + 1)/(z - 3)")
    ode = construct_ode(basis, [g])
    rep = verify(ode, basis, [g], NumericConfig(path=(0.5 + 0.5j, 1 + 1j, 2 + 0.5j), tolerance=1e-10))
    assert rep.passed and rep.residual < 1e-11


def test_path_near_singularity_rejected():
    basis = InvariantBasis([X**2], (2,), (0,))
    ode = construct_ode(basis, [P("z")])
    with pytest.raises(ValidationError):
        verify(ode, basis, [P("z")], NumericConfig(path=(1, -1)))


def test_hurwitz_residual_and_sensitivity(klein):
    _, basis = klein
    pulls = [zero, P("1/z^4"), P("-12/z^9"), None]
    ode = construct_ode(basis, pulls)
    cfg = NumericConfig(tolerance=1e-6)
    rep = verify(ode, basis, pulls, cfg)
    assert rep.passed and rep.residual < 1e-9
    bad = verify(perturb(ode, 0, "101/100"), basis, pulls, cfg)
    assert not bad.passed and bad.residual > 100 * cfg.tolerance


def test_config_validation():
    with pytest.raises(ValidationError):
        NumericConfig(tolerance=0)
    with pytest.raises(ValidationError):
        NumericConfig(path=(1,))
