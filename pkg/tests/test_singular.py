from __future__ import annotations

from fractions import Fraction

import pytest

from schwarzode.algebra import RamifiedFunction
from schwarzode.builder import OdeResult
from schwarzode.errors import IrregularSingularity, LogarithmicCase, NonRationalExponents
from schwarzode.expr import parse_function as P
from schwarzode.singular import (
    analyze,
    calibrate_degree_scale,
    classify_point,
    curve_degree,
    euler_characteristic,
    exponent_normal_form,
    indicial_exponents,
    singular_points,
)

zero = RamifiedFunction.constant(0)

# the classical display of the Hurwitz equation
HURWITZ = OdeResult(3, [
    P("(1/24696)*(57024*z - 40805)/(z^2*(z - 1)^2)"),
    P("(1/252)*(2592*z^2 - 2963*z + 560)/(z^2*(z - 1)^2)"),
    P("(7*z - 4)/(z*(z - 1))"),
])


def labels(ode):
    return [p.label() for p in singular_points(ode)]


def point(ode, label):
    return next(p for p in singular_points(ode) if p.label() == label)


def test_singular_sets():
    assert labels(HURWITZ) == ["0", "1", "oo"]
    assert labels(OdeResult(2, [zero, zero])) == ["oo"]  # y'' = 0
    assert labels(OdeResult(1, [P("-1/z")])) == ["0", "oo"]  # y' = y/z


def test_exponents_simple():
    ypp = OdeResult(2, [zero, zero])
    from schwarzode.singular import SingularPoint

    origin = SingularPoint("finite", Fraction(0))
    assert indicial_exponents(ypp, origin) == [0, 1]
    euler = OdeResult(2, [P("-1/(4*z^2)"), P("1/z")])  # z^2 y'' + z y' - y/4 = 0
    assert indicial_exponents(euler, point(euler, "0")) == [Fraction(-1, 2), Fraction(1, 2)]
    assert indicial_exponents(ypp, point(ypp, "oo")) == [-1, 0]


def test_hurwitz_exponents():
    got = {p.label(): indicial_exponents(HURWITZ, p) for p in singular_points(HURWITZ)}
    assert got["0"] == [Fraction(-2, 3), Fraction(-1, 3), 0]
    assert got["1"] == [Fraction(-1, 2), 0, Fraction(1, 2)]
    assert got["oo"] == [Fraction(8, 7), Fraction(9, 7), Fraction(11, 7)]
    assert [exponent_normal_form(v).r for v in got.values()] == [3, 2, 7]


@pytest.mark.parametrize(
    "exps,e,r,nu,lam",
    [
        ((0, Fraction(1, 2), Fraction(3, 2)), 0, 2, 1, [2]),
        ((0, 1, 2), 0, 1, 1, [1]),
        ((Fraction(-1, 3), 0, Fraction(1, 3)), Fraction(-1, 3), 3, 1, [1]),
    ],
)
def test_normal_form(exps, e, r, nu, lam):
    d = exponent_normal_form(exps)
    assert (d.e, d.r, d.nu, d.lambdas) == (e, r, nu, lam)
    assert d.reconstruct() == sorted(Fraction(x) for x in exps)


def test_classification():
    cusp = exponent_normal_form([0, Fraction(2, 7), Fraction(3, 7)])  # nu = 2, lambda = 1
    assert classify_point(cusp).labels == ["(2,3)-cusp"]
    flex = exponent_normal_form([0, Fraction(1, 5), Fraction(3, 5)])  # nu = 1, lambda = 2
    assert classify_point(flex).labels == ["(1,3)-flex"]
    app = classify_point(exponent_normal_form([0, 1, 2]))
    assert app.smooth and app.apparent


def test_euler_characteristic():
    assert euler_characteristic([2, 3, 7], 168) == -4
    assert euler_characteristic([1, 1], 168) == 2 * 168
    assert euler_characteristic([], 1) == 2
    assert euler_characteristic([2, 3, 7], 168, "printed") != -4


def test_degree():
    assert curve_degree(0, 1, 168) == 0
    assert curve_degree(0, 3, 5) == 0
    assert curve_degree(Fraction(-1, 42), 1, 168) == 4


def test_degree_scale_calibration():
    rep = analyze(HURWITZ, m=1, group_order=168, genus=3)
    assert rep.exponent_sum == Fraction(-1, 42)
    assert calibrate_degree_scale(rep.exponent_sum, 1, 3, 168, target=4) == ["group-order"]


def test_hurwitz_report():
    rep = analyze(HURWITZ, m=1, group_order=168)
    assert rep.singular_set() == ["0", "1", "oo"]
    assert sorted(p.data.r for p in rep.points) == [2, 3, 7]
    assert rep.chi == -4 and rep.genus == 3 and rep.degree == 4
    assert rep.fuchs[0] == rep.fuchs[1]
    assert "(1,3)-flex" in rep.points[2].classification.labels


def test_scope_errors():
    with pytest.raises(IrregularSingularity):
        analyze(OdeResult(1, [P("-1/z^2")]), group_order=1)
    with pytest.raises(NonRationalExponents):
        analyze(OdeResult(2, [P("1/z^2"), zero]), group_order=1)  # e(e-1) + 1 = 0
    with pytest.raises(LogarithmicCase):
        exponent_normal_form([0, 0, 1])
