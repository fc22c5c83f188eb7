from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from schwarzode.algebra import CycNum, MPoly, RadicalElement, RamifiedFunction, det
from schwarzode.builder import jacobian
from schwarzode.errors import DegenerateGeneratorSet, ValidationError
from schwarzode.invariants import (
    KLEIN_SYZYGY_PRINTED,
    GeneratorSymbolPoly,
    GroupSpec,
    InvariantBasis,
    check_invariance,
    klein_invariants,
    normalize_to_sl,
    rewrite_invariant,
    validate_pullbacks,
)

from conftest import PROPERTY_CASES

X1, X2, X3 = MPoly.gens(3)
z = RamifiedFunction.variable("z")
z7 = CycNum.zeta(7)
PERM = [[0, 1, 0], [0, 0, 1], [1, 0, 0]]  # X1 -> X2 -> X3 -> X1


# -- independent oracle --------------------------------------------------


@pytest.fixture(scope="module")
def sympy_oracle():
    """The determinant constructions redone from scratch in sympy."""
    X = sp.symbols("X1 X2 X3")
    F4 = X[0] ** 3 * X[1] + X[1] ** 3 * X[2] + X[2] ** 3 * X[0]
    H = sp.hessian(F4, X)
    hess = sp.expand(H.det(method="berkowitz"))
    F6 = sp.expand(hess / 54)
    g = [sp.diff(F6, v) for v in X]
    B = H.row_join(sp.Matrix(g)).col_join(sp.Matrix([g + [0]]))
    F14 = sp.expand(B.det(method="berkowitz") / 9)
    J = sp.Matrix([[sp.diff(f, v) for v in X] for f in (F4, F6, F14)])
    F21 = sp.expand(J.det(method="berkowitz") / 14)
    return X, {"F4": F4, "hessian": hess, "F6": F6, "F14": F14, "F21": F21}


def to_sympy(p: MPoly, X):
    return sp.expand(sum(sp.Rational(c.numerator, c.denominator) * sp.prod([v**k for v, k in zip(X, e)])
                         for e, c in ((e, Fraction(c)) for e, c in p.terms.items())))


@pytest.mark.parametrize("name", ["F4", "hessian", "F6", "F14", "F21"])
def test_matches_sympy(sympy_oracle, name):
    X, ref = sympy_oracle
    assert sp.expand(to_sympy(klein_invariants()[name], X) - ref[name]) == 0


def test_degrees_and_f4_coefficient():
    inv = klein_invariants()
    assert [inv[k].total_degree() for k in ("F4", "F6", "F14", "F21")] == [4, 6, 14, 21]
    assert inv["F4"].coefficient((3, 1, 0)) == 1


def test_f6_snapshot():
    assert klein_invariants()["F6"].to_str() == "-X1^5*X3 + 5*X1^2*X2^2*X3^2 - X1*X2^5 - X2*X3^5"


def test_identities(klein):
    _, basis = klein
    inv = klein_invariants()
    assert inv["hessian"] == 54 * inv["F6"]
    assert det(jacobian([inv["F4"], inv["F6"], inv["F14"]])) == 14 * inv["F21"]
    # the stored relation (odd powers of Phi6 flipped) vanishes
    assert basis.syzygies[0].expand(basis).is_zero()
    assert len(basis.syzygies[0].terms) == 10


def test_printed_relation_needs_the_other_f6_sign(klein):
    _, basis = klein
    printed = GeneratorSymbolPoly(4, dict(KLEIN_SYZYGY_PRINTED), basis.names)
    assert not printed.expand(basis).is_zero()
    flipped = InvariantBasis(
        [basis.generators[0], -basis.generators[1], basis.generators[2], basis.generators[3]],
        basis.degrees, basis.primary, [printed], basis.names,
    )
    assert flipped.syzygies[0].expand(flipped).is_zero()


# -- invariance ------------------------------------------------------------


def test_invariance_examples():
    F4 = klein_invariants()["F4"]
    assert check_invariance(F4, PERM) == 1
    # monomials of F4 pick up b^(3+2), b^(6+4), b^(12+1): not fixed by diag(b, b^2, b^4)
    assert check_invariance(F4, [[z7, 0, 0], [0, z7**2, 0], [0, 0, z7**4]]) is None
    assert check_invariance(F4, [[z7**4, 0, 0], [0, z7**2, 0], [0, 0, z7]]) == 1
    reversed_quartic = X1 * X2**3 + X2 * X3**3 + X3 * X1**3
    assert check_invariance(reversed_quartic, [[z7, 0, 0], [0, z7**2, 0], [0, 0, z7**4]]) == 1
    assert check_invariance(X1, PERM) is None
    lam = check_invariance(X1 * X2 * X3, [[z7, 0, 0], [0, z7, 0], [0, 0, z7]])
    assert lam == z7**3


def test_preset_invariance(klein):
    group, basis = klein
    for g in group.generators:
        assert det(g) == 1
        for F in basis.generators:
            assert check_invariance(F, g, 7) == 1


def test_normalize_to_sl():
    g = [[0, 1, 0], [1, 0, 0], [0, 0, 1]]  # det -1, g^2 = I, so lambda = -1
    h, lam = normalize_to_sl(g)
    assert lam == -1 and det(h) == 1
    # in dimension 2 the same swap would need lambda^2 = -1: no rescaling over Q
    assert normalize_to_sl([[0, 1], [1, 0]])[1] is None


def test_group_spec_validation():
    with pytest.raises(ValidationError):
        GroupSpec(2, [[[1, 0], [0, 2]]], order=2)
    with pytest.raises(ValidationError):
        GroupSpec(2, [[[1, 0, 0], [0, 1, 0]]], order=1)


# -- rewriting --------------------------------------------------------------


def test_rewrite_examples(klein):
    group, basis = klein
    inv = klein_invariants()
    names = basis.names
    assert rewrite_invariant(inv["F4"] ** 2, basis).terms == {(2, 0, 0, 0): 1}
    assert rewrite_invariant(inv["hessian"], basis).terms == {(0, 1, 0, 0): 54}
    jac = det(jacobian([inv["F4"], inv["F6"], inv["F14"]]))
    assert rewrite_invariant(jac, basis, group).terms == {(0, 0, 0, 1): 14}
    assert names[3] == "Phi21"


def test_rewrite_refuses_non_sl_group(klein):
    _, basis = klein
    g = GroupSpec(3, [[[0, 1, 0], [1, 0, 0], [0, 0, 1]]], order=2, det_one=False)
    with pytest.raises(ValidationError):
        rewrite_invariant(klein_invariants()["F4"], basis, g)


def test_degenerate_generator_set():
    a, b = MPoly.gens(2)
    with pytest.raises(DegenerateGeneratorSet):
        InvariantBasis([a**2, a**2], (2, 2), (0, 1))


def _symmetric_basis():
    e1 = X1 + X2 + X3
    e2 = X1 * X2 + X1 * X3 + X2 * X3
    e3 = X1 * X2 * X3
    return InvariantBasis([e1, e2, e3], (1, 2, 3), (0, 1, 2), names=("e1", "e2", "e3"))


SYM = _symmetric_basis()
sym_terms = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 2), st.integers(0, 2)),
    st.fractions(min_value=-9, max_value=9, max_denominator=4).filter(lambda c: c != 0),
    max_size=4,
)


@settings(max_examples=PROPERTY_CASES)
@given(sym_terms)
def test_rewrite_round_trip_symmetric(terms):
    Q = GeneratorSymbolPoly(3, terms, SYM.names)
    back = rewrite_invariant(Q.expand(SYM), SYM)
    assert {e: c for e, c in back.terms.items() if c} == {e: Fraction(c) for e, c in terms.items()}


@settings(max_examples=25)
@given(
    st.dictionaries(
        st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 1), st.integers(0, 1)),
        st.integers(-5, 5).filter(bool),
        max_size=3,
    )
)
def test_rewrite_round_trip_klein(klein, terms):
    _, basis = klein
    Q = GeneratorSymbolPoly(4, terms, basis.names)
    back = rewrite_invariant(Q.expand(basis), basis)
    assert {e: c for e, c in back.terms.items() if c} == {e: Fraction(c) for e, c in terms.items()}


# -- pullback validation ------------------------------------------------------


def test_validate_hurwitz_with_solved_f21(klein):
    _, basis = klein
    f = [RamifiedFunction.constant(0), 1 / z**4, -12 / z**9]
    checks = validate_pullbacks(basis, f + [None])
    assert all(c.passed for c in checks)
    # by hand: with f4 = 0 the relation leaves f21^2 = f14^3 + 1728 f6^7
    f21sq = f[2] ** 3 + 1728 * f[1] ** 7
    phi = RadicalElement.generator(2, f21sq)
    assert all(c.passed for c in validate_pullbacks(basis, f + [phi]))
    bad = validate_pullbacks(basis, f + [phi + 1])
    assert not bad[0].passed


def test_validate_all_zero(klein):
    _, basis = klein
    zero = RamifiedFunction.constant(0)
    assert all(c.passed for c in validate_pullbacks(basis, [zero] * 4))


def test_implicit_needs_relation():
    with pytest.raises(ValidationError):
        validate_pullbacks(SYM, [z, None, z])
