from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schwarzode.algebra import MPoly, mpoly_partial

from conftest import PROPERTY_CASES

X1, X2, X3 = MPoly.gens(3)
F4 = X1**3 * X2 + X2**3 * X3 + X3**3 * X1


def test_partial_of_quartic():
    assert mpoly_partial(F4, 1) == 3 * X1**2 * X2 + X3**3


def test_partial_trivia():
    assert mpoly_partial(MPoly.constant(3, 5), 2).is_zero()
    assert mpoly_partial(X1 * X2, 2) == X1
    with pytest.raises(IndexError):
        mpoly_partial(X1, 4)


def test_exact_div():
    p = (X1 + X2) * (X1 - 2 * X3)
    assert p.exact_div(X1 + X2) == X1 - 2 * X3
    with pytest.raises(ArithmeticError):
        p.exact_div(X1 + X3)


def test_compose_and_evaluate():
    p = X1**2 + X2
    q = p.compose([X2 + 1, X3, X1])
    assert q == (X2 + 1) ** 2 + X3
    assert p.evaluate([Fraction(1, 2), 3, 0]) == Fraction(13, 4)


def test_homogeneity():
    assert F4.is_homogeneous() and F4.total_degree() == 4
    assert not (F4 + X1).is_homogeneous()


terms = st.dictionaries(
    st.tuples(*(st.integers(0, 3) for _ in range(3))),
    st.fractions(min_value=-9, max_value=9, max_denominator=4),
    max_size=5,
)
polys = terms.map(lambda t: MPoly(3, t))


@settings(max_examples=PROPERTY_CASES)
@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    zero, one = MPoly(3), MPoly.constant(3, 1)
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + zero == a and a * one == a
    assert (a - a).is_zero()


@settings(max_examples=PROPERTY_CASES)
@given(polys, polys, st.integers(0, 2))
def test_leibniz(a, b, i):
    assert (a * b).partial(i) == a.partial(i) * b + a * b.partial(i)


@settings(max_examples=200)
@given(polys, polys, st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=3), min_size=3, max_size=3))
def test_evaluation_is_a_homomorphism(a, b, x):
    assert (a * b).evaluate(x) == a.evaluate(x) * b.evaluate(x)
    assert (a + b).evaluate(x) == a.evaluate(x) + b.evaluate(x)
