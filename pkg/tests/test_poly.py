from fractions import Fraction

import pytest
from hypothesis import given, settings

from algrest.parsing import ParseError, parse_polynomial
from algrest.poly import (
    T,
    Polynomial,
    VarSet,
    format_polynomial,
    monomials_of_quasi_degree,
    substitute_branch,
    vanishing_order,
)

from strategies import T7_VARS, polynomials

V = T7_VARS
H1 = parse_polynomial("x1^2 + x2^3 + x3^3", V)
H2 = parse_polynomial("x2*x3", V)
B1 = [parse_polynomial(s, T) for s in ("t^3", "0", "-t^2")]


def test_quasi_degree_of_generators():
    assert H1.quasi_degree() == 6 and H2.quasi_degree() == 4


def test_graded_components():
    assert H1.graded_component(6) == H1
    assert H1.graded_component(4).is_zero()
    v = VarSet(("x1", "x2"), (3, 2))
    assert parse_polynomial("x1 + x2^2", v).graded_component(4) == parse_polynomial("x2^2", v)


def test_monomials_of_quasi_degree():
    assert sorted(monomials_of_quasi_degree(V, 4)) == sorted([(0, 2, 0), (0, 1, 1), (0, 0, 2)])
    assert monomials_of_quasi_degree(V, 0) == [(0, 0, 0)]
    assert sorted(monomials_of_quasi_degree(V, 6)) == sorted([(2, 0, 0), (0, 3, 0), (0, 2, 1), (0, 1, 2), (0, 0, 3)])


def test_monomials_match_brute_enumeration():
    for d in range(0, 13):
        brute = [(a, b, c) for a in range(d + 1) for b in range(d + 1) for c in range(d + 1)
                 if 3 * a + 2 * b + 2 * c == d]
        assert sorted(monomials_of_quasi_degree(V, d)) == sorted(brute)


def test_substitute_branch():
    assert substitute_branch(H1, B1).is_zero()
    assert substitute_branch(H2, B1).is_zero()
    assert substitute_branch(V.var(0), B1) == parse_polynomial("t^3", T)


def test_vanishing_order():
    assert vanishing_order(parse_polynomial("t^3 + t^7", T)) == 3
    assert vanishing_order(T.zero()) == float("inf")


def test_parse_and_format():
    p = parse_polynomial("3/2*x1^2*x3 - x2 + 1/3", V)
    assert p.coefficient((2, 0, 1)) == Fraction(3, 2)
    assert parse_polynomial(format_polynomial(p), V) == p
    with pytest.raises(ParseError):
        parse_polynomial("x1^", V)
    with pytest.raises(ParseError):
        parse_polynomial("x9", V)


def test_varset_validation():
    with pytest.raises(ValueError):
        VarSet(("x", "x"), (1, 1))
    with pytest.raises(ValueError):
        VarSet(("x",), (0,))


@settings(max_examples=50, deadline=None)
@given(polynomials(), polynomials(), polynomials())
def test_ring_axioms(p, q, r):
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p + q == q + p and p * q == q * p
    assert (p - p).is_zero()


@settings(max_examples=50, deadline=None)
@given(polynomials(), polynomials())
def test_substitution_is_a_homomorphism(p, q):
    assert substitute_branch(p * q, B1) == substitute_branch(p, B1) * substitute_branch(q, B1)
    assert substitute_branch(p + q, B1) == substitute_branch(p, B1) + substitute_branch(q, B1)


@settings(max_examples=50, deadline=None)
@given(polynomials())
def test_graded_components_sum_to_polynomial(p):
    total = V.zero()
    for d in p.quasi_degrees():
        total = total + p.graded_component(d)
    assert total == p


@settings(max_examples=30, deadline=None)
@given(polynomials())
def test_format_round_trip(p):
    assert parse_polynomial(format_polynomial(p), V) == p
