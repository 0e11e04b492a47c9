from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from algrest.linalg import DimensionError, Echelon, Matrix, kernel_basis, mat_vec, rank, row_reduce, solve

small = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def matrices(max_rows=6, max_cols=8):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def test_identity_reduces_to_itself():
    m, piv = row_reduce(Matrix.identity(3))
    assert m == Matrix.identity(3) and piv == [0, 1, 2]


def test_rank_one_example():
    m, piv = row_reduce([[2, 4], [1, 2]])
    assert m.to_rows() == [[1, 2], [0, 0]] and piv == [0]


def test_rank_trivial_cases():
    assert rank([[0, 0], [0, 0]]) == 0
    assert rank(Matrix.identity(5)) == 5


def test_rank_of_orbit_tangent_matrix():
    # actions of E, x3E, x2E, x1E, x2^2E, x3^2E on [theta1 + theta2 + theta3],
    # assembled by hand from the infinitesimal action table
    rows = [
        [4, 5, 5, 0, 0, 0, 0],
        [0, 0, 0, 7, 0, 3, 0],
        [0, 0, 0, 0, 7, -3, 0],
        [0, 0, 0, 0, 0, -4, 0],
        [0, 0, 0, 0, 0, 0, -9],
        [0, 0, 0, 0, 0, 0, 9],
    ]
    assert rank(rows) == 5


def test_solve_identity_and_infeasible():
    b = [Fraction(1, 3), 2, -7]
    assert solve(Matrix.identity(3), b) == b
    assert solve([[1], [1]], [0, 1]) is None


def test_solve_lemma_system_is_feasible():
    # homotopy system for the T7^0 reduction at c1..c5 = 1, t = 0; columns are
    # the coefficients of x3E, x2E, x1E, x2^2E, x3^2E, rows theta4..theta7
    m = [[7, 0, 0, 0, 0], [0, 7, 0, 0, 0], [3, -3, -4, 0, 0], [9, -9, 0, -9, 9]]
    x = solve(m, [1, 1, 1, 1])
    assert x is not None and mat_vec(m, x) == [1, 1, 1, 1]


def test_kernel_examples():
    assert kernel_basis(Matrix.identity(4)) == []
    (k,) = kernel_basis([[1, 1]])
    assert k[0] == -k[1] != 0


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        mat_vec([[1, 2]], [1, 2, 3])
    with pytest.raises(DimensionError):
        Matrix.from_rows([[1, 2], [3]])


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity(rows):
    ker = kernel_basis(rows)
    assert rank(rows) + len(ker) == len(rows[0])
    for v in ker:
        assert all(x == 0 for x in mat_vec(rows, v))


@settings(max_examples=60, deadline=None)
@given(matrices(), st.data())
def test_solve_iff_rank_condition(rows, data):
    b = data.draw(st.lists(small, min_size=len(rows), max_size=len(rows)))
    x = solve(rows, b)
    augmented = [r + [c] for r, c in zip(rows, b)]
    assert (x is not None) == (rank(augmented) == rank(rows))
    if x is not None:
        assert mat_vec(rows, x) == [Fraction(c) for c in b]


@settings(max_examples=40, deadline=None)
@given(matrices())
def test_reduced_form_is_row_equivalent(rows):
    red, piv = row_reduce(rows)
    assert piv == sorted(set(piv))
    # every original row lies in the span of the reduced rows and vice versa
    ech = Echelon(red.to_rows(), len(rows[0]))
    assert all(ech.contains(r) for r in rows)
    assert rank(rows + red.to_rows()) == rank(rows)


@settings(max_examples=40, deadline=None)
@given(matrices())
def test_rank_of_transpose(rows):
    assert rank(rows) == rank(Matrix.from_rows(rows).transpose())
