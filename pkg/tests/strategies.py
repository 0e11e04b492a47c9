"""Hypothesis strategies for polynomials and forms."""

from hypothesis import strategies as st

from algrest.forms import DiffForm
from algrest.poly import Polynomial, VarSet

T7_VARS = VarSet(("x1", "x2", "x3"), (3, 2, 2))
coeffs = st.fractions(min_value=-4, max_value=4, max_denominator=3)


def polynomials(v: VarSet = T7_VARS, max_exp: int = 3, max_terms: int = 4):
    term = st.tuples(st.tuples(*[st.integers(0, max_exp)] * len(v)), coeffs)

    def build(terms):
        p = v.zero()
        for exps, c in terms:
            p = p + Polynomial.monomial(v, exps, c)
        return p

    return st.lists(term, max_size=max_terms).map(build)


def forms(degree: int, v: VarSet = T7_VARS, max_exp: int = 2):
    from itertools import combinations

    idx = list(combinations(range(len(v)), degree))
    return st.lists(st.tuples(st.sampled_from(idx), polynomials(v, max_exp, 3)), max_size=3).map(
        lambda items: sum((DiffForm(v, degree, {i: p}) for i, p in items), DiffForm.zero(v, degree)))
