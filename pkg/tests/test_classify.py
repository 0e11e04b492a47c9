from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from algrest.classify import (
    T7_UNLISTED,
    T8_SIGNATURES,
    AmbiguousSignature,
    ClassificationError,
    E6_ROWS,
    a_k_rows,
    classify_by_invariants,
    classify_t7,
    classify_t8,
    d_k_rows,
    format_value,
    moduli_report,
    normalize_t7,
    realizable_dimensions_t7,
    t7_moduli_report,
    t7_swap,
)
from algrest.scenario import load_scenario
from algrest.tables import T8_FORMS

coords7 = st.lists(st.sampled_from([0, 0, 1, -1, 2, -3, Fraction(1, 2)]), min_size=7, max_size=7)


@pytest.mark.parametrize("c, name", [
    ((1, 2, 3, 0, 0, 0, 0), "T7^0"),
    ((0, 1, 0, 0, 4, 0, 0), "T7^1"),
    ((1, 0, 0, 1, 2, 0, 0), "T7^2"),
    ((0, 0, 0, 1, 5, 7, 0), "T7^3"),
    ((2, 0, 0, 0, 0, 3, 1), "T7^4"),
    ((0, 0, 0, 0, 0, 3, 1), "T7^5"),
    ((0, 0, 0, 0, 0, 0, 4), "T7^6"),
    ((0, 0, 0, 0, 0, 0, 0), "T7^7"),
    ((0, 1, 1, 0, 0, 0, 0), T7_UNLISTED),
])
def test_t7_examples(c, name):
    label = classify_t7(c)
    assert label.name == name
    if name == T7_UNLISTED:
        assert label.notes


def test_t7_moduli_values():
    nf = normalize_t7([16, 1, 1, 0, 0, 0, 0])
    assert nf.moduli == {"c1": Fraction(1, 32), "c2": Fraction(1, 32)}
    nf = normalize_t7([0, 0, 0, 0, 0, 0, 5])
    assert nf.coords[6] == 1 and nf.moduli == {}
    nf = normalize_t7([0, 0, 0, 2, 4, 6, 0])
    assert nf.coords[3:6] == [1, 2, 3]


def test_t7_irrational_modulus_stays_symbolic():
    nf = normalize_t7([2, 1, 1, 0, 0, 0, 0])
    a = nf.moduli["c1"]
    assert not isinstance(a, Fraction)
    assert abs(float(a) - 2 ** -1.25) < 1e-12
    assert "^" in format_value(a)


def test_t7_needs_seven_coordinates():
    with pytest.raises(ClassificationError):
        classify_t7([1, 2, 3])


def test_subcases():
    assert classify_t7([0, 1, 0, 0, 4, 0, 0]).subcase == "c1=0, c2!=0"
    assert classify_t7([1, 1, 0, 0, 0, 0, 0]).subcase == "c1!=0, c2=0"
    assert classify_t7([0, 0, 0, 1, 5, 7, 0]).subcase == "c1!=0"
    assert classify_t7([0, 0, 0, 0, 5, 7, 0]).subcase == "c1=0"


@settings(max_examples=200, deadline=None)
@given(coords7)
def test_swap_preserves_class(c):
    assert classify_t7(c).name == classify_t7(t7_swap(c)).name


@settings(max_examples=200, deadline=None)
@given(coords7, st.sampled_from([2, 3, Fraction(1, 2)]))
def test_scaling_preserves_class_and_moduli(c, s):
    degrees = (4, 5, 5, 7, 7, 7, 9)
    d = [x * s ** k for x, k in zip(c, degrees)]
    a, b = classify_t7(c), classify_t7(d)
    assert a.name == b.name
    if a.name != T7_UNLISTED:
        for k in a.moduli:
            assert abs(float(a.moduli[k]) - float(b.moduli[k])) < 1e-9


def test_realizable_dimensions():
    assert 4 in realizable_dimensions_t7("T7^0")
    assert 4 not in realizable_dimensions_t7("T7^3")
    assert 6 in realizable_dimensions_t7("T7^3")
    assert 5 not in realizable_dimensions_t7("T7^7")
    with pytest.raises(ClassificationError):
        realizable_dimensions_t7("T7^9")


def test_moduli_report(t7):
    b = t7.basis()
    a = b.element([3, 1, 7, 0, 0, 0, 0])
    assert moduli_report(b, a, [0, 2]) == [0, 2]
    assert moduli_report(b, a, [3, 4]) == []
    assert t7_moduli_report(b, a) == ["theta2", "theta3"]


@pytest.mark.parametrize("i", range(len(T8_SIGNATURES)))
def test_t8_forms(t8, i):
    name, subcase, _, _ = T8_SIGNATURES[i]
    b = t8.basis()
    a = t8.restriction(T8_FORMS[i])
    twins = [r for r in T8_SIGNATURES if r[2] == T8_SIGNATURES[i][2] and r[3] == T8_SIGNATURES[i][3]]
    if len(twins) > 1:
        with pytest.raises(AmbiguousSignature) as exc:
            classify_t8(b, a)
        assert (name, subcase) in exc.value.candidates
    else:
        label = classify_t8(b, a)
        assert (label.name, label.subcase) == (name, subcase)


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_a_k(k):
    sc = load_scenario(f"a{k}")
    b = sc.basis()
    for row in a_k_rows(k):
        assert classify_by_invariants("A", b, sc.restriction(row.form), k).name == row.name


@pytest.mark.parametrize("k", [4, 5, 6])
def test_d_k(k):
    sc = load_scenario(f"d{k}")
    b = sc.basis()
    for row in d_k_rows(k):
        label = classify_by_invariants("D", b, sc.restriction(row.form), k)
        if k == 4 and row.name == "D4^2":
            assert label.name == "D4^1,±" and label.notes
        elif row.name.endswith((",+", ",-")):
            assert label.name == row.name[:-2] + ",±"
        else:
            assert label.name == row.name


def test_e6():
    sc = load_scenario("e6")
    b = sc.basis()
    for row in E6_ROWS:
        label = classify_by_invariants("E6", b, sc.restriction(row.form))
        assert label.name in (row.name, row.name[:-2] + ",±")


def test_family_errors(t7):
    b = t7.basis()
    with pytest.raises(ClassificationError):
        classify_by_invariants("A", b, b.zero())
    with pytest.raises(ClassificationError):
        classify_by_invariants("Z", b, b.zero())
