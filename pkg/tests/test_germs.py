from fractions import Fraction

import pytest

from algrest.germs import (
    Branch,
    GermError,
    IdealPresentation,
    MultiGerm,
    reduce_ambient,
    symplectic_pullback,
    tangent_frame,
    validate,
)
from algrest.parsing import parse_polynomial
from algrest.poly import T, VarSet
from algrest.scenario import load_scenario, shipped_scenarios

V = VarSet(("x1", "x2", "x3"), (3, 2, 2))


def t_poly(*texts):
    return [parse_polynomial(s, T) for s in texts]


def t7_germ(gens=("x1^2 + x2^3 + x3^3", "x2*x3"), b1=("t^3", "0", "-t^2"), v=V):
    branches = [Branch("B1", t_poly(*b1)), Branch("B2", t_poly("t^3", "-t^2", "0"))]
    ideal = IdealPresentation(v, [parse_polynomial(g, v) for g in gens])
    return MultiGerm(v, ideal, branches, {"B1": ["B1"], "B2": ["B2"]})


def test_t7_is_valid():
    rep = validate(t7_germ())
    assert rep.valid and not rep.warnings


def test_generator_not_vanishing_is_invalid():
    rep = validate(t7_germ(gens=("x1^2 + x2^3 + x3^3", "x2 + x3")))
    assert not rep.valid
    with pytest.raises(GermError):
        rep.raise_if_invalid()


def test_non_monomial_branch_warns():
    # a branch that is not a monomial curve: the ideal is taken as given, but
    # the germ is flagged
    v = VarSet(("x1", "x2"), (2, 3))
    g = MultiGerm(v, IdealPresentation(v, []), [Branch("C", t_poly("t^2 + t^3", "t^3"))])
    rep = validate(g)
    assert rep.valid and rep.warnings


def test_branch_must_pass_through_origin():
    with pytest.raises(GermError):
        Branch("C", t_poly("1 + t", "t^2"))


def test_reduce_ambient():
    v6 = VarSet(("x1", "x2", "x3", "x4", "x5", "x6"), (3, 2, 2, 3, 2, 2))
    branches = [Branch("B1", t_poly("t^3", "0", "-t^2", "0", "0", "0")),
                 Branch("B2", t_poly("t^3", "-t^2", "0", "0", "0", "0"))]
    ideal = IdealPresentation(v6, [parse_polynomial(s, v6) for s in ("x1^2 + x2^3 + x3^3", "x2*x3")])
    g = MultiGerm(v6, ideal, branches, {"B1": ["B1"], "B2": ["B2"]})
    small, _ = reduce_ambient(g, ["x4", "x5", "x6"])
    assert small.varset.names == ("x1", "x2", "x3")
    same, _ = reduce_ambient(small, [])
    assert same.varset == small.varset
    with pytest.raises(GermError):
        reduce_ambient(g, ["x3"])


def test_every_shipped_scenario_validates():
    names = shipped_scenarios()
    assert {"t7", "t8", "a2", "a3", "a4", "a5", "d4", "d5", "d6", "e6", "sg3711"} <= set(names)
    for n in names:
        sc = load_scenario(n)
        assert validate(sc.full_germ).valid, n


def test_t7_tangent_frame():
    fr = tangent_frame(load_scenario("t7").germ, ["B1", "B2"])
    assert [list(map(int, l)) for l in fr.lines] == [[0, 0, 1], [0, 1, 0], [1, 0, 0]]


def test_t7_frame_is_equivariant_under_relabeling():
    # swap the roles of x1 and x3 in the variable order
    v = VarSet(("x3", "x2", "x1"), (2, 2, 3))
    branches = [Branch("B1", t_poly("-t^2", "0", "t^3")), Branch("B2", t_poly("0", "-t^2", "t^3"))]
    ideal = IdealPresentation(v, [parse_polynomial(s, v) for s in ("x1^2 + x2^3 + x3^3", "x2*x3")])
    g = MultiGerm(v, ideal, branches, {"B1": ["B1"], "B2": ["B2"]})
    fr = tangent_frame(g, ["B1", "B2"])
    assert [list(map(int, l)) for l in fr.lines] == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_t8_tangent_frame():
    sc = load_scenario("t8")
    fr = tangent_frame(sc.germ, ["C1", "C2"])
    from algrest.linalg import rank

    assert rank([list(l) for l in fr.lines]) == 3
    # C1 = (t^3, -t^2, 0) is tangent to x2, C2 to x3
    assert [int(x != 0) for x in fr.lines[0]] == [0, 1, 0]
    assert [int(x != 0) for x in fr.lines[1]] == [0, 0, 1]


def test_symplectic_pullback_reproduces_the_branch_images():
    # p1 = x1, q1 = x2 on A2 = (t^2, t^3): the form is dx1^dx2
    sc = load_scenario("a2")
    g = sc.germ
    w = symplectic_pullback(g, {"C": t_poly("t^2", "0", "t^3", "0")})
    assert w.coefficient(0, 1) == g.varset.zero()
    w = symplectic_pullback(g, {"C": t_poly("t^2", "t^3", "t^3", "0")})
    assert w.coefficient(0, 1).constant_term() == Fraction(1)
