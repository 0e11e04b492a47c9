"""Recompute the stored invariant tables and diff them against frozen goldens.

Every table is a list of rows; each row carries the computed cells and the
golden cells.  A golden of ``None`` marks a cell that is shown but not
checked (no golden value exists for it).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .classify import (
    E6_ROWS,
    T7_PARAMETERS,
    T8_SIGNATURES,
    a_k_rows,
    classify_t7,
    d_k_rows,
    format_value,
    moduli_report,
)
from .invariants import (
    INF,
    component_invariants,
    index_of_isotropy,
    invariant_report,
    lagrangian_tangency,
    symplectic_multiplicity,
)
from .restriction import ALL, CLOSED
from .scenario import load_scenario
from .tangent import action_table, euler_field

I = INF


class TableError(KeyError):
    pass


@dataclass
class Row:
    label: str
    computed: list
    expected: list
    expected_label: Optional[str] = None

    def mismatches(self, columns, label_column: str = "row") -> list:
        out = []
        if self.expected_label is not None and self.label != self.expected_label:
            out.append((label_column, self.label, self.expected_label))
        for col, got, want in zip(columns, self.computed, self.expected):
            if want is not None and not _same(got, want):
                out.append((col, got, want))
        return out


@dataclass
class TableResult:
    table_id: str
    columns: list
    label_column: str = "row"
    rows: list = field(default_factory=list)
    provenance: dict = field(default_factory=dict)  # (row label, column) -> note

    def diffs(self) -> list:
        """(row, column, computed, expected) for every mismatching cell."""
        return [(r.label, c, got, want) for r in self.rows for c, got, want in r.mismatches(self.columns, self.label_column)]

    @property
    def passed(self) -> bool:
        return not self.diffs()

    def checked_cells(self) -> int:
        labels = sum(r.expected_label is not None for r in self.rows)
        return labels + sum(want is not None for r in self.rows for want in r.expected)


def _same(got, want) -> bool:
    if isinstance(want, float) and math.isinf(want):
        return isinstance(got, float) and got == want
    if isinstance(want, bool) or isinstance(got, bool):
        return got is want
    return got == want


def format_cell(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, (int, float, Fraction)):
        return format_value(x)
    return str(x)


# A_k, D_k, E6, semigroup


def _a_k() -> TableResult:
    res = TableResult("A_k", ["Lt", "ind"], label_column="class")
    for k in (2, 3, 4, 5):
        sc = load_scenario(f"a{k}")
        b = sc.basis()
        for row in a_k_rows(k):
            a = sc.restriction(row.form)
            res.rows.append(Row(row.name, [lagrangian_tangency(b, a), index_of_isotropy(b, a)], list(row.values)))
    return res


def _d_k() -> TableResult:
    res = TableResult("D_k", ["Lt", "Lt(C2)", "ind", "ind2"], label_column="class")
    for k in (4, 5, 6):
        sc = load_scenario(f"d{k}")
        b = sc.basis()
        for row in d_k_rows(k):
            w = sc.form(row.form)
            a = b.restrict(w)
            lt2, ind2 = component_invariants(b.germ, "C2", w)
            label = row.name + (f" [{row.subcase}]" if row.subcase else "")
            res.rows.append(Row(label, [lagrangian_tangency(b, a), lt2, index_of_isotropy(b, a), ind2],
                                list(row.values)))
    return res


def _e6() -> TableResult:
    res = TableResult("E6", ["Lt", "ind", "mu"], label_column="class")
    sc = load_scenario("e6")
    b = sc.basis()
    for row in E6_ROWS:
        a = sc.restriction(row.form)
        res.rows.append(Row(row.name, [lagrangian_tangency(b, a), index_of_isotropy(b, a),
                                       symplectic_multiplicity(b, a)], list(row.values)))
    return res


SEMIGROUP_ROWS = [("(1)", "class1", (10, 1)), ("(2)", "class2", (11, 0)), ("(3)", "class3", (10, 0))]


def _semigroup() -> TableResult:
    res = TableResult("semigroup-3-7-11", ["Lt", "ind"], label_column="class")
    sc = load_scenario("sg3711")
    b = sc.basis()
    for label, form, want in SEMIGROUP_ROWS:
        a = sc.restriction(form)
        res.rows.append(Row(label, [lagrangian_tangency(b, a), index_of_isotropy(b, a)], list(want)))
    return res


# T8

T8_FORMS = [
    "t8_0", "t8_1_2", "t8_1_2_c2zero", "t8_1_2_c2c3zero", "t8_1_3", "t8_2_3", "t8_2_3_c2zero",
    "t8_2_3_c2c3zero", "t8_2_gt3", "t8_2_gt3_c2zero", "t8_3_0", "t8_3_0_c2zero", "t8_3_0_c1zero",
    "t8_5_0", "t8_3_1", "t8_3_1_c2zero", "t8_4", "t8_4_c1zero", "t8_4_c2zero", "t8_6_1", "t8_5_1",
    "t8_5_1_czero", "t8_6_2", "t8_7", "t8_8",
]
# rows of the first table are the classes with a non-isotropic tangent 3-space
T8_FIRST_TABLE = 14

# relative orders with an independent golden value; the remaining ones were computed once,
# checked by hand against the branch parameterizations and frozen
T8_RELATIVE_STATED = {("T8^0", "c1*c2!=0"), ("T8^1_2", "c1=0, c2!=0"), ("T8^4", "c1=0, c2!=0"), ("T8^6,2", "")}


def _t8(part: int) -> TableResult:
    from .classify import t8_relative, t8_signature

    res = TableResult(f"t8-invariants-{part}", ["Lt", "L1", "L2", "ind", "ind1", "ind2", "Lt[C2:C1]"],
                      label_column="class")
    sc = load_scenario("t8")
    b = sc.basis()
    span = range(0, T8_FIRST_TABLE) if part == 1 else range(T8_FIRST_TABLE, len(T8_SIGNATURES))
    for i in span:
        name, subcase, sig, rel = T8_SIGNATURES[i]
        a = sc.restriction(T8_FORMS[i])
        computed = list(t8_signature(b, a))
        computed.append(t8_relative(b, a) if rel is not None else None)
        label = name + (f" [{subcase}]" if subcase else "")
        res.rows.append(Row(label, computed, list(sig) + [rel]))
        if rel is not None and (name, subcase) not in T8_RELATIVE_STATED:
            res.provenance[(label, "Lt[C2:C1]")] = "derived: no independent golden; computed once and frozen"
    return res


# T7

T7_RELATIONS = [
    ("x2*dx2^dx3", "0"),
    ("x3*dx2^dx3", "0"),
    ("x3*dx1^dx2", "x2*dx3^dx1"),
    ("x1*dx1^dx2", "0"),
    ("x1*dx1^dx3", "0"),
    ("x2^2*dx1^dx2", "x3^2*dx3^dx1"),
    ("x1^2*dx2^dx3", "0"),
    ("x3^2*dx1^dx2", "0"),
]


def _t7_relations() -> TableResult:
    res = TableResult("t7-relations", ["lhs", "rhs", "holds"], label_column="relation")
    sc = load_scenario("t7")
    b = sc.basis(ALL)
    for i, (lhs, rhs) in enumerate(T7_RELATIONS, 1):
        left = sc.parse_form(lhs)
        right = sc.parse_form(rhs) if rhs != "0" else left * 0
        holds = b.restrict(left - right).is_zero()
        res.rows.append(Row(str(i), [lhs, rhs, holds], [None, None, True]))
    return res


T7_GENERATORS = [("E", ()), ("x3*E", (2,)), ("x2*E", (1,)), ("x1*E", (0,)), ("x2^2*E", (1, 1)), ("x3^2*E", (2, 2))]
T7_ACTIONS = [
    ["4*theta1", "5*theta2", "5*theta3", "7*theta4", "7*theta5", "7*theta6", "9*theta7"],
    ["0", "7*theta4", "3*theta6", "9*theta7", "0", "0", "0"],
    ["0", "-3*theta6", "7*theta5", "0", "-9*theta7", "0", "0"],
    ["-4*theta6", "0", "0", "0", "0", "0", "0"],
    ["0", "0", "-9*theta7", "0", "0", "0", "0"],
    ["0", "9*theta7", "0", "0", "0", "0", "0"],
]


def class_text(a) -> str:
    return str(a)[1:-1]


def t7_generators(basis) -> list:
    v = basis.varset
    E = euler_field(v)
    out = []
    for _, idx in T7_GENERATORS:
        X = E
        for i in idx:
            X = X * v.var(i)
        out.append(X)
    return out


def _t7_actions() -> TableResult:
    sc = load_scenario("t7")
    b = sc.basis()
    res = TableResult("t7-actions", list(b.names()), label_column="field")
    table = action_table(b, t7_generators(b))
    for (label, _), row, want in zip(T7_GENERATORS, table, T7_ACTIONS):
        res.rows.append(Row(label, [class_text(c) for c in row], list(want)))
    return res


# sample forms of the eight normal forms and their expected cod, mu, ind
T7_CLASSIFICATION = [
    ("T7^0", "omega0", (0, 2, 0)),
    ("T7^1", "omega1", (1, 3, 0)),
    ("T7^2", "omega2", (2, 4, 0)),
    ("T7^3", "omega3", (3, 5, 1)),
    ("T7^4", "omega4", (4, 5, 0)),
    ("T7^5", "omega5", (5, 6, 1)),
    ("T7^6", "omega6", (6, 6, 2)),
    ("T7^7", "omega7", (7, 7, I)),
]


def _t7_classification() -> TableResult:
    res = TableResult("t7-classification", ["cod", "mu", "ind"], label_column="class")
    sc = load_scenario("t7")
    b = sc.basis()
    for name, form, (cod, mu, ind) in T7_CLASSIFICATION:
        a = sc.restriction(form)
        label = classify_t7(a.coords)
        positions = [i for _, i in T7_PARAMETERS.get(label.name, ())]
        m = symplectic_multiplicity(b, a)
        moduli = len(moduli_report(b, a, positions))
        res.rows.append(Row(label.name, [m - moduli, m, index_of_isotropy(b, a)], [cod, mu, ind], name))
    return res


# (class, subcase, form, (ind, ind_n, ind_f, Lt, L_n, L_f))
T7_INVARIANTS = [
    ("T7^0", "c1*c2!=0", "omega0", (0, 0, 0, 2, 3, 3)),
    ("T7^1", "c1*c2!=0", "omega1", (0, 1, 0, 2, 5, 3)),
    ("T7^1", "c1=0, c2!=0", "omega1_c1zero", (0, 1, 0, 3, 5, 3)),
    ("T7^1", "c1!=0, c2=0", "omega1_c2zero", (0, I, 0, 2, I, 3)),
    ("T7^1", "c1=0, c2=0", "omega1_both_zero", (0, I, 0, 3, I, 3)),
    ("T7^2", "c1*c2!=0", "omega2", (0, 1, 1, 2, 5, 5)),
    ("T7^2", "c1*c2=0, (c1,c2)!=(0,0)", "omega2_c2zero", (0, I, 1, 2, I, 5)),
    ("T7^3", "c1!=0", "omega3", (1, 1, 1, 5, 5, 5)),
    ("T7^3", "c1=0", "omega3_c1zero", (1, I, 1, 5, I, 5)),
    ("T7^4", "", "omega4", (0, I, I, 2, I, I)),
    ("T7^5", "", "omega5", (1, I, I, 5, I, I)),
    ("T7^6", "", "omega6", (2, I, I, 7, I, I)),
    ("T7^7", "", "omega7", (I, I, I, I, I, I)),
]


def _t7_invariants() -> TableResult:
    res = TableResult("t7-invariants", ["class", "subcase", "ind", "ind_n", "ind_f", "Lt", "L_n", "L_f"], label_column="form")
    sc = load_scenario("t7")
    b = sc.basis()
    for name, subcase, form, values in T7_INVARIANTS:
        w = sc.form(form)
        r = invariant_report(b, w, ["B1", "B2"], with_mu=False)
        label = classify_t7(b.restrict(w).coords)
        computed = [label.name, label.subcase, r.ind, r.ind_near, r.ind_far, r.lt, r.lt_near, r.lt_far]
        res.rows.append(Row(form, computed, [name, subcase] + list(values)))
    return res


# geometric conditions: (l1+l2 isotropic, number of li+l3 isotropic, I, II, III, IV,
# number of branches in a Lagrangian submanifold, germ in a Lagrangian submanifold)
T7_GEOMETRY = [
    ("omega0", (False, 0, False, None, None, None, 0, False)),
    ("omega1", (False, 1, False, None, None, None, 0, False)),
    ("omega1_c1zero", (True, 1, False, None, None, None, 0, False)),
    ("omega1_c2zero", (False, 1, False, None, None, None, 1, False)),
    ("omega1_both_zero", (True, 1, False, None, None, None, 1, False)),
    ("omega2", (False, 2, False, None, None, None, 0, False)),
    ("omega2_c2zero", (False, 2, False, None, None, None, 1, False)),
    ("omega4", (False, 2, False, None, None, None, 2, False)),
    ("omega3", (None, None, True, None, False, None, 0, False)),
    ("omega3_c1zero", (None, None, True, None, False, None, 1, False)),
    ("omega5", (None, None, True, False, True, None, 2, False)),
    ("omega6", (None, None, True, True, True, True, 2, False)),
    ("omega7", (None, None, True, True, True, True, 2, True)),
]


def _t7_geometry() -> TableResult:
    res = TableResult("t7-geometry", ["l1+l2 iso", "#li+l3 iso", "I", "II", "III", "IV", "#Lagr branches", "N Lagr"], label_column="form")
    sc = load_scenario("t7")
    for form, want in T7_GEOMETRY:
        rep = invariant_report(sc.basis(), sc.form(form), with_mu=False, with_geometry=True,
                               frame_groups=list(sc.frame)).geometry
        iso = rep.plane_isotropic
        conds = rep.conditions()
        computed = [iso[(1, 2)], int(iso[(1, 3)]) + int(iso[(2, 3)]), conds["I"], conds["II"], conds["III"],
                    conds["IV"], sum(rep.lagrangian_components.values()), rep.lagrangian_germ]
        label = classify_t7(sc.restriction(form).coords)
        res.rows.append(Row(f"{form} ({label.name})", computed, list(want)))
    return res


TABLES: dict = {
    "A_k": _a_k,
    "D_k": _d_k,
    "E6": _e6,
    "t8-invariants-1": lambda: _t8(1),
    "t8-invariants-2": lambda: _t8(2),
    "t7-relations": _t7_relations,
    "t7-actions": _t7_actions,
    "t7-classification": _t7_classification,
    "t7-invariants": _t7_invariants,
    "t7-geometry": _t7_geometry,
    "semigroup-3-7-11": _semigroup,
}


def table_ids() -> list:
    return list(TABLES)


def reproduce(table_id: str) -> TableResult:
    try:
        build: Callable[[], TableResult] = TABLES[table_id]
    except KeyError:
        raise TableError(f"unknown table {table_id!r}; choose from {', '.join(TABLES)}") from None
    return build()


def reproduce_all(ids: Optional[list] = None) -> list:
    return [reproduce(t) for t in (ids or table_ids())]
