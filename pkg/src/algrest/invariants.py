"""Discrete symplectic invariants computed from algebraic restrictions.

All searches run one quasi-degree at a time.  For a class ``a`` with graded
pieces ``a_d``, a 1-form ``alpha`` with ``[d alpha] = a`` may be taken
quasi-homogeneous piece by piece, and orders along quasi-homogeneous branches
never mix across degrees, so every invariant is a minimum over the support of
``a`` of a per-degree maximum.  Each per-degree maximum is decided by exact
linear feasibility.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .forms import DiffForm, exterior_derivative
from .germs import MultiGerm, TangentFrame, tangent_frame
from .linalg import solve_affine
from .poly import Polynomial, monomials_of_quasi_degree
from .restriction import ALL, CLOSED, GradedBasis, RestrictionClass, restriction_basis
from .tangent import orbit_tangent_space

INF = math.inf
NEG_INF = -math.inf


class _AlphaSpace:
    """Quasi-homogeneous 1-forms of one degree and the data needed to constrain them."""

    def __init__(self, basis: GradedBasis, d: int):
        v = basis.varset
        self.basis = basis
        self.degree = d
        self.columns = []
        for i in range(len(v)):
            for m in monomials_of_quasi_degree(v, d - v.weights[i]):
                self.columns.append((m, i))
        piece = basis.piece(d)
        qs = []
        for m, i in self.columns:
            alpha = DiffForm(v, 1, {(i,): Polynomial.monomial(v, m)})
            qs.append(piece.quotient(exterior_derivative(alpha)))
        # rows indexed by quotient coordinates
        self.q_rows = [[qs[c][r] for c in range(len(self.columns))] for r in range(piece.dim)]
        self._evals = {}

    def branch_rows(self, branch) -> dict:
        """Map (coordinate index, power of t) -> row over the columns."""
        if branch.name not in self._evals:
            rows = {}
            v = self.basis.varset
            for c, (m, i) in enumerate(self.columns):
                img = Polynomial.monomial(v, m).compose(list(branch.coords))
                for (j,), coef in img.terms.items():
                    row = rows.setdefault((i, j), [Fraction(0)] * len(self.columns))
                    row[c] = coef
            self._evals[branch.name] = rows
        return self._evals[branch.name]

    def order_rows(self, branches, k) -> list:
        """Rows forcing every coefficient to vanish to order >= k on the branches."""
        out = []
        for b in branches:
            for (i, j), row in self.branch_rows(b).items():
                if j < k:
                    out.append(row)
        return out

    def orders(self, branches) -> list:
        return sorted({j for b in branches for (_, j) in self.branch_rows(b)})

    def solve(self, target, extra_rows):
        rows = self.q_rows + extra_rows
        rhs = list(target) + [Fraction(0)] * len(extra_rows)
        return solve_affine(rows, rhs, len(self.columns))


def _spaces(basis: GradedBasis) -> dict:
    cache = basis.__dict__.setdefault("_alpha_spaces", {})
    return cache


def _alpha_space(basis: GradedBasis, d: int) -> _AlphaSpace:
    cache = _spaces(basis)
    if d not in cache:
        cache[d] = _AlphaSpace(basis, d)
    return cache[d]


def _branches(basis: GradedBasis, names) -> list:
    g = basis.germ
    if names is None:
        return list(g.branches)
    return [g.branch(n) for n in names]


def _best_order(space: _AlphaSpace, target, branches) -> float:
    """Largest k with a solution vanishing to order k on all branches."""
    return _max_feasible(lambda k: space.solve(target, space.order_rows(branches, k)) is not None,
                         space.orders(branches))


def _max_feasible(feasible, exponents) -> float:
    """Largest k with ``feasible(k)``, where feasibility only changes just past an exponent.

    ``feasible`` is monotone decreasing in k and trivially true up to the
    smallest exponent.
    """
    if feasible(INF):
        return INF
    for j in sorted(exponents):
        if not feasible(j + 1):
            return j
    return INF


def _check_class(basis: GradedBasis, a: RestrictionClass):
    if a.basis is not basis:
        raise ValueError("class belongs to a different basis")
    if basis.flavor != CLOSED:
        raise ValueError("invariants need the closed-forms basis")


def lagrangian_tangency(basis: GradedBasis, a: RestrictionClass, branches: Optional[Sequence[str]] = None):
    """Lagrangian tangency order of the given branches (default: all of them).

    The condition ``[d alpha] = a`` is imposed on the whole germ of ``basis``.
    """
    _check_class(basis, a)
    if a.is_zero():
        return INF
    brs = _branches(basis, branches)
    best = INF
    for d in a.support_degrees():
        space = _alpha_space(basis, d)
        best = min(best, _best_order(space, a.quotient_vector(d), brs))
    return best


def lagrangian_tangency_single(germ: MultiGerm, branch: str, form: DiffForm):
    """Lt of one branch, computed over the branch's own restriction space."""
    sub = germ.subgerm([branch])
    basis = restriction_basis(sub, CLOSED)
    return lagrangian_tangency(basis, basis.restrict(form))


def lagrangian_tangency_multi(basis: GradedBasis, branches: Sequence[str], a: RestrictionClass):
    return lagrangian_tangency(basis, a, branches)


def relative_lt(basis: GradedBasis, a: RestrictionClass, others: Sequence[str],
                required: Mapping[str, float]):
    """Best order on ``others`` among 1-forms with exact orders ``required`` on the rest.

    Returns ``-inf`` when no 1-form with ``[d alpha] = a`` meets the required
    orders.
    """
    _check_class(basis, a)
    g = basis.germ
    others_b = [g.branch(n) for n in others]
    req = [(g.branch(n), t) for n, t in required.items()]
    support = a.support_degrees()
    candidates = set()
    for d in support:
        candidates.update(_alpha_space(basis, d).orders(others_b))

    def feasible(k) -> bool:
        spaces = {}
        for d in support:
            sp = _alpha_space(basis, d)
            rows = sp.order_rows(others_b, k)
            for b, t in req:
                rows = rows + sp.order_rows([b], t)
            sol = sp.solve(a.quotient_vector(d), rows)
            if sol is None:
                return False
            spaces[d] = (sp, sol)
        for b, t in req:
            if t == INF:
                continue
            if not _order_attained(basis, a, b, t, k, others_b, req, spaces):
                return False
        return True

    if not feasible(0):
        return NEG_INF
    return _max_feasible(feasible, candidates)


def _order_attained(basis, a, branch, t, k, others_b, req, spaces) -> bool:
    """Whether some admissible 1-form has a nonzero t^t coefficient on ``branch``."""
    v = basis.varset
    top = int((t + 1) * max(v.weights)) + max(v.weights)
    for d in range(1, top + 1):
        if d in spaces:
            sp, sol = spaces[d]
        else:
            sp = _alpha_space(basis, d)
            rows = sp.order_rows(others_b, k)
            for b, tt in req:
                rows = rows + sp.order_rows([b], tt)
            sol = sp.solve([Fraction(0)] * len(sp.q_rows), rows)
            if sol is None:
                continue
        x0, kernel = sol
        for (i, j), row in sp.branch_rows(branch).items():
            if j != t:
                continue
            if any(r * x for r, x in zip(row, x0)):
                return True
            for vec in kernel:
                if any(r * x for r, x in zip(row, vec)):
                    return True
    return False


def index_of_isotropy(basis: GradedBasis, a: RestrictionClass):
    """Largest vanishing order at 0 of a closed 2-form representing ``a``."""
    _check_class(basis, a)
    if a.is_zero():
        return INF
    best = INF
    for d in a.support_degrees():
        best = min(best, _best_isotropy(basis, d, a.quotient_vector(d)))
    return best


def _best_isotropy(basis: GradedBasis, d: int, target) -> int:
    space = _alpha_space(basis, d)
    v = basis.varset
    # coefficient rows of d(alpha) grouped by ordinary degree of the monomial
    by_order = {}
    dforms = [exterior_derivative(DiffForm(v, 1, {(i,): Polynomial.monomial(v, m)})) for m, i in space.columns]
    keys = {}
    for c, f in enumerate(dforms):
        for (exps, idx), coef in f.items():
            keys.setdefault((exps, idx), {})[c] = coef
    for (exps, idx), entries in keys.items():
        row = [Fraction(0)] * len(space.columns)
        for c, coef in entries.items():
            row[c] = coef
        by_order.setdefault(sum(exps), []).append(row)
    rows = []
    for order in sorted(by_order):
        rows = rows + by_order[order]
        if space.solve(target, rows) is None:
            return order
    return INF


def symplectic_multiplicity(basis: GradedBasis, a: RestrictionClass, degree_bound: Optional[int] = None) -> int:
    _check_class(basis, a)
    return basis.dim - orbit_tangent_space(basis, a, degree_bound).rank


# geometric report


def _lie_value(omega: DiffForm, v, x, y) -> Fraction:
    """Value at 0 of the derivative of omega along constant v, evaluated on (x, y)."""
    total = Fraction(0)
    for (p, q), coef in omega.terms.items():
        dv = sum((vk * coef.derivative(k).constant_term() for k, vk in enumerate(v) if vk), Fraction(0))
        if dv:
            total += dv * (x[p] * y[q] - x[q] * y[p])
    return total


def _value(omega: DiffForm, x, y) -> Fraction:
    total = Fraction(0)
    for (p, q), coef in omega.terms.items():
        c = coef.constant_term()
        if c:
            total += c * (x[p] * y[q] - x[q] * y[p])
    return total


@dataclass
class GeometricReport:
    frame: TangentFrame
    plane_isotropic: dict  # (i, j) -> bool, i < j in {1, 2, 3}
    condition_I: bool
    condition_II: Optional[bool]
    condition_III: Optional[bool]
    condition_IV: Optional[bool]
    lagrangian_components: dict  # component -> bool
    lagrangian_germ: bool

    def conditions(self) -> dict:
        return {"I": self.condition_I, "II": self.condition_II,
                "III": self.condition_III, "IV": self.condition_IV}


def geometric_report(g: MultiGerm, omega: DiffForm, groups: Optional[Sequence[str]] = None) -> GeometricReport:
    frame = tangent_frame(g, groups)
    v1, v2, v3 = frame.lines
    vs = {1: v1, 2: v2, 3: v3}
    planes = {(i, j): _value(omega, vs[i], vs[j]) == 0 for i, j in ((1, 2), (1, 3), (2, 3))}
    cond_I = not omega.value_at_origin()
    II = III = IV = None
    if cond_I:
        II = _lie_value(omega, v3, v1, v2) == 0
        III = _lie_value(omega, v1, v3, v1) == 0 and _lie_value(omega, v2, v3, v2) == 0
        IV = _lie_value(omega, v1, v3, v2) == _lie_value(omega, v2, v3, v1)
    comps = {}
    for name in (groups or list(g.components)[:2]):
        if name in g.component_ideals:
            comps[name] = restriction_basis(g.component_germ(name), ALL).restrict(omega).is_zero()
    whole = restriction_basis(g, ALL).restrict(omega).is_zero()
    return GeometricReport(frame, planes, cond_I, II, III, IV, comps, whole)


# combined report


@dataclass
class InvariantReport:
    lt: float
    ind: float
    mu: Optional[int]
    component_lt: dict = field(default_factory=dict)
    component_ind: dict = field(default_factory=dict)
    relative: dict = field(default_factory=dict)
    geometry: Optional[GeometricReport] = None

    @property
    def lt_near(self):
        return max(self.component_lt.values()) if self.component_lt else None

    @property
    def lt_far(self):
        return min(self.component_lt.values()) if self.component_lt else None

    @property
    def ind_near(self):
        return max(self.component_ind.values()) if self.component_ind else None

    @property
    def ind_far(self):
        return min(self.component_ind.values()) if self.component_ind else None


def component_invariants(g: MultiGerm, component: str, omega: DiffForm) -> tuple:
    """(Lt, ind) of one component, over the component's own restriction space."""
    basis = restriction_basis(g.component_germ(component), CLOSED)
    a = basis.restrict(omega)
    return lagrangian_tangency(basis, a), index_of_isotropy(basis, a)


def invariant_report(basis: GradedBasis, omega: DiffForm, components: Sequence[str] = (),
                     relative: Optional[Mapping] = None, with_mu: bool = True,
                     with_geometry: bool = False, frame_groups: Optional[Sequence[str]] = None) -> InvariantReport:
    """All invariants of ``omega`` on the germ of ``basis``.

    ``relative`` maps a label to ``(others, {branch: order})``; an order of
    ``None`` means "the branch's own Lt".
    """
    g = basis.germ
    a = basis.restrict(omega)
    rep = InvariantReport(lagrangian_tangency(basis, a), index_of_isotropy(basis, a),
                          symplectic_multiplicity(basis, a) if with_mu else None)
    for comp in components:
        rep.component_lt[comp], rep.component_ind[comp] = component_invariants(g, comp, omega)
    for label, (others, req) in (relative or {}).items():
        resolved = {}
        for b, t in req.items():
            if t is None:
                t = lagrangian_tangency_single(g, b, omega)
            resolved[b] = t
        rep.relative[label] = relative_lt(basis, a, others, resolved)
    if with_geometry:
        rep.geometry = geometric_report(g, omega, frame_groups)
    return rep
