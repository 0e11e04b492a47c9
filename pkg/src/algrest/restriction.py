"""Spaces of algebraic restrictions of 2-forms to a quasi-homogeneous curve germ.

A 2-form has zero algebraic restriction to N when it can be written as
``alpha + d(beta)`` with ``alpha`` and ``beta`` vanishing on N.  For a germ cut
out by quasi-homogeneous generators H, the degree-d part of that subspace is
spanned by the forms ``m*H*dx_a^dx_b`` and ``d(m*H)^dx_a`` of quasi-degree d.
Everything here works one quasi-degree at a time: each graded piece is a small
exact linear algebra problem.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Optional, Sequence

from .forms import DiffForm, differential, exterior_derivative, wedge
from .germs import MultiGerm
from .linalg import Echelon, rank, solve
from .poly import Polynomial, VarSet, format_scalar, monomials_of_quasi_degree, monomials_up_to

ALL = "all"
CLOSED = "closed"
FLAVORS = (ALL, CLOSED)


class StabilizationError(RuntimeError):
    pass


class RestrictionError(ValueError):
    pass


def cap_multiplier() -> int:
    try:
        return max(1, int(os.environ.get("ALGREST_CAP_MULT", "1")))
    except ValueError:
        return 1


def _pairs(n: int) -> list:
    return list(combinations(range(n), 2))


def monomial_two_forms(v: VarSet, d: int) -> list:
    """All ``(exponents, (a, b))`` with quasi-degree d, in a fixed order."""
    out = []
    for a, b in _pairs(len(v)):
        for m in monomials_of_quasi_degree(v, d - v.weights[a] - v.weights[b]):
            out.append((m, (a, b)))
    return out


def a20_generators(g: MultiGerm, d: int) -> list:
    """Spanning set of the degree-d forms with zero algebraic restriction."""
    v = g.varset
    out = []
    for h in g.generators:
        hd = h.quasi_degree()
        for a, b in _pairs(len(v)):
            for m in monomials_of_quasi_degree(v, d - hd - v.weights[a] - v.weights[b]):
                mh = Polynomial.monomial(v, m) * h
                out.append(DiffForm(v, 2, {(a, b): mh}))
        for a in range(len(v)):
            for m in monomials_of_quasi_degree(v, d - hd - v.weights[a]):
                mh = Polynomial.monomial(v, m) * h
                out.append(wedge(differential(mh), DiffForm.dx(v, a)))
    return [f for f in out if f]


def exact_generators(v: VarSet, d: int) -> list:
    """The exact forms ``d(m*dx_a)`` of quasi-degree d, with their 1-forms."""
    out = []
    for a in range(len(v)):
        for m in monomials_of_quasi_degree(v, d - v.weights[a]):
            alpha = DiffForm(v, 1, {(a,): Polynomial.monomial(v, m)})
            da = exterior_derivative(alpha)
            if da:
                out.append((alpha, da))
    return out


def _leading_coefficient(form: DiffForm) -> Fraction:
    idx = min(form.terms)
    return form.terms[idx].sorted_terms()[0][1]


class _Piece:
    """One graded piece of the quotient."""

    def __init__(self, g: MultiGerm, d: int):
        v = g.varset
        self.degree = d
        self.columns = monomial_two_forms(v, d)
        self.index = {c: i for i, c in enumerate(self.columns)}
        rows = [self.vector(f) for f in a20_generators(g, d)]
        self.vanishing = Echelon(rows, len(self.columns))
        self.free = self.vanishing.free_columns()
        self._exact = None
        self._exact_echelon = None
        self.germ = g

    @property
    def dim(self) -> int:
        return len(self.free)

    def vector(self, form: DiffForm) -> list:
        vec = [Fraction(0)] * len(self.columns)
        for (exps, idx), c in form.items():
            key = (exps, idx)
            if key not in self.index:
                raise RestrictionError(f"term of degree {form.term_qdeg(exps, idx)} in degree-{self.degree} piece")
            vec[self.index[key]] += c
        return vec

    def quotient(self, form: DiffForm) -> list:
        """Coordinates of the class of a degree-d form over the free columns."""
        if not self.free:
            return []
        red = self.vanishing.reduce(self.vector(form))
        return [red[c] for c in self.free]

    def column_form(self, col: int) -> DiffForm:
        exps, idx = self.columns[col]
        v = self.germ.varset
        return DiffForm(v, 2, {idx: Polynomial.monomial(v, exps)})

    def exact(self) -> list:
        """Pairs (1-form, quotient vector of its differential) in degree d."""
        if self._exact is None:
            self._exact = [(alpha, self.quotient(da)) for alpha, da in exact_generators(self.germ.varset, self.degree)]
        return self._exact

    def closed_echelon(self) -> Echelon:
        if self._exact_echelon is None:
            self._exact_echelon = Echelon([q for _, q in self.exact()], self.dim)
        return self._exact_echelon


@dataclass(frozen=True)
class BasisEntry:
    degree: int
    form: DiffForm
    qvec: tuple
    name: str = ""

    def label(self, i: int) -> str:
        return self.name or f"r{i + 1}"


class GradedBasis:
    """Basis of ``[Lambda^2]_N`` (flavor ``all``) or ``[Z^2]_N`` (``closed``)."""

    def __init__(self, germ: MultiGerm, flavor: str = CLOSED, degree_cap: Optional[int] = None):
        if flavor not in FLAVORS:
            raise ValueError(f"unknown flavor {flavor!r}")
        self.germ = germ
        self.flavor = flavor
        self.varset = germ.varset
        gen_deg = max((h.quasi_degree() for h in germ.generators), default=0)
        self.window = gen_deg + sum(self.varset.weights)
        self.hard_cap = 10 * self.window * cap_multiplier()
        self._pieces = {}
        self.entries = []
        empty_run = 0
        d = 0
        limit = self.hard_cap if degree_cap is None else min(degree_cap, self.hard_cap)
        while True:
            piece = self.piece(d)
            new = self._initial_entries(piece)
            self.entries.extend(new)
            empty_run = 0 if piece.dim else empty_run + 1
            if empty_run >= self.window:
                self.stable_from = d - self.window + 1
                break
            if d >= limit:
                if degree_cap is None:
                    raise StabilizationError(f"quotient did not stabilize below degree {self.hard_cap}")
                self.stable_from = d + 1
                break
            d += 1
        self.computed_to = d
        self._reindex()

    # construction

    def piece(self, d: int) -> _Piece:
        if d not in self._pieces:
            self._pieces[d] = _Piece(self.germ, d)
        return self._pieces[d]

    def _initial_entries(self, piece: _Piece) -> list:
        if not piece.dim:
            return []
        if self.flavor == ALL:
            out = []
            for k, col in enumerate(piece.free):
                q = tuple(Fraction(int(j == k)) for j in range(piece.dim))
                out.append(BasisEntry(piece.degree, piece.column_form(col), q))
            return out
        chosen, qs = [], []
        for alpha, q in piece.exact():
            if any(q) and rank(qs + [q]) > len(qs):
                qs.append(q)
                form = exterior_derivative(alpha)
                lead = _leading_coefficient(form)
                chosen.append(BasisEntry(piece.degree, form * (1 / lead), tuple(x / lead for x in q)))
        return chosen

    def _reindex(self):
        self.by_degree = {}
        for i, e in enumerate(self.entries):
            self.by_degree.setdefault(e.degree, []).append(i)

    # inspection

    @property
    def dim(self) -> int:
        return len(self.entries)

    @property
    def degrees(self) -> list:
        return sorted(self.by_degree)

    @property
    def top_degree(self) -> int:
        return max(self.by_degree, default=0)

    @property
    def stabilization_degree(self) -> int:
        return self.stable_from

    def names(self) -> list:
        return [e.label(i) for i, e in enumerate(self.entries)]

    def representatives(self) -> list:
        return [e.form for e in self.entries]

    def subspace(self, d: int) -> Echelon:
        """The degree-d part of this flavor inside the all-forms quotient."""
        piece = self.piece(d)
        if self.flavor == ALL:
            return Echelon([[int(i == j) for j in range(piece.dim)] for i in range(piece.dim)], piece.dim)
        return piece.closed_echelon()

    def with_representatives(self, forms: Sequence[DiffForm], names: Sequence[str] = ()) -> "GradedBasis":
        """Same space, basis given by the listed forms (in that order)."""
        names = list(names) or [""] * len(forms)
        if len(forms) != self.dim:
            raise RestrictionError(f"expected {self.dim} forms, got {len(forms)}")
        entries = []
        for f, name in zip(forms, names):
            d = f.quasi_degree()
            if d is None:
                raise RestrictionError(f"representative {name or f} is not quasi-homogeneous")
            q = self.piece(d).quotient(f)
            if not any(q) or not self.subspace(d).contains(q):
                raise RestrictionError(f"representative {name or f} does not lie in the {self.flavor} space")
            entries.append(BasisEntry(d, f, tuple(q), name))
        new = object.__new__(GradedBasis)
        new.__dict__.update(self.__dict__)
        new.entries = entries
        new._reindex()
        for d in set(self.by_degree) | set(new.by_degree):
            old_n = len(self.by_degree.get(d, []))
            qs = [list(entries[i].qvec) for i in new.by_degree.get(d, [])]
            if len(qs) != old_n or rank(qs) != old_n:
                raise RestrictionError(f"representatives do not form a basis in degree {d}")
        return new

    # restriction

    def class_vector(self, form: DiffForm, d: int) -> list:
        """Quotient coordinates (over the all-forms free columns) of the degree-d part."""
        return self.piece(d).quotient(form.graded_component(d))

    def coordinates_in_degree(self, q: Sequence, d: int) -> list:
        idx = self.by_degree.get(d, [])
        if not any(q):
            return [Fraction(0)] * len(idx)
        if not idx:
            raise RestrictionError(f"nonzero class in degree {d}, where the {self.flavor} space is empty")
        m = [[self.entries[i].qvec[r] for i in idx] for r in range(len(q))]
        sol = solve(m, list(q), len(idx))
        if sol is None:
            raise RestrictionError(f"class in degree {d} is not in the {self.flavor} space (form not closed?)")
        return sol

    def restrict(self, form: DiffForm) -> "RestrictionClass":
        if form.degree != 2:
            raise RestrictionError("only 2-forms have algebraic restrictions here")
        if form.varset != self.varset:
            raise RestrictionError("form is over a different set of variables")
        coords = [Fraction(0)] * self.dim
        for d in sorted(form.quasi_degrees()):
            q = self.class_vector(form, d)
            if d not in self.by_degree:
                if any(q):
                    raise RestrictionError(f"nonzero class in degree {d} beyond the stabilized range")
                continue
            for i, c in zip(self.by_degree[d], self.coordinates_in_degree(q, d)):
                coords[i] = c
        return RestrictionClass(self, tuple(coords))

    def element(self, coords: Sequence) -> "RestrictionClass":
        if len(coords) != self.dim:
            raise RestrictionError(f"expected {self.dim} coordinates, got {len(coords)}")
        return RestrictionClass(self, tuple(Fraction(c) for c in coords))

    def zero(self) -> "RestrictionClass":
        return self.element([0] * self.dim)

    def __repr__(self):
        return f"GradedBasis({self.germ.name or 'germ'}, {self.flavor}, dim={self.dim})"


@dataclass(frozen=True)
class RestrictionClass:
    basis: GradedBasis
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != self.basis.dim:
            raise RestrictionError("coordinate vector length does not match the basis")

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __bool__(self):
        return not self.is_zero()

    def __add__(self, other: "RestrictionClass"):
        return RestrictionClass(self.basis, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        return RestrictionClass(self.basis, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __mul__(self, c):
        return RestrictionClass(self.basis, tuple(a * c for a in self.coords))

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, RestrictionClass) and self.basis is other.basis and self.coords == other.coords

    def __hash__(self):
        return hash((id(self.basis), self.coords))

    def support_degrees(self) -> list:
        return sorted({self.basis.entries[i].degree for i, c in enumerate(self.coords) if c})

    def graded_component(self, d: int) -> "RestrictionClass":
        return RestrictionClass(self.basis, tuple(
            c if self.basis.entries[i].degree == d else Fraction(0) for i, c in enumerate(self.coords)))

    def representative(self) -> DiffForm:
        out = DiffForm(self.basis.varset, 2)
        for c, e in zip(self.coords, self.basis.entries):
            if c:
                out = out + e.form * c
        return out

    def quotient_vector(self, d: int) -> list:
        """All-forms quotient coordinates of the degree-d part."""
        piece = self.basis.piece(d)
        out = [Fraction(0)] * piece.dim
        for i in self.basis.by_degree.get(d, []):
            c = self.coords[i]
            if c:
                out = [x + c * y for x, y in zip(out, self.basis.entries[i].qvec)]
        return out

    def __str__(self):
        parts = []
        for name, c in zip(self.basis.names(), self.coords):
            if c:
                parts.append(f"{format_scalar(c)}*{name}" if c != 1 else name)
        return "[" + " + ".join(parts) + "]" if parts else "[0]"


@lru_cache(maxsize=64)
def restriction_basis(g: MultiGerm, flavor: str = CLOSED, degree_cap: Optional[int] = None) -> GradedBasis:
    return GradedBasis(g, flavor, degree_cap)


def restrict(basis: GradedBasis, form: DiffForm) -> RestrictionClass:
    return basis.restrict(form)


def is_zero_restriction(basis: GradedBasis, form: DiffForm) -> bool:
    return basis.restrict(form).is_zero()


def restrict_to_component(g: MultiGerm, component: str, form: DiffForm, flavor: str = CLOSED) -> RestrictionClass:
    sub = g.component_germ(component)
    return restriction_basis(sub, flavor).restrict(form)


# brute-force cross-check: ungraded dense elimination up to an ordinary degree


class BruteForceQuotient:
    """Quotient computed without grading, on forms of bounded ordinary degree.

    Generators of the vanishing subspace are taken up to ordinary degree
    ``D * max(w) / min(w) + 1`` so that truncation does not cut relations
    needed by forms of degree at most D (``d(m H)`` loses one degree).
    """

    def __init__(self, g: MultiGerm, max_degree: int):
        v = g.varset
        self.germ = g
        self.max_degree = max_degree
        w = v.weights
        self.gen_degree = -(-max_degree * max(w) // min(w)) + 1
        unit = VarSet(v.names, (1,) * len(v))
        self.unit = unit
        top = self.gen_degree + 1
        self.columns = [(m, p) for p in _pairs(len(v)) for m in monomials_up_to(unit, top)]
        self.index = {c: i for i, c in enumerate(self.columns)}
        rows = []
        for h in g.generators:
            hdeg = h.ordinary_degree()
            for m in monomials_up_to(unit, max(self.gen_degree - hdeg, -1)):
                mh = Polynomial.monomial(v, m) * h
                for p in _pairs(len(v)):
                    rows.append(self.vector(DiffForm(v, 2, {p: mh})))
                dmh = differential(mh)
                for a in range(len(v)):
                    rows.append(self.vector(wedge(dmh, DiffForm.dx(v, a))))
        self.vanishing = Echelon(rows, len(self.columns))

    def vector(self, form: DiffForm) -> list:
        vec = [Fraction(0)] * len(self.columns)
        for (exps, idx), c in form.items():
            key = (exps, idx)
            if key not in self.index:
                raise RestrictionError("form exceeds the brute-force degree range")
            vec[self.index[key]] += c
        return vec

    def contains(self, form: DiffForm) -> bool:
        """Whether ``form`` has zero algebraic restriction."""
        return self.vanishing.contains(self.vector(form))

    def dimension(self, flavor: str = ALL) -> int:
        v = self.germ.varset
        if flavor == ALL:
            span = [self.vector(DiffForm(v, 2, {p: Polynomial.monomial(v, m)}))
                    for p in _pairs(len(v)) for m in monomials_up_to(self.unit, self.max_degree)]
        else:
            span = []
            for a in range(len(v)):
                for m in monomials_up_to(self.unit, self.max_degree + 1):
                    da = exterior_derivative(DiffForm(v, 1, {(a,): Polynomial.monomial(v, m)}))
                    if da:
                        span.append(self.vector(da))
        reduced = [self.vanishing.reduce(x) for x in span]
        return Echelon(reduced, len(self.columns)).rank
