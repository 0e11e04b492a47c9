"""Vector fields tangent to a quasi-homogeneous germ and their action on restriction classes."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence

from .forms import VectorField, exterior_derivative, interior_product
from .germs import MultiGerm
from .linalg import Echelon
from .poly import Polynomial, VarSet, format_monomial, monomials_up_to
from .restriction import GradedBasis, RestrictionClass


class NotTangentError(ValueError):
    pass


def euler_field(v: VarSet) -> VectorField:
    return VectorField(v, [v.var(i) * w for i, w in enumerate(v.weights)])


def _det(m: list) -> Polynomial:
    n = len(m)
    if n == 1:
        return m[0][0]
    out = None
    for j in range(n):
        if not m[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _det(minor) * (-1 if j % 2 else 1)
        out = term if out is None else out + term
    return out if out is not None else m[0][0].varset.zero()


def hamiltonian_field(H: Sequence[Polynomial], idx: Sequence[int]) -> VectorField:
    """Determinant field with rows (d/dx_i), grad H_1, ..., grad H_p over columns ``idx``."""
    if not H:
        raise ValueError("need at least one function")
    v = H[0].varset
    idx = list(idx)
    if len(idx) != len(H) + 1:
        raise ValueError(f"need {len(H) + 1} indices for {len(H)} functions")
    if any(a >= b for a, b in zip(idx, idx[1:])) or idx[0] < 0 or idx[-1] >= len(v):
        raise ValueError(f"indices {idx} out of range or not increasing")
    grads = [[h.derivative(i) for i in idx] for h in H]
    comps = [v.zero() for _ in range(len(v))]
    for k, i in enumerate(idx):
        minor = [row[:k] + row[k + 1:] for row in grads]
        comps[i] = _det(minor) * (-1 if k % 2 else 1)
    return VectorField(v, comps)


def is_tangent(X: VectorField, g: MultiGerm) -> bool:
    """X(H) vanishes on every branch for every generator H."""
    for h in g.generators:
        xh = X.apply(h)
        for b in g.branches:
            if xh.compose(list(b.coords)):
                return False
    return True


@dataclass
class TangentGeneratorSet:
    euler: VectorField
    monomial_multiples: list  # (exponents, field)
    hamiltonian: list  # (indices, field)
    degree_bound: int
    labels: list = field(default_factory=list)

    def fields(self) -> list:
        return [f for _, f in self.monomial_multiples] + [f for _, f in self.hamiltonian]


def hamiltonian_fields(g: MultiGerm) -> list:
    """All determinant fields of a complete intersection, keyed by index set."""
    if not g.is_complete_intersection():
        return []
    n = len(g.varset)
    p = len(g.generators)
    return [(idx, hamiltonian_field(list(g.generators), idx)) for idx in combinations(range(n), p + 1)]


def tangent_generators(g: MultiGerm, degree_bound: int) -> TangentGeneratorSet:
    v = g.varset
    E = euler_field(v)
    mults = []
    labels = []
    for m in monomials_up_to(v, degree_bound):
        X = E * Polynomial.monomial(v, m)
        mults.append((m, X))
        mono = format_monomial(v, m)
        labels.append(f"{mono}*E" if mono else "E")
    ham = hamiltonian_fields(g)
    labels += [f"X_H{tuple(i + 1 for i in idx)}" for idx, _ in ham]
    return TangentGeneratorSet(E, mults, ham, degree_bound, labels)


def lie_action(basis: GradedBasis, X: VectorField, a: RestrictionClass, check: bool = True) -> RestrictionClass:
    """Class of d(X _| rep) for a closed representative of ``a``."""
    if check and not is_tangent(X, basis.germ):
        raise NotTangentError("vector field is not tangent to the germ")
    if a.is_zero():
        return basis.zero()
    rep = a.representative()
    if not any(X.components):
        return basis.zero()
    # the action raises quasi-degree by at least the lowest degree of X
    low = _field_degree(X)
    if low is not None and min(a.support_degrees()) + low > basis.top_degree:
        return basis.zero()
    return basis.restrict(exterior_derivative(interior_product(X, rep)))


def _field_degree(X: VectorField) -> Optional[int]:
    """Smallest quasi-degree shift of the field (qdeg of X_i minus w_i)."""
    v = X.varset
    shifts = [d - v.weights[i] for i, c in enumerate(X.components) for d in c.quasi_degrees()]
    return min(shifts) if shifts else None


def action_table(basis: GradedBasis, generators: Sequence[VectorField]) -> list:
    """Rows indexed by generators, columns by basis elements."""
    cols = [basis.element([int(i == j) for j in range(basis.dim)]) for i in range(basis.dim)]
    return [[lie_action(basis, X, c) for c in cols] for X in generators]


def orbit_tangent_space(basis: GradedBasis, a: RestrictionClass,
                        degree_bound: Optional[int] = None) -> Echelon:
    """Span of the infinitesimal actions of tangent fields on ``a``."""
    if degree_bound is None:
        degree_bound = basis.stabilization_degree
    gens = tangent_generators(basis.germ, degree_bound)
    vectors = []
    low = min(a.support_degrees(), default=None)
    for m, X in gens.monomial_multiples:
        if low is None or basis.varset.qdeg(m) + low > basis.top_degree:
            continue
        vectors.append(list(lie_action(basis, X, a, check=False).coords))
    for _, X in gens.hamiltonian:
        vectors.append(list(lie_action(basis, X, a, check=False).coords))
    return Echelon(vectors, basis.dim)
