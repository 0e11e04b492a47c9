"""Quasi-homogeneous curve multi-germs given by parametric branches and an ideal."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .forms import DiffForm, differential, wedge
from .linalg import Echelon, kernel_basis, rank, solve_affine
from .poly import T, Polynomial, VarSet, format_polynomial, monomials_up_to


class GermError(ValueError):
    pass


@dataclass(frozen=True)
class Branch:
    name: str
    coords: tuple  # univariate Polynomials over T

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))
        for c in self.coords:
            if c.varset != T:
                raise GermError(f"branch {self.name}: coordinates must be polynomials in t")
            if c.constant_term():
                raise GermError(f"branch {self.name} does not pass through the origin")
        if not any(self.coords):
            raise GermError(f"branch {self.name} is constant")

    def jets(self) -> list:
        """Coefficient vectors of t^k for k = 1, 2, ... up to the top degree."""
        top = max(c.ordinary_degree() or 0 for c in self.coords)
        return [(k, [c.coefficient((k,)) for c in self.coords]) for k in range(1, top + 1)]

    def reparametrize(self, sign: int) -> "Branch":
        if sign == 1:
            return self
        minus_t = Polynomial.monomial(T, (1,), -1)
        return Branch(self.name, tuple(c.compose([minus_t]) for c in self.coords))

    def __str__(self):
        return f"{self.name} = ({', '.join(format_polynomial(c) for c in self.coords)})"


@dataclass(frozen=True)
class IdealPresentation:
    varset: VarSet
    generators: tuple

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        for h in self.generators:
            if h.varset != self.varset:
                raise GermError("ideal generator over a different varset")

    def degrees(self) -> list:
        return [h.quasi_degree() for h in self.generators]


@dataclass
class ValidationReport:
    errors: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.errors

    def raise_if_invalid(self):
        if self.errors:
            raise GermError("; ".join(self.errors))


@dataclass(frozen=True)
class MultiGerm:
    """Branches, the ideal they satisfy and named groupings of branches.

    ``component_ideals`` holds the ideal presentation of each grouping viewed
    as a germ of its own; it is needed for per-component invariants.
    """

    varset: VarSet
    ideal: IdealPresentation
    branches: tuple
    components: Mapping = field(default_factory=dict)
    component_ideals: Mapping = field(default_factory=dict)
    dropped: tuple = ()
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "branches", tuple(self.branches))
        object.__setattr__(self, "components", {k: tuple(v) for k, v in dict(self.components).items()})
        object.__setattr__(self, "component_ideals",
                           {k: tuple(v) for k, v in dict(self.component_ideals).items()})
        names = [b.name for b in self.branches]
        if len(set(names)) != len(names):
            raise GermError("branch names must be distinct")
        for b in self.branches:
            if len(b.coords) != len(self.varset):
                raise GermError(f"branch {b.name} has {len(b.coords)} coordinates, expected {len(self.varset)}")
        for comp, members in self.components.items():
            for m in members:
                if m not in names:
                    raise GermError(f"component {comp} refers to unknown branch {m}")

    def __hash__(self):
        return hash((self.varset, self.ideal, self.branches, self.name,
                     tuple(sorted(self.components.items())),
                     tuple(sorted(self.component_ideals.items()))))

    @property
    def generators(self) -> tuple:
        return self.ideal.generators

    def branch(self, name: str) -> Branch:
        for b in self.branches:
            if b.name == name:
                return b
        raise KeyError(name)

    def branch_names(self) -> list:
        return [b.name for b in self.branches]

    def is_complete_intersection(self) -> bool:
        return len(self.generators) == len(self.varset) - 1

    def component_germ(self, name: str) -> "MultiGerm":
        """The grouping ``name`` as a germ in its own right (same variables)."""
        if name not in self.components:
            raise KeyError(f"unknown component {name}")
        if name not in self.component_ideals:
            raise GermError(f"component {name} has no ideal presentation")
        members = self.components[name]
        return MultiGerm(self.varset, IdealPresentation(self.varset, self.component_ideals[name]),
                         [self.branch(m) for m in members], name=f"{self.name}:{name}" if self.name else name)

    def subgerm(self, branch_names: Sequence[str]) -> "MultiGerm":
        """Sub-germ made of the given branches, using a matching component ideal."""
        wanted = set(branch_names)
        if wanted == set(self.branch_names()):
            return self
        for comp, members in self.components.items():
            if set(members) == wanted and comp in self.component_ideals:
                return self.component_germ(comp)
        raise GermError(f"no component with branches {sorted(wanted)}")


def validate(g: MultiGerm) -> ValidationReport:
    rep = ValidationReport()
    _check_ideal(g.generators, g.branches, g.varset, rep, "")
    for comp, gens in g.component_ideals.items():
        members = [g.branch(m) for m in g.components.get(comp, ())]
        _check_ideal(gens, members, g.varset, rep, f"component {comp}: ")
    for b in g.branches:
        degs = []
        for name, c in zip(g.varset.names, b.coords):
            if len(c.terms) > 1:
                rep.warnings.append(f"branch {b.name}: coordinate {name} = {format_polynomial(c)} is not a monomial")
            elif c.terms:
                degs.append((next(iter(c.terms))[0], g.varset.weights[g.varset.index(name)]))
        ratios = {Fraction(k, w) for k, w in degs}
        if len(ratios) > 1:
            rep.warnings.append(f"branch {b.name}: exponents are not proportional to the weights")
    return rep


def _check_ideal(gens, branches, varset, rep, prefix):
    for h in gens:
        if h.quasi_degree() is None:
            rep.errors.append(f"{prefix}generator {format_polynomial(h)} is not quasi-homogeneous")
        for b in branches:
            comp = h.compose(list(b.coords))
            if comp:
                rep.errors.append(
                    f"{prefix}generator {format_polynomial(h)} does not vanish on branch {b.name} "
                    f"(composition {format_polynomial(comp)})")


def reduce_ambient(g: MultiGerm, drop: Sequence) -> tuple:
    """Remove coordinates that vanish identically on every branch.

    Returns the germ in the remaining variables and the tuple of dropped names.
    The dropped coordinates belong to the ideal, so setting them (and their
    differentials) to zero does not change restriction classes.
    """
    drop_idx = sorted({g.varset.index(x) if isinstance(x, str) else int(x) for x in drop})
    for i in drop_idx:
        for b in g.branches:
            if b.coords[i]:
                raise GermError(f"coordinate {g.varset.names[i]} is not zero on branch {b.name}")
    if not drop_idx:
        return g, ()
    keep = [i for i in range(len(g.varset)) if i not in drop_idx]
    sub = g.varset.subset(keep)

    def restrict_all(gens):
        return tuple(p for p in (h.restrict_vars(keep, sub) for h in gens) if p)

    branches = [Branch(b.name, [b.coords[i] for i in keep]) for b in g.branches]
    dropped = tuple(g.varset.names[i] for i in drop_idx)
    return MultiGerm(sub, IdealPresentation(sub, restrict_all(g.generators)), branches,
                     g.components, {k: restrict_all(v) for k, v in g.component_ideals.items()},
                     g.dropped + dropped, g.name), dropped


# tangent frame

@dataclass(frozen=True)
class TangentFrame:
    lines: tuple  # (l1, l2, l3) as direction vectors
    planes: tuple  # 2-jet planes of the two groupings
    span: tuple  # basis of W

    @property
    def vectors(self) -> tuple:
        return self.lines


def _normalize(v):
    for x in v:
        if x:
            return [Fraction(y) / x for y in v]
    return list(v)


def _span_basis(vectors):
    n = len(vectors[0]) if vectors else 0
    ech = Echelon(vectors, n)
    return ech.rows


def _grouping_jets(branches):
    line_vectors = []
    plane_vectors = []
    for b in branches:
        nonzero = [v for _, v in b.jets() if any(v)]
        if not nonzero:
            raise GermError(f"branch {b.name} has no jets")
        line_vectors.append(nonzero[0])
        taken = [nonzero[0]]
        for v in nonzero[1:]:
            if rank(taken + [v]) > len(taken):
                taken.append(v)
                break
        plane_vectors.extend(taken)
    return line_vectors, plane_vectors


def tangent_frame(g: MultiGerm, groups: Optional[Sequence[str]] = None) -> TangentFrame:
    """Tangent lines of two branch groupings and the line where their 2-jet planes meet."""
    if groups is None:
        groups = list(g.components)[:2]
    if len(groups) != 2:
        raise GermError("the frame needs exactly two branch groupings")
    lines, planes = [], []
    for name in groups:
        members = [g.branch(m) for m in g.components[name]] if name in g.components else [g.branch(name)]
        lv, pv = _grouping_jets(members)
        lb = _span_basis(lv)
        if len(lb) != 1:
            raise GermError(f"grouping {name} has no single tangent line")
        pb = _span_basis(pv)
        if len(pb) != 2:
            raise GermError(f"grouping {name} has a degenerate 2-jet plane")
        lines.append(_normalize(lb[0]))
        planes.append(pb)
    p2, p3 = planes
    n = len(g.varset)
    # solve a0*p2[0] + a1*p2[1] - b0*p3[0] - b1*p3[1] = 0
    cols = p2 + [[-x for x in v] for v in p3]
    m = [[cols[j][i] for j in range(4)] for i in range(n)]
    ker = kernel_basis(m)
    if len(ker) != 1:
        raise GermError("the 2-jet planes do not meet in a line")
    a = ker[0]
    l3 = [a[0] * x + a[1] * y for x, y in zip(p2[0], p2[1])]
    lines.append(_normalize(l3))
    span = _span_basis(lines)
    if len(span) != 3:
        raise GermError("the three lines do not span a 3-space")
    return TangentFrame(tuple(tuple(v) for v in lines), tuple(tuple(map(tuple, p)) for p in planes),
                        tuple(tuple(v) for v in span))


# realizing a symplectic parameterization in model coordinates

def _branch_matching(g: MultiGerm, target_names: Sequence[str]):
    """Bijections target branch -> model branch that respect components."""
    model = g.branch_names()
    comp_of = {}
    for comp, members in g.components.items():
        for m in members:
            comp_of.setdefault(m, comp)
    for perm in itertools.permutations(model):
        if all(comp_of.get(t) == comp_of.get(m) for t, m in zip(target_names, perm)):
            yield dict(zip(target_names, perm))


def interpolate_map(g: MultiGerm, targets: Mapping[str, Sequence[Polynomial]]) -> Optional[list]:
    """Polynomials P_j(x) with P_j(model branch) = target coordinate j.

    ``targets`` maps branch names to coordinate tuples in some other space.
    Branches may be matched to model branches of the same component, and
    each model branch may be reparametrized by t -> -t.  Returns the list of
    P_j or None when no choice makes the map an immersion on the span of the
    variables.
    """
    names = list(targets)
    ncoord = len(next(iter(targets.values())))
    top = max((c.ordinary_degree() or 0) for cs in targets.values() for c in cs)
    monos = [m for m in monomials_up_to(_unit(g.varset), top)]
    monos = [m for m in monos if sum(m) >= 1]
    for match in _branch_matching(g, names):
        for signs in itertools.product((1, -1), repeat=len(names)):
            images = {t: g.branch(match[t]).reparametrize(s) for t, s in zip(names, signs)}
            result = _solve_interpolation(g, images, targets, monos, ncoord, top)
            if result is not None:
                return result
    return None


def _unit(v: VarSet) -> VarSet:
    return VarSet(v.names, (1,) * len(v))


def _solve_interpolation(g, images, targets, monos, ncoord, top):
    evals = {t: [Polynomial.monomial(g.varset, m).compose(list(br.coords)) for m in monos]
             for t, br in images.items()}
    # monomials vanishing to order > top on every branch cannot help
    keep = [i for i in range(len(monos))
            if any(vals[i] and min(k for (k,) in vals[i].terms) <= top for vals in evals.values())]
    monos = [monos[i] for i in keep]
    evals = {t: [vals[i] for i in keep] for t, vals in evals.items()}
    degrees = set(range(1, top + 1))
    for vals in evals.values():
        for p in vals:
            degrees.update(k for (k,) in p.terms)
    rows, keys = [], []
    for tname, vals in evals.items():
        for k in sorted(degrees):
            rows.append([p.coefficient((k,)) for p in vals])
            keys.append((tname, k))
    out = []
    for j in range(ncoord):
        rhs = [targets[tname][j].coefficient((k,)) for tname, k in keys]
        sol = solve_affine(rows, rhs, len(monos))
        if sol is None:
            return None
        x0, _ = sol
        out.append(Polynomial(g.varset, {m: c for m, c in zip(monos, x0) if c}))
    linear = [[p.coefficient(tuple(int(i == k) for i in range(len(g.varset)))) for k in range(len(g.varset))]
              for p in out]
    if rank(linear) != len(g.varset):
        return None
    return out


def symplectic_pullback(g: MultiGerm, targets: Mapping[str, Sequence[Polynomial]]) -> DiffForm:
    """Pull the standard form sum dp_i ^ dq_i back to model coordinates.

    Coordinates of the targets are ordered (p1, q1, p2, q2, ...).
    """
    maps = interpolate_map(g, targets)
    if maps is None:
        raise GermError("parameterization is not diffeomorphic to the model germ")
    omega = DiffForm(g.varset, 2)
    for i in range(0, len(maps) - 1, 2):
        omega = omega + wedge(differential(maps[i]), differential(maps[i + 1]))
    return omega
