"""Differential forms with polynomial coefficients and polynomial vector fields."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Union

from .poly import T, Number, Polynomial, VarSet, VarSetMismatch, format_polynomial

DEFAULT_MAX_DEGREE = 3


class DegreeOverflow(ValueError):
    pass


class NotClosedError(ValueError):
    pass


def _merge_sign(a: tuple, b: tuple):
    """Sign of sorting the concatenation ``a + b``; None if an index repeats."""
    if set(a) & set(b):
        return None, None
    seq = list(a + b)
    sign = 1
    # inversion count
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign, tuple(sorted(seq))


class DiffForm:
    """A k-form ``sum f_I dx_I`` with strictly increasing index tuples ``I``."""

    __slots__ = ("varset", "degree", "terms", "max_degree")

    def __init__(self, varset: VarSet, degree: int, terms: Optional[Mapping] = None,
                 max_degree: int = DEFAULT_MAX_DEGREE):
        if degree < 0 or degree > max_degree:
            raise DegreeOverflow(f"degree {degree} outside tracked range 0..{max_degree}")
        self.varset = varset
        self.degree = degree
        self.max_degree = max_degree
        clean = {}
        for idx, coef in (terms or {}).items():
            idx = tuple(idx)
            if len(idx) != degree or any(a >= b for a, b in zip(idx, idx[1:])):
                raise ValueError(f"bad index tuple {idx} for a {degree}-form")
            if not isinstance(coef, Polynomial):
                coef = Polynomial.constant(varset, coef)
            elif coef.varset != varset:
                raise VarSetMismatch("coefficient over a different varset")
            if coef:
                clean[idx] = coef
        self.terms = clean

    # construction helpers

    @classmethod
    def zero(cls, varset: VarSet, degree: int) -> "DiffForm":
        return cls(varset, degree)

    @classmethod
    def function(cls, p: Polynomial) -> "DiffForm":
        return cls(p.varset, 0, {(): p})

    @classmethod
    def dx(cls, varset: VarSet, *indices: int) -> "DiffForm":
        if len(set(indices)) != len(indices):
            return cls(varset, len(indices))
        idx = tuple(sorted(indices))
        sign = 1
        seq = list(indices)
        for i in range(len(seq)):
            for j in range(i + 1, len(seq)):
                if seq[i] > seq[j]:
                    sign = -sign
        return cls(varset, len(indices), {idx: Polynomial.constant(varset, sign)})

    # arithmetic

    def _check(self, other: "DiffForm"):
        if self.varset != other.varset:
            raise VarSetMismatch("forms over different varsets")
        if self.degree != other.degree:
            raise ValueError(f"cannot add a {self.degree}-form and a {other.degree}-form")

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, DiffForm):
            return NotImplemented
        return self.varset == other.varset and self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        return hash((self.varset, self.degree, frozenset(self.terms.items())))

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return DiffForm(self.varset, self.degree, out, self.max_degree)

    __radd__ = __add__

    def __neg__(self):
        return DiffForm(self.varset, self.degree, {k: -c for k, c in self.terms.items()}, self.max_degree)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: Union[Number, Polynomial]):
        if isinstance(other, DiffForm):
            return wedge(self, other)
        return DiffForm(self.varset, self.degree, {k: c * other for k, c in self.terms.items()}, self.max_degree)

    __rmul__ = __mul__

    def __xor__(self, other: "DiffForm"):
        return wedge(self, other)

    # inspection

    def coefficient(self, *idx: int) -> Polynomial:
        return self.terms.get(tuple(idx), self.varset.zero())

    def items(self):
        """Yield ``((exponents, index tuple), coefficient)`` over all monomial terms."""
        for idx, coef in self.terms.items():
            for exps, c in coef.terms.items():
                yield (exps, idx), c

    def term_qdeg(self, exps: Sequence[int], idx: Sequence[int]) -> int:
        w = self.varset.weights
        return self.varset.qdeg(exps) + sum(w[i] for i in idx)

    def quasi_degrees(self) -> set:
        return {self.term_qdeg(e, i) for (e, i), _ in self.items()}

    def quasi_degree(self) -> Optional[int]:
        degs = self.quasi_degrees()
        if len(degs) == 1:
            return degs.pop()
        return None

    def graded_component(self, d: int) -> "DiffForm":
        out = {}
        for (e, idx), c in self.items():
            if self.term_qdeg(e, idx) == d:
                out.setdefault(idx, {})[e] = c
        return DiffForm(self.varset, self.degree,
                        {idx: Polynomial(self.varset, t) for idx, t in out.items()}, self.max_degree)

    def vanishing_order_at_origin(self):
        """Largest k with every coefficient in the k-th power of the maximal ideal."""
        if not self.terms:
            return math.inf
        return min(c.ordinary_order() for c in self.terms.values())

    def value_at_origin(self) -> dict:
        return {idx: c.constant_term() for idx, c in self.terms.items() if c.constant_term()}

    def restrict_vars(self, keep: Sequence[int]) -> "DiffForm":
        """Pull back to the coordinate subspace where all other variables vanish."""
        keep = list(keep)
        pos = {v: i for i, v in enumerate(keep)}
        sub = self.varset.subset(keep)
        out = {}
        for idx, c in self.terms.items():
            if all(i in pos for i in idx):
                p = c.restrict_vars(keep, sub)
                if p:
                    out[tuple(pos[i] for i in idx)] = p
        return DiffForm(sub, self.degree, out, self.max_degree)

    def with_varset(self, varset: VarSet) -> "DiffForm":
        """Same form over a varset with identical names but other weights."""
        if varset.names != self.varset.names:
            raise VarSetMismatch("variable names differ")
        return DiffForm(varset, self.degree,
                        {i: Polynomial(varset, c.terms) for i, c in self.terms.items()}, self.max_degree)

    def __str__(self):
        return format_form(self)

    def __repr__(self):
        return f"DiffForm({format_form(self)!r})"


def wedge(a: DiffForm, b: DiffForm) -> DiffForm:
    if a.varset != b.varset:
        raise VarSetMismatch("forms over different varsets")
    deg = a.degree + b.degree
    cap = max(a.max_degree, b.max_degree)
    if deg > cap:
        raise DegreeOverflow(f"wedge would produce a {deg}-form, tracked range is 0..{cap}")
    out = {}
    for i1, c1 in a.terms.items():
        for i2, c2 in b.terms.items():
            sign, idx = _merge_sign(i1, i2)
            if sign is None:
                continue
            term = c1 * c2 * sign
            out[idx] = out[idx] + term if idx in out else term
    return DiffForm(a.varset, deg, out, cap)


def exterior_derivative(a: DiffForm) -> DiffForm:
    if a.degree + 1 > a.max_degree:
        raise DegreeOverflow("exterior derivative exceeds tracked degree")
    out = {}
    for idx, c in a.terms.items():
        for j in range(len(a.varset)):
            if j in idx:
                continue
            dc = c.derivative(j)
            if not dc:
                continue
            sign, nidx = _merge_sign((j,), idx)
            term = dc * sign
            out[nidx] = out[nidx] + term if nidx in out else term
    return DiffForm(a.varset, a.degree + 1, out, a.max_degree)


d = exterior_derivative


def differential(p: Polynomial) -> DiffForm:
    return exterior_derivative(DiffForm.function(p))


class VectorField:
    """Polynomial vector field ``sum X_i d/dx_i``."""

    __slots__ = ("varset", "components")

    def __init__(self, varset: VarSet, components: Sequence):
        if len(components) != len(varset):
            raise ValueError("component count must match variable count")
        comps = []
        for c in components:
            if not isinstance(c, Polynomial):
                c = Polynomial.constant(varset, c)
            elif c.varset != varset:
                raise VarSetMismatch("component over a different varset")
            comps.append(c)
        self.varset = varset
        self.components = tuple(comps)

    def __eq__(self, other):
        return isinstance(other, VectorField) and self.varset == other.varset and self.components == other.components

    def __hash__(self):
        return hash((self.varset, self.components))

    def __add__(self, other: "VectorField"):
        return VectorField(self.varset, [a + b for a, b in zip(self.components, other.components)])

    def __neg__(self):
        return VectorField(self.varset, [-a for a in self.components])

    def __mul__(self, f: Union[Number, Polynomial]):
        return VectorField(self.varset, [a * f for a in self.components])

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.components)

    def apply(self, p: Polynomial) -> Polynomial:
        """Derivative of ``p`` along the field."""
        out = self.varset.zero()
        for i, c in enumerate(self.components):
            if c:
                out = out + c * p.derivative(i)
        return out

    def __str__(self):
        parts = []
        for name, c in zip(self.varset.names, self.components):
            if c:
                parts.append(f"({format_polynomial(c)})*d/d{name}")
        return " + ".join(parts) or "0"

    __repr__ = __str__


def coordinate_field(varset: VarSet, i: int) -> VectorField:
    return VectorField(varset, [int(j == i) for j in range(len(varset))])


def interior_product(X: VectorField, a: DiffForm) -> DiffForm:
    if a.degree == 0:
        raise ValueError("interior product of a 0-form")
    if X.varset != a.varset:
        raise VarSetMismatch("field and form over different varsets")
    out = {}
    for idx, c in a.terms.items():
        for r, i in enumerate(idx):
            comp = X.components[i]
            if not comp:
                continue
            nidx = idx[:r] + idx[r + 1:]
            term = comp * c * (-1 if r % 2 else 1)
            out[nidx] = out[nidx] + term if nidx in out else term
    return DiffForm(a.varset, a.degree - 1, out, a.max_degree)


def lie_derivative_closed(X: VectorField, a: DiffForm, check: bool = True) -> DiffForm:
    """Lie derivative of a closed form: ``d(X _| a)``."""
    if check and a.degree < a.max_degree and exterior_derivative(a):
        raise NotClosedError("form is not closed")
    if a.degree == 0:
        return DiffForm.function(X.apply(a.terms.get((), a.varset.zero())))
    return exterior_derivative(interior_product(X, a))


def pullback_map(a: DiffForm, images: Sequence[Polynomial]) -> DiffForm:
    """Pull ``a`` back along the polynomial map ``x_i = images[i]``."""
    if len(images) != len(a.varset):
        raise VarSetMismatch("wrong number of images")
    target = images[0].varset
    dimg = [differential(p) for p in images]
    out = DiffForm(target, a.degree, max_degree=a.max_degree)
    for idx, c in a.terms.items():
        term = DiffForm.function(c.compose(images))
        term = DiffForm(target, 0, term.terms, a.max_degree)
        for i in idx:
            term = wedge(term, DiffForm(target, 1, dimg[i].terms, a.max_degree))
        out = out + term
    return out


def pullback(a: DiffForm, coords: Sequence[Polynomial]) -> DiffForm:
    """Pull back along a branch ``t -> coords(t)``; a form in ``t``."""
    if a.degree >= 2:
        return DiffForm(T, a.degree, max_degree=max(a.degree, 1))
    return pullback_map(a, list(coords))


def vanishing_order(g):
    """Lowest power of t in a univariate polynomial or 1-form ``g(t) dt``."""
    if isinstance(g, DiffForm):
        coef = g.terms.get((0,)) if g.degree == 1 else g.terms.get(())
        if coef is None:
            return math.inf
        g = coef
    if not g.terms:
        return math.inf
    return min(k[0] for k in g.terms)


def format_form(a: DiffForm) -> str:
    if not a.terms:
        return "0"
    names = a.varset.names
    pieces = []
    for idx in sorted(a.terms):
        coef = a.terms[idx]
        wed = "^".join(f"d{names[i]}" for i in idx)
        for exps, c in coef.sorted_terms():
            mono = "*".join(
                (f"{n}^{e}" if e > 1 else n) for n, e in zip(names, exps) if e
            )
            mag = abs(c)
            factors = []
            if mag != 1 or (not mono and not wed):
                factors.append(str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}")
            if mono:
                factors.append(mono)
            if wed:
                factors.append(wed)
            pieces.append(("-" if c < 0 else "+", "*".join(factors)))
    s = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, body in pieces[1:]:
        s += f" {sign} {body}"
    return s
