"""Sparse multivariate polynomials over the rationals with integer weights."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Mapping, Optional, Sequence, Union

Number = Union[int, Fraction]


class VarSetMismatch(ValueError):
    pass


class _AnyDegree:
    """Quasi-degree of the zero polynomial: compatible with every degree."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ANY_DEGREE"


ANY_DEGREE = _AnyDegree()


@dataclass(frozen=True)
class VarSet:
    names: tuple
    weights: tuple

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if len(self.names) != len(self.weights):
            raise ValueError("names and weights differ in length")
        if len(set(self.names)) != len(self.names):
            raise ValueError("variable names must be distinct")
        if any(w <= 0 for w in self.weights):
            raise ValueError("weights must be positive")

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def qdeg(self, exps: Sequence[int]) -> int:
        return sum(e * w for e, w in zip(exps, self.weights))

    def var(self, i: Union[int, str]) -> "Polynomial":
        if isinstance(i, str):
            i = self.index(i)
        e = [0] * len(self)
        e[i] = 1
        return Polynomial(self, {tuple(e): Fraction(1)})

    def gens(self) -> list:
        return [self.var(i) for i in range(len(self))]

    def one(self) -> "Polynomial":
        return Polynomial(self, {(0,) * len(self): Fraction(1)})

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def subset(self, keep: Sequence[int]) -> "VarSet":
        return VarSet([self.names[i] for i in keep], [self.weights[i] for i in keep])


T = VarSet(("t",), (1,))


def monomials_of_quasi_degree(v: VarSet, d: int) -> list:
    """All exponent vectors of quasi-degree ``d``, in lexicographic order."""
    return list(_monomials(v.weights, d))


@lru_cache(maxsize=4096)
def _monomials(weights: tuple, d: int) -> tuple:
    if d < 0:
        return ()
    if not weights:
        return ((),) if d == 0 else ()
    w, rest = weights[0], weights[1:]
    out = []
    for e in range(d // w, -1, -1):
        for tail in _monomials(rest, d - e * w):
            out.append((e,) + tail)
    return tuple(out)


def monomials_up_to(v: VarSet, d: int) -> list:
    return [m for k in range(d + 1) for m in _monomials(v.weights, k)]


class Polynomial:
    """Immutable polynomial: a map from exponent tuples to nonzero Fractions."""

    __slots__ = ("varset", "terms", "_hash")

    def __init__(self, varset: VarSet, terms: Optional[Mapping] = None):
        self.varset = varset
        self.terms = {tuple(k): Fraction(c) for k, c in (terms or {}).items() if c}
        self._hash = None

    @classmethod
    def constant(cls, varset: VarSet, c: Number) -> "Polynomial":
        return cls(varset, {(0,) * len(varset): c})

    @classmethod
    def monomial(cls, varset: VarSet, exps: Sequence[int], c: Number = 1) -> "Polynomial":
        return cls(varset, {tuple(exps): c})

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.varset != self.varset:
                raise VarSetMismatch(f"{self.varset.names} vs {other.varset.names}")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.varset, other)
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.varset, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.varset == other.varset and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.varset, frozenset(self.terms.items())))
        return self._hash

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return Polynomial(self.varset, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.varset, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Polynomial(self.varset, {k: c * other for k, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                out[k] = out.get(k, 0) + c1 * c2
        return Polynomial(self.varset, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = self.varset.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c: Number) -> "Polynomial":
        return self * Fraction(c)

    def derivative(self, i: int) -> "Polynomial":
        out = {}
        for k, c in self.terms.items():
            if k[i]:
                nk = list(k)
                nk[i] -= 1
                out[tuple(nk)] = c * k[i]
        return Polynomial(self.varset, out)

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * len(self.varset))

    def quasi_degree(self):
        """Common quasi-degree of all terms, ``None`` if mixed, ANY_DEGREE if zero."""
        if not self.terms:
            return ANY_DEGREE
        degs = {self.varset.qdeg(k) for k in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def quasi_degrees(self) -> set:
        return {self.varset.qdeg(k) for k in self.terms}

    def graded_component(self, d: int) -> "Polynomial":
        return Polynomial(self.varset, {k: c for k, c in self.terms.items() if self.varset.qdeg(k) == d})

    def ordinary_order(self) -> Optional[int]:
        """Lowest total degree of a term; None for the zero polynomial."""
        return min((sum(k) for k in self.terms), default=None)

    def ordinary_degree(self) -> Optional[int]:
        return max((sum(k) for k in self.terms), default=None)

    def compose(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Substitute ``images[i]`` for the i-th variable."""
        if len(images) != len(self.varset):
            raise VarSetMismatch("wrong number of images")
        target = images[0].varset if images else self.varset
        powers = [{0: target.one()} for _ in images]
        out = target.zero()
        for k, c in self.terms.items():
            term = Polynomial.constant(target, c)
            for i, e in enumerate(k):
                if e:
                    cache = powers[i]
                    if e not in cache:
                        cache[e] = images[i] ** e
                    term = term * cache[e]
            out = out + term
        return out

    def restrict_vars(self, keep: Sequence[int], varset: Optional[VarSet] = None) -> "Polynomial":
        """Set every variable not in ``keep`` to zero and drop it."""
        varset = varset or self.varset.subset(keep)
        drop = [i for i in range(len(self.varset)) if i not in set(keep)]
        out = {}
        for k, c in self.terms.items():
            if any(k[i] for i in drop):
                continue
            out[tuple(k[i] for i in keep)] = c
        return Polynomial(varset, out)

    def extend_vars(self, varset: VarSet, positions: Sequence[int]) -> "Polynomial":
        """Embed into a larger varset; variable i goes to ``positions[i]``."""
        n = len(varset)
        out = {}
        for k, c in self.terms.items():
            nk = [0] * n
            for i, e in enumerate(k):
                nk[positions[i]] = e
            out[tuple(nk)] = c
        return Polynomial(varset, out)

    def sorted_terms(self) -> list:
        """Terms in graded (quasi-degree, then lex descending) order."""
        return sorted(self.terms.items(), key=lambda kc: (self.varset.qdeg(kc[0]), tuple(-e for e in kc[0])))

    def __iter__(self) -> Iterator:
        return iter(self.sorted_terms())

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"


def format_scalar(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_monomial(varset: VarSet, exps: Sequence[int]) -> str:
    parts = []
    for name, e in zip(varset.names, exps):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_polynomial(p: Polynomial) -> str:
    if not p.terms:
        return "0"
    out = []
    for k, c in p.sorted_terms():
        mono = format_monomial(p.varset, k)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not mono:
            body = format_scalar(a)
        elif a == 1:
            body = mono
        else:
            body = f"{format_scalar(a)}*{mono}"
        out.append((sign, body))
    s = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        s += f" {sign} {body}"
    return s


def substitute_branch(p: Polynomial, coords: Sequence[Polynomial]) -> Polynomial:
    """Composition ``p(f(t))`` for a branch given by univariate coordinates."""
    if len(coords) != len(p.varset):
        raise VarSetMismatch(f"branch has {len(coords)} coordinates, polynomial has {len(p.varset)} variables")
    return p.compose(list(coords))


def vanishing_order(g: Polynomial):
    """Lowest exponent of t with nonzero coefficient; ``math.inf`` for zero."""
    if not g.terms:
        return math.inf
    return min(k[0] for k in g.terms)
