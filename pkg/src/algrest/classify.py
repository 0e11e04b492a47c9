"""Normal-form classification of restriction classes.

T7 goes through the coefficient decision tree over the basis theta1..theta7,
followed by a normalization that keeps only the coefficients surviving the
homotopy reductions and rescales the leading one with the weighted scaling
x -> (s^3 x1, s^2 x2, s^2 x3), under which a theta of quasi-degree delta picks
up a factor s^delta.  The other families are classified by matching computed
invariants against the stored invariant tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .invariants import (INF, index_of_isotropy, lagrangian_tangency, lagrangian_tangency_single,
                         relative_lt)
from .restriction import CLOSED, GradedBasis, RestrictionClass, restriction_basis
from .tangent import orbit_tangent_space


class ClassificationError(ValueError):
    pass


class AmbiguousSignature(ClassificationError):
    def __init__(self, signature, candidates):
        self.signature = signature
        self.candidates = list(candidates)
        names = ", ".join(f"{n} ({s})" if s else n for n, s in self.candidates)
        super().__init__(f"signature {format_signature(signature)} matches several classes: {names}")


# exact real powers


def _iroot(n: int, q: int) -> Optional[int]:
    """Integer q-th root of n >= 0, or None."""
    if n < 2:
        return n
    r = int(round(n ** (1.0 / q)))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** q == n:
            return cand
    # float guess can be far off for huge n; fall back to bisection
    lo, hi = 0, 1 << (n.bit_length() // q + 1)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid ** q < n:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo ** q == n else None


def rational_root(x: Fraction, q: int) -> Optional[Fraction]:
    """Real q-th root of x when it is rational."""
    if x < 0:
        if q % 2 == 0:
            return None
        r = rational_root(-x, q)
        return -r if r is not None else None
    a, b = _iroot(x.numerator, q), _iroot(x.denominator, q)
    if a is None or b is None:
        return None
    return Fraction(a, b)


@dataclass(frozen=True)
class ScaledValue:
    """The real number coeff * base**exponent, kept exact.

    ``base`` is nonzero; a negative base needs an odd root.  Instances are
    built with :func:`scaled`, which absorbs the integer part of the exponent
    into the coefficient so equal values compare equal as tuples.
    """

    coeff: Fraction
    base: Fraction
    exponent: Fraction

    def exact(self) -> Optional[Fraction]:
        if not self.coeff:
            return Fraction(0)
        r = rational_root(self.base, self.exponent.denominator)
        if r is None:
            return None
        return self.coeff * r ** self.exponent.numerator

    def is_zero(self) -> bool:
        return not self.coeff

    def sign(self) -> int:
        if not self.coeff:
            return 0
        s = 1 if self.coeff > 0 else -1
        if self.base < 0 and self.exponent.numerator % 2:
            s = -s
        return s

    def __float__(self):
        root = abs(float(self.base)) ** float(self.exponent)
        return float(self.coeff) * root * (1 if self.base > 0 or self.exponent.numerator % 2 == 0 else -1)

    def __str__(self):
        return f"{_fmt(self.coeff)}*({_fmt(self.base)})^({_fmt(self.exponent)})"


def scaled(coeff, base, exponent):
    """coeff * base**exponent, as a Fraction when exact, else a ScaledValue."""
    coeff, base, exponent = Fraction(coeff), Fraction(base), Fraction(exponent)
    if not coeff:
        return Fraction(0)
    whole = math.floor(exponent)
    coeff *= base ** whole
    exponent -= whole
    v = ScaledValue(coeff, base, exponent)
    if not exponent:
        return coeff
    e = v.exact()
    return e if e is not None else v


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(x)


def format_value(x) -> str:
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if isinstance(x, (Fraction, int)):
        return _fmt(Fraction(x))
    return str(x)


def format_signature(sig) -> str:
    return "(" + ",".join(format_value(x) for x in sig) + ")"


# labels


@dataclass(frozen=True)
class AmbientDimensions:
    """Even ambient dimensions 2n >= minimum."""

    minimum: int

    def __contains__(self, dim) -> bool:
        return dim % 2 == 0 and dim >= self.minimum

    def __str__(self):
        return f"2n>={self.minimum}"


@dataclass
class ClassLabel:
    family: str
    name: str
    subcase: str = ""
    moduli: dict = field(default_factory=dict)
    realizable: Optional[AmbientDimensions] = None
    notes: str = ""
    signature: tuple = ()

    def __str__(self):
        parts = [self.name]
        if self.subcase:
            parts.append(f"[{self.subcase}]")
        if self.moduli:
            parts.append(", ".join(f"{k}={format_value(v)}" for k, v in self.moduli.items()))
        return " ".join(parts)


# T7

T7_DEGREES = (4, 5, 5, 7, 7, 7, 9)
T7_CLASSES = ("T7^0", "T7^1", "T7^2", "T7^3", "T7^4", "T7^5", "T7^6", "T7^7")
T7_UNLISTED = "T7^unlisted"

# normal-form parameter positions (0-based theta indices) and their names
T7_PARAMETERS = {
    "T7^0": (("c1", 1), ("c2", 2)),
    "T7^1": (("c1", 0), ("c2", 4)),
    "T7^2": (("c1", 3), ("c2", 4)),
    "T7^3": (("c1", 4), ("c2", 5)),
    "T7^4": (("c", 6),),
    "T7^5": (("c", 6),),
    "T7^6": (),
    "T7^7": (),
}


def t7_swap(c: Sequence) -> list:
    """Coordinates after the symmetry (x1, x2, x3) -> (x1, x3, x2)."""
    c = [Fraction(x) for x in c]
    return [-c[0], c[2], c[1], c[4], c[3], -c[5], -c[6]]


def _t7_tree(c) -> str:
    c1, c2, c3, c4, c5, c6, c7 = c
    if c1 and c2 and c3:
        return "T7^0"
    if (c2 == 0) != (c3 == 0):
        return "T7^1"
    if c2 and c3:
        # c1 = 0 with c2*c3 != 0 falls outside every normal-form case
        return T7_UNLISTED
    if c1:
        return "T7^2" if (c4 or c5) else "T7^4"
    if c4 or c5:
        return "T7^3"
    if c6:
        return "T7^5"
    return "T7^6" if c7 else "T7^7"


def realizable_dimensions_t7(label) -> AmbientDimensions:
    name = label.name if isinstance(label, ClassLabel) else label
    if name in ("T7^0", "T7^1", "T7^2", "T7^4", T7_UNLISTED):
        return AmbientDimensions(4)
    if name in T7_CLASSES:
        return AmbientDimensions(6)
    raise ClassificationError(f"unknown T7 class {name!r}")


def _zero(x) -> bool:
    return x == 0 if isinstance(x, Fraction) else x.is_zero()


def _t7_subcase(name: str, moduli: dict) -> str:
    if name == "T7^1":
        a, b = (not _zero(moduli["c1"])), (not _zero(moduli["c2"]))
        return {(True, True): "c1*c2!=0", (False, True): "c1=0, c2!=0",
                (True, False): "c1!=0, c2=0", (False, False): "c1=0, c2=0"}[(a, b)]
    if name == "T7^2":
        if not _zero(moduli["c1"]) and not _zero(moduli["c2"]):
            return "c1*c2!=0"
        return "c1*c2=0, (c1,c2)!=(0,0)"
    if name == "T7^3":
        return "c1!=0" if not _zero(moduli["c1"]) else "c1=0"
    if name == "T7^0":
        return "c1*c2!=0"
    if name == T7_UNLISTED:
        return "c1=0, c2*c3!=0"
    return ""


@dataclass
class NormalForm:
    name: str
    coords: list  # seven entries, Fraction or ScaledValue
    moduli: dict


def normalize_t7(c: Sequence) -> NormalForm:
    """Normal-form coefficients and moduli of the class sum c_i theta_i."""
    c = [Fraction(x) for x in c]
    if len(c) != 7:
        raise ClassificationError(f"T7 needs 7 coordinates, got {len(c)}")
    name = _t7_tree(c)
    z = Fraction(0)
    out = [z] * 7
    if name == "T7^0":
        u = abs(c[0])
        a, b = scaled(c[1], u, Fraction(-5, 4)), scaled(c[2], u, Fraction(-5, 4))
        if c[0] < 0:
            a, b = b, a
        out[:3] = [Fraction(1), a, b]
    elif name == "T7^1":
        if c[1] == 0:
            c = t7_swap(c)
        out[0] = scaled(c[0], abs(c[1]), Fraction(-4, 5))
        out[1] = Fraction(1)
        out[4] = scaled(c[4], c[1], Fraction(-7, 5))
    elif name == "T7^2":
        u = abs(c[0])
        a, b = scaled(c[3], u, Fraction(-7, 4)), scaled(c[4], u, Fraction(-7, 4))
        if c[0] < 0:
            a, b = b, a
        out[0], out[3], out[4] = Fraction(1), a, b
    elif name == "T7^3":
        if c[3] == 0:
            c = t7_swap(c)
        out[3], out[4], out[5] = Fraction(1), c[4] / c[3], c[5] / c[3]
    elif name == "T7^4":
        u = abs(c[0])
        out[0] = Fraction(1)
        out[6] = scaled(c[6] if c[0] > 0 else -c[6], u, Fraction(-9, 4))
    elif name == "T7^5":
        out[5] = Fraction(1)
        out[6] = scaled(c[6], c[5], Fraction(-9, 7))
    elif name == "T7^6":
        out[6] = Fraction(1)
    elif name == T7_UNLISTED:
        out = list(c)
    moduli = {p: out[i] for p, i in T7_PARAMETERS.get(name, ())}
    return NormalForm(name, out, moduli)


def classify_t7(c: Sequence) -> ClassLabel:
    nf = normalize_t7(c)
    label = ClassLabel("T7", nf.name, _t7_subcase(nf.name, nf.moduli), dict(nf.moduli),
                       realizable_dimensions_t7(nf.name))
    if nf.name == T7_UNLISTED:
        label.notes = "theta1 coefficient zero with theta2, theta3 both nonzero; no normal form covers this pattern"
    return label


def moduli_report(basis: GradedBasis, a: RestrictionClass, directions: Sequence[int]) -> list:
    """The basis directions (indices) that are not in the orbit tangent space at ``a``."""
    tangent = orbit_tangent_space(basis, a)
    out = []
    for i in directions:
        e = [Fraction(int(i == j)) for j in range(basis.dim)]
        if not tangent.contains(e):
            out.append(i)
    return out


def t7_moduli_report(basis: GradedBasis, a: RestrictionClass) -> list:
    """Names of the normal-form parameter directions of ``a``'s class that are moduli."""
    label = classify_t7(a.coords)
    positions = [i for _, i in T7_PARAMETERS.get(label.name, ())]
    names = basis.names()
    return [names[i] for i in moduli_report(basis, a, positions)]


# T8: invariant signatures (Lt, L1, L2, ind, ind1, ind2) and Lt[C2:C1]

I = INF
T8_SIGNATURES = [
    # name, subcase, signature, relative Lt[C2:C1] (None when not needed)
    ("T8^0", "c1*c2!=0", (2, 3, 2, 0, 0, 0), 1),
    ("T8^1_2", "c1=0, c2!=0", (2, 3, 2, 0, 0, 0), 2),
    ("T8^1_2", "c2=0, c3!=0", (2, 5, 2, 0, 1, 0), None),
    ("T8^1_2", "c2=c3=0", (2, I, 2, 0, I, 0), None),
    ("T8^1_3", "c1*c2!=0", (2, 3, 3, 0, 0, 1), 1),
    ("T8^2_3", "c1=0, c2!=0", (2, 3, 3, 0, 0, 1), 2),
    ("T8^2_3", "c2=0, c3!=0", (2, 3, 4, 0, 0, 2), None),
    ("T8^2_3", "c2=0, c3=0", (2, 3, I, 0, 0, I), None),
    ("T8^2_>3", "c1*c2!=0", (2, 5, 3, 0, 1, 1), None),
    ("T8^2_>3", "c1!=0, c2=0", (2, I, 3, 0, I, 1), None),
    ("T8^3,0", "c1*c2!=0", (2, 5, 4, 0, 1, 2), None),
    ("T8^3,0", "c1!=0, c2=0", (2, 5, I, 0, 1, I), None),
    ("T8^3,0", "c1=0, c2!=0", (2, I, 4, 0, I, 2), None),
    ("T8^5,0", "", (2, I, I, 0, I, I), None),
    ("T8^3,1", "c2!=0", (3, 5, 3, 1, 1, 1), None),
    ("T8^3,1", "c2=0", (3, I, 3, 1, I, 1), None),
    ("T8^4", "c1*c2!=0", (4, 5, 4, 1, 1, 2), 4),
    ("T8^4", "c1=0, c2!=0", (4, I, 4, 1, I, 2), 3),
    ("T8^4", "c1!=0, c2=0", (5, 5, I, 1, 1, I), I),
    ("T8^6,1", "", (5, I, I, 1, I, I), None),
    ("T8^5,1", "c!=0", (4, 5, 4, 1, 1, 2), 4),
    ("T8^5,1", "c=0", (5, 5, I, 1, 1, I), I),
    ("T8^6,2", "", (4, I, 4, 2, I, 2), 4),
    ("T8^7", "", (7, I, I, 3, I, I), None),
    ("T8^8", "", (I, I, I, I, I, I), None),
]

T8_REALIZABLE = {"T8^0": 4, "T8^1_2": 4, "T8^1_3": 4, "T8^2_3": 4, "T8^2_>3": 4, "T8^3,0": 4, "T8^5,0": 4}


def t8_signature(basis: GradedBasis, a: RestrictionClass) -> tuple:
    g = basis.germ
    rep = a.representative()
    out = [lagrangian_tangency(basis, a)]
    inds = []
    for comp in ("C1", "C2"):
        cb = restriction_basis(g.component_germ(comp), CLOSED)
        ca = cb.restrict(rep)
        out.append(lagrangian_tangency(cb, ca))
        inds.append(index_of_isotropy(cb, ca))
    return tuple(out + [index_of_isotropy(basis, a)] + inds)


def t8_relative(basis: GradedBasis, a: RestrictionClass):
    """Lt[C2:C1]: best order on C2 among alphas attaining Lt(C1) on C1."""
    g = basis.germ
    rep = a.representative()
    t1 = lagrangian_tangency_single(g, "C1", rep)
    others = list(g.components["C2"])
    return relative_lt(basis, a, others, {"C1": t1})


def classify_t8(basis: GradedBasis, a: RestrictionClass) -> ClassLabel:
    sig = t8_signature(basis, a)
    rows = [r for r in T8_SIGNATURES if r[2] == sig]
    if not rows:
        raise ClassificationError(f"T8 signature {format_signature(sig)} is not in the table")
    if len(rows) > 1 and all(r[3] is not None for r in rows):
        rel = t8_relative(basis, a)
        narrowed = [r for r in rows if r[3] == rel]
        if narrowed:
            rows = narrowed
        sig = sig + (rel,)
    if len(rows) > 1:
        raise AmbiguousSignature(sig, [(r[0], r[1]) for r in rows])
    name, subcase, _, _ = rows[0]
    return ClassLabel("T8", name, subcase, realizable=AmbientDimensions(T8_REALIZABLE.get(name, 6)),
                      signature=sig)


# A_k, D_k, E6: invariant tables


@dataclass(frozen=True)
class TableRow:
    name: str
    subcase: str
    values: tuple  # family-specific invariant tuple
    form: str = ""  # sample form in the shipped scenario


def _num(x):
    x = Fraction(x)
    return int(x) if x.denominator == 1 else x


def a_k_rows(k: int) -> list:
    """(Lt, ind) per normal form A_k^i."""
    rows = []
    for i in range(k):
        lt = k + 1 + 2 * i if k % 2 == 0 else (k + 1) // 2 + i
        rows.append(TableRow(f"A{k}^{i}", "", (lt, i), f"a{k}_{i}"))
    rows.append(TableRow(f"A{k}^{k}", "", (I, I), f"a{k}_{k}"))
    return rows


def d_k_rows(k: int) -> list:
    """(Lt(N), Lt(C2), ind, ind2) per normal form; Lt in branch-parameter orders."""
    lam = Fraction(1) if k % 2 else Fraction(1, 2)
    L = lambda m: _num(m * lam)
    rows = [TableRow(f"D{k}^0", "", (L(2), L(k - 2), 0, 0), f"d{k}_0")]
    if k >= 5:
        rows.append(TableRow(f"D{k}^1", "", (L(k), L(k), 1, 1), f"d{k}_1"))
    for i in range(2, k - 3):
        rows.append(TableRow(f"D{k}^{i}", "b!=0", (L(k), L(k - 2 + 2 * i), 1, i), f"d{k}_{i}"))
        rows.append(TableRow(f"D{k}^{i}", "b=0", (L(k - 2 + 2 * i), L(k - 2 + 2 * i), i, i), f"d{k}_{i}_bzero"))
    if k % 2:
        rows.append(TableRow(f"D{k}^{k - 3},+", "", (L(k), I, 1, I), f"d{k}_{k - 3}p"))
        rows.append(TableRow(f"D{k}^{k - 3},-", "", (L(k), I, 1, I), f"d{k}_{k - 3}m"))
    else:
        rows.append(TableRow(f"D{k}^{k - 3},±", "", (L(k), I, 1, I), f"d{k}_{k - 3}"))
    rows.append(TableRow(f"D{k}^{k - 2}", "", (L(3 * k - 8), I, k - 3, I), f"d{k}_{k - 2}"))
    rows.append(TableRow(f"D{k}^{k - 1}", "", (L(3 * k - 6), I, k - 2, I), f"d{k}_{k - 1}"))
    rows.append(TableRow(f"D{k}^{k}", "", (I, I, I, I), f"d{k}_{k}"))
    return rows


E6_ROWS = [
    # (Lt, ind, mu)
    TableRow("E6^0", "", (4, 0, 0), "e6_0"),
    TableRow("E6^1,+", "", (7, 1, 2), "e6_1p"),
    TableRow("E6^1,-", "", (7, 1, 2), "e6_1m"),
    TableRow("E6^2", "", (8, 1, 3), "e6_2"),
    TableRow("E6^3", "", (10, 2, 4), "e6_3"),
    TableRow("E6^4,+", "", (11, 2, 4), "e6_4p"),
    TableRow("E6^4,-", "", (11, 2, 4), "e6_4m"),
    TableRow("E6^5", "", (14, 3, 5), "e6_5"),
    TableRow("E6^6", "", (I, I, 6), "e6_6"),
]


def _merge_signs(name: str) -> str:
    """E6^1,+ and E6^1,- share every invariant; report the pair."""
    return name[:-2] + ",±" if name.endswith((",+", ",-")) else name


def classify_by_invariants(family: str, basis: GradedBasis, a: RestrictionClass, k: Optional[int] = None) -> ClassLabel:
    """Match invariants of ``a`` to a row of the A_k, D_k or E6 table."""
    family = family.upper().replace("_", "")
    if family in ("A", "AK"):
        if k is None:
            raise ClassificationError("A_k needs k")
        key = (lagrangian_tangency(basis, a), index_of_isotropy(basis, a))
        rows = [r for r in a_k_rows(k) if r.values == key]
        fam = "A_k"
    elif family in ("D", "DK"):
        if k is None:
            raise ClassificationError("D_k needs k")
        cb = restriction_basis(basis.germ.component_germ("C2"), CLOSED)
        key = (lagrangian_tangency(basis, a), lagrangian_tangency(cb, cb.restrict(a.representative())))
        rows = [r for r in d_k_rows(k) if r.values[:2] == key]
        fam = "D_k"
    elif family == "E6":
        key = (lagrangian_tangency(basis, a),)
        rows = [r for r in E6_ROWS if r.values[0] == key[0]]
        fam = "E6"
    else:
        raise ClassificationError(f"unknown family {family!r}")
    if not rows:
        raise ClassificationError(f"no {fam} row has invariants {format_signature(key)}")
    names = sorted({_merge_signs(r.name) for r in rows})
    notes = ""
    if fam == "D_k" and k == 4 and len(names) > 1:
        # the three lines of D4 are permuted by symmetries, so C1 is not an
        # invariant component and the D^2 form is a D^{1,±} member
        names = [n for n in names if n.startswith("D4^1")]
        notes = "D4^2 lies in this family: its form vanishes on C1, which a symmetry moves onto a branch of C2"
    if len(names) > 1:
        raise AmbiguousSignature(key, [(n, "") for n in names])
    sub = rows[0].subcase if len(rows) == 1 or len({r.subcase for r in rows}) == 1 else ""
    return ClassLabel(fam, names[0], sub, realizable=AmbientDimensions(4), notes=notes, signature=key)
