"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction`.  Elimination is done fraction-free on
integer rows (each row is cleared of denominators and kept primitive), and the
reduced echelon form is then obtained by exact back-substitution.  Pivots are
chosen as the first nonzero entry in column order, so results are
deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

Scalar = Fraction
Vector = list  # list[Fraction]


class DimensionError(ValueError):
    pass


class Matrix:
    """Dense row-major matrix of Fractions."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence = ()):
        entries = [Fraction(e) for e in entries] if entries else [Fraction(0)] * (rows * cols)
        if len(entries) != rows * cols:
            raise DimensionError(f"expected {rows * cols} entries, got {len(entries)}")
        self.rows = rows
        self.cols = cols
        self.entries = tuple(entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: Optional[int] = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise DimensionError("ragged rows")
        return cls(len(rows), cols, [e for r in rows for e in r])

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, [int(i == j) for i in range(n) for j in range(n)])

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def to_rows(self) -> list:
        return [self.row(i) for i in range(self.rows)]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"Matrix({self.to_rows()!r})"

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise DimensionError("shape mismatch")
            out = []
            for i in range(self.rows):
                r = self.row(i)
                for j in range(other.cols):
                    out.append(sum((r[k] * other[k, j] for k in range(self.cols) if r[k]), Fraction(0)))
            return Matrix(self.rows, other.cols, out)
        return mat_vec(self, other)

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows, [self[i, j] for j in range(self.cols) for i in range(self.rows)])


def _as_rows(m) -> list:
    if isinstance(m, Matrix):
        return m.to_rows()
    return [[Fraction(x) for x in r] for r in m]


def mat_vec(m, v: Sequence) -> list:
    rows = _as_rows(m)
    if rows and len(rows[0]) != len(v):
        raise DimensionError("vector length does not match column count")
    return [sum((a * b for a, b in zip(r, v) if a and b), Fraction(0)) for r in rows]


def _integer_row(row: Sequence[Fraction]) -> list:
    den = 1
    for x in row:
        if x:
            den = lcm(den, x.denominator)
    out = [int(x * den) for x in row]
    g = 0
    for x in out:
        if x:
            g = gcd(g, x)
    if g > 1:
        out = [x // g for x in out]
    return out


def _forward(int_rows: list, ncols: int) -> tuple:
    """Fraction-free forward elimination; returns (echelon rows, pivots)."""
    rows = [r for r in int_rows if any(r)]
    pivots = []
    r0 = 0
    for c in range(ncols):
        piv = None
        for i in range(r0, len(rows)):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r0], rows[piv] = rows[piv], rows[r0]
        p = rows[r0]
        pc = p[c]
        for i in range(r0 + 1, len(rows)):
            f = rows[i][c]
            if f:
                g = gcd(pc, f)
                a, b = pc // g, f // g
                new = [a * x - b * y for x, y in zip(rows[i], p)]
                cg = 0
                for x in new:
                    if x:
                        cg = gcd(cg, x)
                        if cg == 1:
                            break
                if cg > 1:
                    new = [x // cg for x in new]
                rows[i] = new
        pivots.append(c)
        r0 += 1
        if r0 == len(rows):
            break
    return rows[:r0], pivots


def row_reduce(m) -> tuple:
    """Reduced row echelon form of ``m`` and its pivot columns.

    Zero rows are kept at the bottom so the shape of the input is preserved.
    """
    rows = _as_rows(m)
    nrows = len(rows)
    ncols = len(rows[0]) if rows else (m.cols if isinstance(m, Matrix) else 0)
    ech, pivots = _forward([_integer_row(r) for r in rows], ncols)
    red = _back_substitute(ech, pivots)
    red += [[Fraction(0)] * ncols for _ in range(nrows - len(red))]
    return Matrix.from_rows(red, ncols) if nrows else Matrix(0, ncols), pivots


def _back_substitute(ech: list, pivots: list) -> list:
    out = [[Fraction(x, r[c]) for x in r] for r, c in zip(ech, pivots)]
    for k in range(len(out) - 1, -1, -1):
        c = pivots[k]
        pk = out[k]
        for i in range(k):
            f = out[i][c]
            if f:
                out[i] = [x - f * y for x, y in zip(out[i], pk)]
    return out


def rank(m) -> int:
    rows = _as_rows(m)
    if not rows:
        return 0
    return len(_forward([_integer_row(r) for r in rows], len(rows[0]))[1])


class Echelon:
    """Reduced echelon basis of a row space; reduces vectors modulo it."""

    __slots__ = ("ncols", "rows", "pivots", "_pivot_index")

    def __init__(self, vectors: Iterable[Sequence], ncols: int):
        vecs = [list(v) for v in vectors]
        ech, pivots = _forward([_integer_row(v) for v in vecs], ncols)
        self.ncols = ncols
        self.rows = _back_substitute(ech, pivots)
        self.pivots = pivots
        self._pivot_index = {c: i for i, c in enumerate(pivots)}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def free_columns(self) -> list:
        return [c for c in range(self.ncols) if c not in self._pivot_index]

    def reduce(self, v: Sequence) -> list:
        """Remainder of ``v`` after clearing all pivot columns."""
        v = [Fraction(x) for x in v]
        for row, c in zip(self.rows, self.pivots):
            f = v[c]
            if f:
                v = [a - f * b for a, b in zip(v, row)]
        return v

    def contains(self, v: Sequence) -> bool:
        return not any(self.reduce(v))


def solve_affine(m, b: Sequence, ncols: Optional[int] = None) -> Optional[tuple]:
    """Particular solution and kernel basis of ``m x = b``, or None if infeasible."""
    rows = _as_rows(m)
    if ncols is None:
        ncols = len(rows[0]) if rows else (m.cols if isinstance(m, Matrix) else 0)
    if len(b) != len(rows):
        raise DimensionError("right-hand side length does not match row count")
    aug = [list(r) + [Fraction(x)] for r, x in zip(rows, b)]
    ech, pivots = _forward([_integer_row(r) for r in aug], ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    red = _back_substitute(ech, pivots)
    x = [Fraction(0)] * ncols
    for r, c in zip(red, pivots):
        x[c] = r[ncols]
    return x, _kernel_from_rref(red, pivots, ncols)


def solve(m, b: Sequence, ncols: Optional[int] = None) -> Optional[list]:
    """A solution of ``m x = b`` (free variables set to zero), or None."""
    res = solve_affine(m, b, ncols)
    return None if res is None else res[0]


def _kernel_from_rref(red: list, pivots: list, ncols: int) -> list:
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, c in zip(red, pivots):
            if r[f]:
                v[c] = -r[f]
        basis.append(v)
    return basis


def kernel_basis(m) -> list:
    rows = _as_rows(m)
    ncols = len(rows[0]) if rows else (m.cols if isinstance(m, Matrix) else 0)
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    ech, pivots = _forward([_integer_row(r) for r in rows], ncols)
    return _kernel_from_rref(_back_substitute(ech, pivots), pivots, ncols)


def is_feasible(m, b: Sequence, ncols: Optional[int] = None) -> bool:
    return solve_affine(m, b, ncols) is not None
