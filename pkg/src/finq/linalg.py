"""Dense exact matrices and vectors over cyclotomic numbers."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from finq.cyclotomic import Cyclotomic, ZERO, ONE, as_cyclotomic

__all__ = [
    "CycMatrix",
    "EchelonSpace",
    "vec_inner",
    "vec_add",
    "vec_sub",
    "vec_scale",
    "vec_is_zero",
    "vec_primitive",
]

Vector = tuple[Cyclotomic, ...]


def _entry(x) -> Cyclotomic:
    c = as_cyclotomic(x)
    if c is NotImplemented:
        raise TypeError(f"cannot use {type(x).__name__} as a matrix entry")
    return c


class CycMatrix:
    """Immutable rows x cols matrix of Cyclotomic entries."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: Iterable[Iterable]):
        data = tuple(tuple(_entry(x) for x in row) for row in rows)
        if not data or not data[0]:
            raise ValueError("matrix dimensions must be positive")
        if any(len(r) != len(data[0]) for r in data):
            raise ValueError("ragged rows")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "rows", len(data))
        object.__setattr__(self, "cols", len(data[0]))

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("CycMatrix is immutable")

    @staticmethod
    def identity(n: int) -> "CycMatrix":
        return CycMatrix([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @staticmethod
    def zeros(rows: int, cols: int) -> "CycMatrix":
        return CycMatrix([[ZERO] * cols for _ in range(rows)])

    @staticmethod
    def from_columns(columns: Sequence[Sequence]) -> "CycMatrix":
        cols = [tuple(_entry(x) for x in c) for c in columns]
        return CycMatrix([[cols[j][i] for j in range(len(cols))] for i in range(len(cols[0]))])

    def __getitem__(self, ij: tuple[int, int]) -> Cyclotomic:
        i, j = ij
        return self.data[i][j]

    def row(self, i: int) -> Vector:
        return self.data[i]

    def column(self, j: int) -> Vector:
        return tuple(self.data[i][j] for i in range(self.rows))

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CycMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        return hash(self.data)

    def __add__(self, other: "CycMatrix") -> "CycMatrix":
        self._same_shape(other)
        return CycMatrix(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.data, other.data)]
        )

    def __sub__(self, other: "CycMatrix") -> "CycMatrix":
        self._same_shape(other)
        return CycMatrix(
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.data, other.data)]
        )

    def __neg__(self) -> "CycMatrix":
        return CycMatrix([[-a for a in row] for row in self.data])

    def __mul__(self, other):
        if isinstance(other, CycMatrix):
            if self.cols != other.rows:
                raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
            bt = other.transpose().data
            out = []
            for arow in self.data:
                orow = []
                for bcol in bt:
                    s = ZERO
                    for a, b in zip(arow, bcol):
                        if a and b:
                            s = s + a * b
                    orow.append(s)
                out.append(orow)
            return CycMatrix(out)
        c = as_cyclotomic(other)
        if c is NotImplemented:
            return NotImplemented
        return CycMatrix([[c * a for a in row] for row in self.data])

    def __rmul__(self, other):
        c = as_cyclotomic(other)
        if c is NotImplemented:
            return NotImplemented
        return CycMatrix([[c * a for a in row] for row in self.data])

    def matvec(self, v: Sequence) -> Vector:
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        vv = [_entry(x) for x in v]
        out = []
        for row in self.data:
            s = ZERO
            for a, x in zip(row, vv):
                if a and x:
                    s = s + a * x
            out.append(s)
        return tuple(out)

    def transpose(self) -> "CycMatrix":
        return CycMatrix([[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def conj_transpose(self) -> "CycMatrix":
        return CycMatrix(
            [[self.data[i][j].conjugate() for i in range(self.rows)] for j in range(self.cols)]
        )

    def trace(self) -> Cyclotomic:
        if self.rows != self.cols:
            raise ValueError("trace needs a square matrix")
        t = ZERO
        for i in range(self.rows):
            t = t + self.data[i][i]
        return t

    def is_zero(self) -> bool:
        return not any(any(row) for row in self.data)

    def is_identity(self) -> bool:
        return self == CycMatrix.identity(self.rows) if self.rows == self.cols else False

    def is_unitary(self) -> bool:
        return self.rows == self.cols and (self.conj_transpose() * self).is_identity()

    def kron(self, other: "CycMatrix") -> "CycMatrix":
        """Tensor product; self is the high-order factor."""
        out = []
        for i in range(self.rows):
            for k in range(other.rows):
                row = []
                for j in range(self.cols):
                    a = self.data[i][j]
                    if a:
                        row.extend(a * b for b in other.data[k])
                    else:
                        row.extend([ZERO] * other.cols)
                out.append(row)
        return CycMatrix(out)

    def direct_sum(self, other: "CycMatrix") -> "CycMatrix":
        out = []
        for i in range(self.rows):
            out.append(list(self.data[i]) + [ZERO] * other.cols)
        for i in range(other.rows):
            out.append([ZERO] * self.cols + list(other.data[i]))
        return CycMatrix(out)

    def inverse(self) -> "CycMatrix":
        if self.rows != self.cols:
            raise ValueError("inverse needs a square matrix")
        n = self.rows
        aug = [list(self.data[i]) + [ONE if j == i else ZERO for j in range(n)] for i in range(n)]
        for c in range(n):
            p = next((r for r in range(c, n) if aug[r][c]), None)
            if p is None:
                raise ZeroDivisionError("matrix is singular")
            aug[c], aug[p] = aug[p], aug[c]
            inv = aug[c][c].inverse()
            aug[c] = [x * inv for x in aug[c]]
            for r in range(n):
                if r != c and aug[r][c]:
                    f = aug[r][c]
                    aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
        return CycMatrix([row[n:] for row in aug])

    def rank(self) -> int:
        sp = EchelonSpace(self.cols)
        for row in self.data:
            sp.add(row)
        return sp.rank

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def field_order(self) -> int:
        """Smallest cyclotomic order containing every entry."""
        n = 1
        for row in self.data:
            for x in row:
                n = lcm(n, x.order)
        return n

    def to_json(self) -> list:
        return [[x.to_json() for x in row] for row in self.data]

    def __repr__(self) -> str:
        body = "\n ".join("[" + ", ".join(map(repr, row)) + "]" for row in self.data)
        return f"CycMatrix(\n {body})"

    def _same_shape(self, other: "CycMatrix"):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")


# -- vector helpers -------------------------------------------------------


def vec_inner(x: Sequence, y: Sequence) -> Cyclotomic:
    """Standard inner product, conjugate-linear in the first argument."""
    if len(x) != len(y):
        raise ValueError("dimension mismatch")
    s = ZERO
    for a, b in zip(x, y):
        a = _entry(a)
        b = _entry(b)
        if a and b:
            s = s + a.conjugate() * b
    return s


def vec_add(x: Sequence, y: Sequence) -> Vector:
    return tuple(_entry(a) + _entry(b) for a, b in zip(x, y))


def vec_sub(x: Sequence, y: Sequence) -> Vector:
    return tuple(_entry(a) - _entry(b) for a, b in zip(x, y))


def vec_scale(c, x: Sequence) -> Vector:
    c = _entry(c)
    return tuple(c * _entry(a) for a in x)


def vec_is_zero(x: Sequence) -> bool:
    return not any(x)


def vec_primitive(x: Sequence) -> Vector:
    """Scale by a positive rational so coefficients are integral with content 1."""
    den = 1
    for a in x:
        for f in _entry(a).coeffs:
            den = lcm(den, f.denominator)
    num = 0
    for a in x:
        for f in _entry(a).coeffs:
            num = gcd_int(num, abs(f.numerator * (den // f.denominator)))
    if num == 0:
        return tuple(_entry(a) for a in x)
    return vec_scale(Fraction(den, num), x)


def gcd_int(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


class EchelonSpace:
    """A subspace kept in reduced echelon form; supports membership tests."""

    def __init__(self, dim: int):
        self.dim = dim
        self.pivots: list[int] = []
        self.rows: list[Vector] = []

    def _reduce(self, v: Sequence) -> list[Cyclotomic]:
        w = [_entry(x) for x in v]
        for p, row in zip(self.pivots, self.rows):
            if w[p]:
                f = w[p]
                w = [a - f * b for a, b in zip(w, row)]
        return w

    def add(self, v: Sequence) -> bool:
        """Insert v; returns True when it enlarged the space."""
        w = self._reduce(v)
        p = next((i for i, x in enumerate(w) if x), None)
        if p is None:
            return False
        inv = w[p].inverse()
        w = [x * inv for x in w]
        # back-substitute into existing rows to keep reduced form
        for k in range(len(self.rows)):
            if self.rows[k][p]:
                f = self.rows[k][p]
                self.rows[k] = tuple(a - f * b for a, b in zip(self.rows[k], w))
        self.rows.append(tuple(w))
        self.pivots.append(p)
        order = sorted(range(len(self.pivots)), key=lambda i: self.pivots[i])
        self.pivots = [self.pivots[i] for i in order]
        self.rows = [self.rows[i] for i in order]
        return True

    def contains(self, v: Sequence) -> bool:
        return not any(self._reduce(v))

    @property
    def rank(self) -> int:
        return len(self.rows)

    def basis(self) -> list[Vector]:
        return list(self.rows)
