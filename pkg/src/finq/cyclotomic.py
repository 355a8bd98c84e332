"""Exact arithmetic in cyclotomic fields Q(zeta_n).

A value is stored as a coefficient vector over the power basis
{zeta_n^0, ..., zeta_n^{phi(n)-1}}, reduced modulo the n-th cyclotomic
polynomial, with n shrunk to the smallest cyclotomic field containing the
value.  n == 1 means the value is rational.  Canonical orders are therefore
1 and integers >= 3 with n != 2 (mod 4).  Equal values have identical field
contents, so Cyclotomic is hashable and safe to use as a dict key.

Multiplication of roots follows exponent addition mod n and complex
conjugation sends zeta^k to zeta^(n-k); everything else is linear algebra
over exact rationals.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cache
from math import gcd, lcm
import cmath

__all__ = [
    "Cyclotomic",
    "cyclotomic_polynomial",
    "root_of_unity",
    "negative_unit",
    "sqrt_two",
    "euler_phi",
    "as_cyclotomic",
    "ZERO",
    "ONE",
]

Rational = int | Fraction

_F0 = Fraction(0)
_F1 = Fraction(1)


def _divisors(n: int) -> list[int]:
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


def _poly_div_exact(num: list[int], den: tuple[int, ...]) -> list[int]:
    # den is monic; division over Z must be exact.
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        out[i - dd] = c
        if c:
            for j, dj in enumerate(den):
                num[i - dd + j] -= c * dj
    if any(num[:dd]):
        raise ArithmeticError("inexact polynomial division")
    return out


@cache
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial, constant first."""
    if n < 1:
        raise ValueError("order must be positive")
    if n == 1:
        return (-1, 1)
    num = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in _divisors(n):
        if d < n:
            num = _poly_div_exact(num, cyclotomic_polynomial(d))
    return tuple(num)


@cache
def euler_phi(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


@cache
def _reduction_rows(n: int) -> tuple[tuple[int, ...], ...]:
    """Row e holds the basis coefficients of x^e mod Phi_n, for 0 <= e < n."""
    L = euler_phi(n)
    phi = cyclotomic_polynomial(n)
    rows: list[tuple[int, ...]] = []
    for e in range(L):
        rows.append(tuple(1 if i == e else 0 for i in range(L)))
    cur = list(rows[L - 1]) if L > 0 else []
    for _ in range(L, n):
        # multiply by x, then eliminate the x^L term using Phi_n (monic).
        top = cur[L - 1]
        nxt = [0] + cur[:-1]
        if top:
            for i in range(L):
                nxt[i] -= top * phi[i]
        rows.append(tuple(nxt))
        cur = nxt
    return tuple(rows)


@cache
def _lift_rows(n: int, m: int) -> tuple[tuple[int, ...], ...]:
    """Basis vectors of order-n powers re-expressed in the order-m basis (n | m)."""
    rows_m = _reduction_rows(m)
    step = m // n
    return tuple(rows_m[i * step] for i in range(euler_phi(n)))


def _subfield_candidates(n: int) -> list[int]:
    # proper divisors that can be conductors; 1 is handled separately and
    # d == 2 (mod 4) never is a conductor since Q(zeta_d) = Q(zeta_{d/2}).
    return [d for d in _divisors(n) if 3 <= d < n and d % 4 != 2]


@cache
def _demotion(n: int, d: int):
    """Solver data for re-expressing order-n vectors in the order-d basis."""
    cols = _lift_rows(d, n)  # basis of Q(zeta_d) inside order-n coordinates
    Ln, Ld = euler_phi(n), euler_phi(d)
    # Gaussian elimination to find Ld pivot rows of the Ln x Ld column matrix.
    mat = [[Fraction(cols[j][i]) for j in range(Ld)] for i in range(Ln)]
    pivots: list[int] = []
    work = [row[:] for row in mat]
    col = 0
    for r in range(Ln):
        if col >= Ld:
            break
        if work[r][col] == 0:
            for rr in range(r + 1, Ln):
                if work[rr][col] != 0:
                    work[r], work[rr] = work[rr], work[r]
                    break
        # rows were swapped; track original index by re-scanning instead
        col += 1
    # simpler and robust: scan rows greedily for independence
    pivots = []
    basis: list[list[Fraction]] = []
    for r in range(Ln):
        v = mat[r][:]
        for brow in basis:
            piv = next(i for i, x in enumerate(brow) if x != 0)
            if v[piv] != 0:
                f = v[piv] / brow[piv]
                for i in range(Ld):
                    v[i] -= f * brow[i]
        if any(v):
            basis.append(v)
            pivots.append(r)
        if len(pivots) == Ld:
            break
    if len(pivots) < Ld:
        raise ArithmeticError("demotion basis is rank deficient")
    square = [[mat[r][j] for j in range(Ld)] for r in pivots]
    inv = _invert_fraction_matrix(square)
    return tuple(pivots), inv, cols


def _invert_fraction_matrix(rows: list[list[Fraction]]) -> tuple[tuple[Fraction, ...], ...]:
    k = len(rows)
    aug = [list(rows[i]) + [Fraction(int(i == j)) for j in range(k)] for i in range(k)]
    for c in range(k):
        p = next(r for r in range(c, k) if aug[r][c] != 0)
        aug[c], aug[p] = aug[p], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for r in range(k):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return tuple(tuple(row[k:]) for row in aug)


def _try_demote(n: int, d: int, vec: tuple[Fraction, ...]):
    pivots, inv, cols = _demotion(n, d)
    Ld = euler_phi(d)
    c = [sum(inv[i][j] * vec[pivots[j]] for j in range(Ld)) for i in range(Ld)]
    # verify the remaining coordinates
    Ln = euler_phi(n)
    for i in range(Ln):
        s = _F0
        for j in range(Ld):
            if c[j]:
                s += c[j] * cols[j][i]
        if s != vec[i]:
            return None
    return tuple(c)


def _shrink(order: int, vec: tuple[Fraction, ...]) -> tuple[int, tuple[Fraction, ...]]:
    if order == 1:
        return 1, vec
    if all(x == 0 for x in vec[1:]):
        return 1, (vec[0],)
    for d in _subfield_candidates(order):
        c = _try_demote(order, d, vec)
        if c is not None:
            return d, c
    return order, vec


def _canonical(order: int, poly: list[Fraction]) -> tuple[int, tuple[Fraction, ...]]:
    """Reduce a coefficient-by-exponent list (exponents < 2*order) to canon."""
    n = order
    L = euler_phi(n)
    if len(poly) > n:
        for e in range(n, len(poly)):
            if poly[e]:
                poly[e - n] += poly[e]
        del poly[n:]
    while len(poly) < L:
        poly.append(_F0)
    vec = poly[:L]
    if len(poly) > L:
        rows = _reduction_rows(n)
        for e in range(L, len(poly)):
            ce = poly[e]
            if ce:
                row = rows[e]
                for i in range(L):
                    if row[i]:
                        vec[i] += ce * row[i]
    return _shrink(n, tuple(vec))


class Cyclotomic:
    """An exact element of some cyclotomic field, in canonical form."""

    __slots__ = ("order", "coeffs")

    def __init__(self, value: Rational = 0):
        f = Fraction(value)
        object.__setattr__(self, "order", 1)
        object.__setattr__(self, "coeffs", (f,))

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("Cyclotomic values are immutable")

    @staticmethod
    def _make(order: int, coeffs: tuple[Fraction, ...]) -> "Cyclotomic":
        out = object.__new__(Cyclotomic)
        object.__setattr__(out, "order", order)
        object.__setattr__(out, "coeffs", coeffs)
        return out

    @staticmethod
    def root(n: int, k: int = 1) -> "Cyclotomic":
        """The root of unity zeta_n^k in canonical form."""
        if n < 1:
            raise ValueError("root degree must be a positive integer")
        k %= n
        poly = [_F0] * (k + 1)
        poly[k] = _F1
        return Cyclotomic._make(*_canonical(n, poly))

    # -- queries ---------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.order == 1

    def as_fraction(self) -> Fraction:
        if self.order != 1:
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    def rational_or_none(self) -> Fraction | None:
        return self.coeffs[0] if self.order == 1 else None

    def is_real(self) -> bool:
        return self.conjugate() == self

    def __bool__(self) -> bool:
        return self.order != 1 or self.coeffs[0] != 0

    # -- ring/field operations -------------------------------------------

    def _lift(self, m: int) -> list[Fraction]:
        if m == self.order:
            return list(self.coeffs)
        rows = _lift_rows(self.order, m)
        out = [_F0] * euler_phi(m)
        for i, ci in enumerate(self.coeffs):
            if ci:
                row = rows[i]
                for j in range(len(out)):
                    if row[j]:
                        out[j] += ci * row[j]
        return out

    def __add__(self, other) -> "Cyclotomic":
        other = as_cyclotomic(other)
        if other is NotImplemented:
            return NotImplemented
        if self.order == 1 and other.order == 1:
            return Cyclotomic(self.coeffs[0] + other.coeffs[0])
        m = lcm(self.order, other.order)
        a = self._lift(m)
        b = other._lift(m)
        return Cyclotomic._make(*_canonical(m, [x + y for x, y in zip(a, b)]))

    __radd__ = __add__

    def __neg__(self) -> "Cyclotomic":
        return Cyclotomic._make(self.order, tuple(-x for x in self.coeffs))

    def __sub__(self, other) -> "Cyclotomic":
        other = as_cyclotomic(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Cyclotomic":
        other = as_cyclotomic(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "Cyclotomic":
        other = as_cyclotomic(other)
        if other is NotImplemented:
            return NotImplemented
        if self.order == 1:
            c = self.coeffs[0]
            if other.order == 1:
                return Cyclotomic(c * other.coeffs[0])
            if c == 0:
                return ZERO
            return Cyclotomic._make(other.order, tuple(c * x for x in other.coeffs))
        if other.order == 1:
            c = other.coeffs[0]
            if c == 0:
                return ZERO
            return Cyclotomic._make(self.order, tuple(c * x for x in self.coeffs))
        m = lcm(self.order, other.order)
        a = self._lift(m)
        b = other._lift(m)
        prod = [_F0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] += ai * bj
        return Cyclotomic._make(*_canonical(m, prod))

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        if not self:
            raise ZeroDivisionError("cyclotomic division by zero")
        if self.order == 1:
            return Cyclotomic(1 / self.coeffs[0])
        n, L = self.order, len(self.coeffs)
        rows = _reduction_rows(n)
        phi = cyclotomic_polynomial(n)
        # columns of the multiply-by-self operator in the power basis
        cols: list[list[Fraction]] = []
        cur = list(self.coeffs)
        cols.append(cur[:])
        for _ in range(1, L):
            top = cur[L - 1]
            cur = [_F0] + cur[:-1]
            if top:
                for i in range(L):
                    cur[i] -= top * phi[i]
            cols.append(cur[:])
        aug = [[cols[j][i] for j in range(L)] + [_F1 if i == 0 else _F0] for i in range(L)]
        sol = _solve_square(aug, L)
        if sol is None:
            raise ZeroDivisionError("cyclotomic division by zero")
        return Cyclotomic._make(*_canonical(n, sol))

    def __truediv__(self, other) -> "Cyclotomic":
        other = as_cyclotomic(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "Cyclotomic":
        other = as_cyclotomic(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int) -> "Cyclotomic":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "Cyclotomic":
        """Complex conjugation: zeta^k goes to zeta^(n-k)."""
        if self.order == 1:
            return self
        n = self.order
        poly = [_F0] * n
        poly[0] = self.coeffs[0]
        for i in range(1, len(self.coeffs)):
            if self.coeffs[i]:
                poly[n - i] += self.coeffs[i]
        return Cyclotomic._make(*_canonical(n, poly))

    def abs2(self) -> "Cyclotomic":
        """Squared modulus a * conj(a); fixed by conjugation."""
        return self * self.conjugate()

    def promote(self, m: int) -> "Cyclotomic":
        """Assert that the value embeds in Q(zeta_m); the value is unchanged.

        Canonical forms already live at the conductor, so this is a
        validated identity: it rejects m that is not a multiple of the
        canonical order.
        """
        if m < 1 or m % self.order != 0:
            raise ValueError(f"order {m} is not a multiple of {self.order}")
        return self

    def lift_coeffs(self, m: int) -> tuple[Fraction, ...]:
        """Coefficients of the value over the order-m power basis (order | m)."""
        if m % self.order != 0:
            raise ValueError(f"order {m} is not a multiple of {self.order}")
        return tuple(self._lift(m))

    # -- comparisons / hashing -------------------------------------------

    def __eq__(self, other) -> bool:
        other = as_cyclotomic(other)
        if other is NotImplemented:
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def sort_key(self):
        """Deterministic total order on canonical forms (not a numeric order)."""
        return (self.order, tuple((f.numerator, f.denominator) for f in self.coeffs))

    # -- conversions -------------------------------------------------------

    def __complex__(self) -> complex:
        # debug-only float embedding; excluded from all exact contracts
        z = cmath.exp(2j * cmath.pi / self.order)
        return sum(float(c) * z**i for i, c in enumerate(self.coeffs))

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "coeffs": [[str(f.numerator), str(f.denominator)] for f in self.coeffs],
        }

    @staticmethod
    def from_json(obj: dict) -> "Cyclotomic":
        order = int(obj["order"])
        if order < 1:
            raise ValueError("order must be positive")
        poly = [Fraction(int(num), int(den)) for num, den in obj["coeffs"]]
        if len(poly) != euler_phi(order):
            raise ValueError("coefficient vector has wrong length")
        return Cyclotomic._make(*_canonical(order, poly))

    def __repr__(self) -> str:
        if self.order == 1:
            return str(self.coeffs[0])
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                mono = f"z{self.order}" + (f"^{i}" if i > 1 else "")
                if c == 1:
                    parts.append(mono)
                elif c == -1:
                    parts.append(f"-{mono}")
                else:
                    parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ") or "0"


def _solve_square(aug: list[list[Fraction]], k: int) -> list[Fraction] | None:
    for c in range(k):
        p = next((r for r in range(c, k) if aug[r][c] != 0), None)
        if p is None:
            return None
        aug[c], aug[p] = aug[p], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for r in range(k):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [aug[i][k] for i in range(k)]


def as_cyclotomic(x) -> "Cyclotomic":
    if isinstance(x, Cyclotomic):
        return x
    if isinstance(x, (int, Fraction)):
        return Cyclotomic(x)
    return NotImplemented


def root_of_unity(n: int, k: int = 1) -> Cyclotomic:
    """Canonical form of zeta_n^k."""
    return Cyclotomic.root(n, k)


def negative_unit(n: int) -> Cyclotomic:
    """Build -1 from roots of unity of degree n (n >= 2).

    Even n uses zeta^(n/2); odd n uses the sum zeta + ... + zeta^(n-1).
    """
    if n < 2:
        raise ValueError("need a root degree of at least 2")
    if n % 2 == 0:
        return Cyclotomic.root(n, n // 2)
    out = ZERO
    for k in range(1, n):
        out = out + Cyclotomic.root(n, k)
    return out


def sqrt_two() -> Cyclotomic:
    """The square root of 2 as zeta_8 - zeta_8^3 (its square is exactly 2)."""
    return Cyclotomic.root(8, 1) - Cyclotomic.root(8, 3)


ZERO = Cyclotomic(0)
ONE = Cyclotomic(1)
