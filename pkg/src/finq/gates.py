"""Exact quantum-gate matrices and BFS closure of finitely generated matrix
groups over cyclotomic fields.

Closure elements are counted as literal matrices: two elements differing by
a global phase are distinct.  Reports also carry the order of the scalar
(phase) subgroup actually present, so the phase-quotient count is available
for reconciliation with other conventions.

The closure engine works at a common cyclotomic order fixed up-front as the
lcm of the generator entry orders.  Each matrix is stored as an int64
coefficient tensor plus one positive denominator, normalized by content,
which doubles as the canonical hash key; multiplication is a vectorized
contraction with the field's structure tensor.  Coefficient growth is
guarded, so results are exact or the run fails loudly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

import numpy as np

from finq.cyclotomic import (
    Cyclotomic,
    ONE,
    ZERO,
    _reduction_rows,
    euler_phi,
    root_of_unity,
    sqrt_two,
)
from finq.errors import CapExceededError, InputError, InvariantError
from finq.linalg import CycMatrix

__all__ = [
    "GateMatrix",
    "MatrixGroupClosure",
    "hadamard",
    "phase_gate",
    "cnot",
    "kron",
    "place_gate",
    "matrix_group_closure",
    "two_qubit_generator_sets",
    "closure_survey",
    "DEFAULT_GATE_CAP",
]

DEFAULT_GATE_CAP = 100_000
_COEFF_GUARD = 1 << 27  # keeps int64 contractions exact


@dataclass(frozen=True)
class GateMatrix:
    """A unitary matrix of power-of-two dimension over a cyclotomic field."""

    matrix: CycMatrix

    def __post_init__(self):
        m = self.matrix
        if m.rows != m.cols or m.rows & (m.rows - 1):
            raise InputError("gate matrices must be square with power-of-two size")
        if not m.is_unitary():
            raise InputError("gate matrix is not unitary")

    @property
    def dim(self) -> int:
        return self.matrix.rows

    @property
    def wires(self) -> int:
        return self.dim.bit_length() - 1

    def field_order(self) -> int:
        return self.matrix.field_order()

    def __mul__(self, other: "GateMatrix") -> "GateMatrix":
        return GateMatrix(self.matrix * other.matrix)


def hadamard() -> GateMatrix:
    """The 2x2 Hadamard gate with 1/sqrt(2) = (z8 - z8^3)/2 exactly."""
    s = sqrt_two() / 2
    return GateMatrix(CycMatrix([[s, s], [s, -1 * s]]))


def phase_gate(theta: Fraction | str | int) -> GateMatrix:
    """diag(1, zeta) for the exact root of unity at a rational turn theta = p/q.

    Only rational angles are representable exactly; anything else is
    rejected.
    """
    if isinstance(theta, float):
        raise InputError("irrational phase angles are not representable exactly")
    try:
        t = Fraction(theta)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad phase angle {theta!r}: {exc}") from None
    q = t.denominator
    p = t.numerator % q
    return GateMatrix(CycMatrix([[ONE, ZERO], [ZERO, root_of_unity(q, p)]]))


def cnot(wires: int = 2, control: int = 0, target: int = 1) -> GateMatrix:
    """Controlled NOT on a register; wire 0 is the high-order tensor factor."""
    if control == target or not (0 <= control < wires) or not (0 <= target < wires):
        raise InputError("control and target must be distinct wires in range")
    dim = 1 << wires
    rows = []
    for i in range(dim):
        j = i
        if (i >> (wires - 1 - control)) & 1:
            j = i ^ (1 << (wires - 1 - target))
        rows.append([ONE if c == j else ZERO for c in range(dim)])
    return GateMatrix(CycMatrix(rows))


def kron(a: GateMatrix, b: GateMatrix) -> GateMatrix:
    """Tensor product with the first factor on the high-order wires."""
    return GateMatrix(a.matrix.kron(b.matrix))


def place_gate(gate: GateMatrix, wire: int, wires: int) -> GateMatrix:
    """Embed a gate into a register, identity on the remaining wires."""
    if wire < 0 or wire + gate.wires > wires:
        raise InputError("gate placement is out of range")
    left = 1 << wire
    right = 1 << (wires - wire - gate.wires)
    m = gate.matrix
    if left > 1:
        m = CycMatrix.identity(left).kron(m)
    if right > 1:
        m = m.kron(CycMatrix.identity(right))
    return GateMatrix(m)


# -- closure engine ----------------------------------------------------------


class _FieldData:
    """Structure constants of Z[zeta_n] needed for vectorized arithmetic."""

    def __init__(self, n: int):
        self.n = n
        self.L = euler_phi(n)
        rows = _reduction_rows(n)
        L = self.L
        T = np.zeros((L, L, L), dtype=np.int64)
        for p in range(L):
            for q in range(L):
                e = (p + q) % n
                T[p, q, :] = rows[e]
        self.mul_tensor = T
        C = np.zeros((L, L), dtype=np.int64)
        for p in range(L):
            C[p, :] = rows[(n - p) % n]
        self.conj_matrix = C


def _to_int_tensor(m: CycMatrix, n: int) -> tuple[np.ndarray, int]:
    """Entries as an integer (dim, dim, L) tensor plus a common denominator."""
    L = euler_phi(n)
    den = 1
    lifted = []
    for i in range(m.rows):
        row = []
        for j in range(m.cols):
            cf = m[i, j].lift_coeffs(n)
            row.append(cf)
            for f in cf:
                den = lcm(den, f.denominator)
        lifted.append(row)
    arr = np.zeros((m.rows, m.cols, L), dtype=np.int64)
    for i in range(m.rows):
        for j in range(m.cols):
            for k, f in enumerate(lifted[i][j]):
                arr[i, j, k] = f.numerator * (den // f.denominator)
    return _normalize(arr, den)


def _normalize(arr: np.ndarray, den: int) -> tuple[np.ndarray, int]:
    g = int(np.gcd.reduce(np.abs(arr), axis=None))
    g = gcd(g, den)
    if g > 1:
        arr = arr // g
        den //= g
    return arr, den


def _from_int_tensor(arr: np.ndarray, den: int, n: int) -> CycMatrix:
    dim = arr.shape[0]
    rows = []
    for i in range(dim):
        row = []
        for j in range(dim):
            v = ZERO
            for k, c in enumerate(arr[i, j]):
                if c:
                    v = v + Fraction(int(c), den) * root_of_unity(n, k)
            row.append(v)
        rows.append(row)
    return CycMatrix(rows)


class _ClosureEngine:
    """Breadth-first closure over the integer-tensor representation."""

    def __init__(self, generators: Sequence[CycMatrix], cap: int):
        if not generators:
            raise InputError("need at least one generator")
        dim = generators[0].rows
        if any(g.shape != (dim, dim) for g in generators):
            raise InputError("generators must share one dimension")
        n = 1
        for g in generators:
            n = lcm(n, g.field_order())
        self.field = _FieldData(n)
        self.dim = dim
        self.cap = cap
        pairs = [_to_int_tensor(g, n) for g in generators]
        # deduplicate generators, keep deterministic order by canonical key
        seen = {}
        for arr, den in pairs:
            seen.setdefault(self._key(arr, den), (arr, den))
        self.gen_pairs = [seen[k] for k in sorted(seen)]
        for arr, den in self.gen_pairs:
            if not self._is_unitary(arr, den):
                raise InputError("generators must be unitary")

    @staticmethod
    def _key(arr: np.ndarray, den: int) -> bytes:
        return den.to_bytes(8, "little") + arr.tobytes()

    def _conj_transpose(self, arr: np.ndarray) -> np.ndarray:
        return np.einsum("ijp,pq->jiq", arr, self.field.conj_matrix)

    def _mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if max(int(np.abs(a).max()), int(np.abs(b).max())) > _COEFF_GUARD:
            raise InvariantError("coefficient growth exceeded the exact-arithmetic guard")
        return np.einsum("ilp,ljq,pqm->ijm", a, b, self.field.mul_tensor)

    def _mul_batch(self, batch: np.ndarray, b: np.ndarray) -> np.ndarray:
        if max(int(np.abs(batch).max()), int(np.abs(b).max())) > _COEFF_GUARD:
            raise InvariantError("coefficient growth exceeded the exact-arithmetic guard")
        return np.einsum("bilp,ljq,pqm->bijm", batch, b, self.field.mul_tensor)

    def _is_unitary(self, arr: np.ndarray, den: int) -> bool:
        prod = self._mul(self._conj_transpose(arr), arr)
        ident = np.zeros_like(prod)
        for i in range(self.dim):
            ident[i, i, 0] = den * den
        return bool((prod == ident).all())

    def run(self) -> None:
        L = self.field.L
        ident = np.zeros((self.dim, self.dim, L), dtype=np.int64)
        for i in range(self.dim):
            ident[i, i, 0] = 1
        mats: list[np.ndarray] = [ident]
        dens: list[int] = [1]
        index: dict[bytes, int] = {self._key(ident, 1): 0}
        frontier = [0]
        growth = [1]
        self.complete = True
        while frontier:
            new_ids: list[int] = []
            batch = np.stack([mats[i] for i in frontier])
            batch_dens = [dens[i] for i in frontier]
            for garr, gden in self.gen_pairs:
                prods = self._mul_batch(batch, garr)
                for b in range(len(frontier)):
                    arr, den = _normalize(prods[b], batch_dens[b] * gden)
                    key = self._key(arr, den)
                    if key not in index:
                        index[key] = len(mats)
                        mats.append(arr)
                        dens.append(den)
                        new_ids.append(len(mats) - 1)
            if len(mats) > self.cap:
                self.complete = False
                growth.append(len(new_ids))
                break
            if new_ids:
                growth.append(len(new_ids))
            frontier = new_ids
        self.mats = mats
        self.dens = dens
        self.index = index
        self.growth = growth

    # -- queries on the finished closure ---------------------------------

    def scalar_count(self) -> int:
        count = 0
        for arr in self.mats:
            off = arr.copy()
            for i in range(self.dim):
                off[i, i, :] = 0
            if off.any():
                continue
            diag = arr[0, 0]
            if all((arr[i, i] == diag).all() for i in range(1, self.dim)):
                count += 1
        return count

    def contains_product(self, i: int, j: int) -> bool:
        arr, den = _normalize(self._mul(self.mats[i], self.mats[j]),
                              self.dens[i] * self.dens[j])
        return self._key(arr, den) in self.index

    def inverse_id(self, i: int) -> int | None:
        arr, den = _normalize(self._conj_transpose(self.mats[i]), self.dens[i])
        return self.index.get(self._key(arr, den))

    def element(self, i: int) -> CycMatrix:
        return _from_int_tensor(self.mats[i], self.dens[i], self.field.n)

    def element_order(self, i: int) -> int:
        ident_key = self._key(self.mats[0], 1)
        arr, den = self.mats[i], self.dens[i]
        cur, cden = arr, den
        k = 1
        while self._key(cur, cden) != ident_key:
            cur, cden = _normalize(self._mul(cur, arr), cden * den)
            k += 1
            if k > len(self.mats):
                raise InvariantError("element order exceeded the group order")
        return k

    def conjugacy_partition(self) -> list[list[int]]:
        n = len(self.mats)
        stacked = np.stack(self.mats)
        dens_arr = self.dens
        parent = list(range(n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a: int, b: int):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

        for garr, gden in self.gen_pairs:
            ginv = self._conj_transpose(garr)
            left = np.einsum("ilp,bljq,pqm->bijm", ginv, stacked, self.field.mul_tensor)
            conj = np.einsum("bilp,ljq,pqm->bijm", left, garr, self.field.mul_tensor)
            for b in range(n):
                arr, den = _normalize(conj[b], dens_arr[b] * gden * gden)
                j = self.index.get(self._key(arr, den))
                if j is None:
                    raise InvariantError("conjugation left the closed set")
                union(b, j)
        groups: dict[int, list[int]] = {}
        for x in range(n):
            groups.setdefault(find(x), []).append(x)
        return sorted(groups.values(), key=lambda cl: (cl[0] != 0, len(cl), cl[0]))


@dataclass
class MatrixGroupClosure:
    """Result of enumerating a finitely generated matrix group."""

    order: int | None
    complete: bool
    growth: tuple[int, ...]
    field_order: int
    dim: int
    scalar_order: int | None
    phase_quotient_order: int | None
    _engine: _ClosureEngine = field(repr=False)

    @property
    def element_count(self) -> int:
        return len(self._engine.mats)

    def element(self, i: int) -> CycMatrix:
        return self._engine.element(i)

    def contains(self, m: CycMatrix) -> bool:
        arr, den = _to_int_tensor(m, self.field_order)
        return self._engine._key(arr, den) in self._engine.index

    def self_validate(self, samples: int = 200, seed: int = 0) -> bool:
        """Closure under sampled products and under inversion of every element."""
        if not self.complete:
            raise InvariantError("cannot validate an incomplete closure")
        eng = self._engine
        n = len(eng.mats)
        rng = random.Random(seed)
        for _ in range(samples):
            i, j = rng.randrange(n), rng.randrange(n)
            if not eng.contains_product(i, j):
                return False
        for i in range(n):
            if eng.inverse_id(i) is None:
                return False
        return True

    def structure(self) -> dict:
        """Conjugacy class count and group exponent (complete closures only)."""
        if not self.complete:
            raise InvariantError("cannot analyze an incomplete closure")
        classes = self._engine.conjugacy_partition()
        exponent = 1
        for cl in classes:
            exponent = lcm(exponent, self._engine.element_order(cl[0]))
        return {
            "class_count": len(classes),
            "class_sizes": sorted(len(c) for c in classes),
            "exponent": exponent,
        }


def matrix_group_closure(generators: Sequence[GateMatrix | CycMatrix],
                         cap: int = DEFAULT_GATE_CAP) -> MatrixGroupClosure:
    """BFS closure of the group generated by unitary matrices.

    Returns the exact literal order when it is at most `cap`, otherwise an
    incomplete result carrying the growth curve per BFS depth.
    """
    mats = [g.matrix if isinstance(g, GateMatrix) else g for g in generators]
    engine = _ClosureEngine(mats, cap)
    engine.run()
    n = len(engine.mats)
    if engine.complete:
        scalars = engine.scalar_count()
        if n % scalars:
            raise InvariantError("scalar subgroup size does not divide the order")
        return MatrixGroupClosure(
            order=n,
            complete=True,
            growth=tuple(engine.growth),
            field_order=engine.field.n,
            dim=engine.dim,
            scalar_order=scalars,
            phase_quotient_order=n // scalars,
            _engine=engine,
        )
    return MatrixGroupClosure(
        order=None,
        complete=False,
        growth=tuple(engine.growth),
        field_order=engine.field.n,
        dim=engine.dim,
        scalar_order=None,
        phase_quotient_order=None,
        _engine=engine,
    )


# -- two-qubit generator conventions ----------------------------------------


def two_qubit_generator_sets(theta: Fraction = Fraction(1, 4)) -> dict[str, list[GateMatrix]]:
    """Documented candidate conventions for placing the one-qubit gates on a
    two-qubit register.

    The tensor-product conventions place the gates on wires; "broadcast"
    applies the same gate to both wires at once.  "direct-sum" composes two
    independent one-qubit registers as a 4-dimensional direct sum instead of
    a tensor product (the controlled-NOT matrix is exactly I + X as a direct
    sum, so it stays available there too).
    """
    h = hadamard()
    r = phase_gate(theta)
    cx = cnot()
    i2 = GateMatrix(CycMatrix.identity(2))
    x = GateMatrix(CycMatrix([[ZERO, ONE], [ONE, ZERO]]))
    sets = {
        "both-wires": [kron(h, i2), kron(i2, h), kron(r, i2), kron(i2, r), cx],
        "h-first-r-second": [kron(h, i2), kron(i2, r), cx],
        "h-second-r-first": [kron(i2, h), kron(r, i2), cx],
        "first-wire": [kron(h, i2), kron(r, i2), cx],
        "second-wire": [kron(i2, h), kron(i2, r), cx],
        "broadcast": [kron(h, h), kron(r, r), cx],
        "direct-sum": [
            GateMatrix(h.matrix.direct_sum(CycMatrix.identity(2))),
            GateMatrix(CycMatrix.identity(2).direct_sum(h.matrix)),
            GateMatrix(r.matrix.direct_sum(CycMatrix.identity(2))),
            GateMatrix(CycMatrix.identity(2).direct_sum(r.matrix)),
            GateMatrix(CycMatrix.identity(2).direct_sum(x.matrix)),  # == CNOT
        ],
    }
    return sets


def closure_survey(theta: Fraction = Fraction(1, 4), cap: int = DEFAULT_GATE_CAP,
                   expected_order: int | None = 36864) -> dict:
    """Run every documented two-qubit convention plus the one-qubit closure
    and report which convention (if any) hits the expected order."""
    one_qubit = matrix_group_closure([hadamard(), phase_gate(theta)], cap=cap)
    report: dict = {
        "theta": str(theta),
        "one_qubit_order": one_qubit.order,
        "expected_order": expected_order,
        "conventions": {},
    }
    matches = []
    for name, gens in two_qubit_generator_sets(theta).items():
        cl = matrix_group_closure(gens, cap=cap)
        entry = {
            "order": cl.order,
            "complete": cl.complete,
            "scalar_order": cl.scalar_order,
            "order_mod_phases": cl.phase_quotient_order,
        }
        if expected_order is not None:
            entry["matches_expected"] = cl.order == expected_order
            if cl.order == expected_order:
                matches.append(name)
        report["conventions"][name] = entry
    report["matching_conventions"] = matches
    if one_qubit.order is not None and expected_order is not None:
        report["expected_is_square_of_one_qubit"] = (
            one_qubit.order * one_qubit.order == expected_order
        )
    return report
