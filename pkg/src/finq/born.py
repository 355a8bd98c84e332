"""Born-rule observables on exact state vectors.

States are never normalized; the probability is always the full projective
ratio |<phi|psi>|^2 / (<phi|phi><psi|psi>), which keeps every computation
inside the cyclotomic field.  For natural-number states in the permutation
basis and their projections into invariant components the results are
rational, and the rational-returning entry points assert that.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from finq.cyclotomic import Cyclotomic, ONE, ZERO, as_cyclotomic
from finq.errors import ComponentInvisibleError, InputError, InvariantError
from finq.linalg import CycMatrix, vec_inner, vec_is_zero

__all__ = [
    "BasisTag",
    "StateVec",
    "PERMUTATION_BASIS",
    "QUANTUM_BASIS",
    "component_basis",
    "quantum_basis",
    "inner_standard",
    "tagged_inner",
    "born_ratio",
    "born_probability",
    "born_symmetric_ratio",
    "born_symmetric",
    "completeness_check",
    "project_component",
    "born_in_component",
    "interference_search",
]


@dataclass(frozen=True)
class BasisTag:
    """Labels the coordinate system of a StateVec.

    kind "permutation": coordinates over the permuted point set.
    kind "component": still permutation coordinates, but the vector lies in
    invariant component `index`.
    kind "quantum": coordinates over the (orthogonal, unnormalized) columns
    of a block-diagonalizing transform; `weights` holds the squared column
    norms that enter the inner product.
    """

    kind: str
    index: int | None = None
    weights: tuple[Fraction, ...] | None = None


PERMUTATION_BASIS = BasisTag("permutation")
QUANTUM_BASIS = BasisTag("quantum")  # prefer quantum_basis(weights) when norms differ


def component_basis(index: int) -> BasisTag:
    return BasisTag("component", index=index)


def quantum_basis(weights: Sequence[Fraction]) -> BasisTag:
    return BasisTag("quantum", weights=tuple(Fraction(w) for w in weights))


@dataclass(frozen=True)
class StateVec:
    """A vector of exact amplitudes together with its basis tag."""

    entries: tuple[Cyclotomic, ...]
    basis: BasisTag = PERMUTATION_BASIS

    @staticmethod
    def natural(values: Iterable[int]) -> "StateVec":
        vals = list(values)
        if any((not isinstance(v, int)) or v < 0 for v in vals):
            raise InputError("natural states need nonnegative integer entries")
        return StateVec(tuple(Cyclotomic(v) for v in vals), PERMUTATION_BASIS)

    @staticmethod
    def of(values: Iterable, basis: BasisTag = PERMUTATION_BASIS) -> "StateVec":
        out = []
        for v in values:
            c = as_cyclotomic(v)
            if c is NotImplemented:
                raise InputError(f"bad state entry {v!r}")
            out.append(c)
        return StateVec(tuple(out), basis)

    @property
    def dim(self) -> int:
        return len(self.entries)

    def is_zero(self) -> bool:
        return vec_is_zero(self.entries)

    def is_natural(self) -> bool:
        return self.basis.kind == "permutation" and all(
            (f := x.rational_or_none()) is not None and f.denominator == 1 and f >= 0
            for x in self.entries
        )

    def __iter__(self):
        return iter(self.entries)


def _require_compatible(x: StateVec, y: StateVec):
    if x.dim != y.dim:
        raise InputError("state dimensions differ")
    if x.basis != y.basis:
        raise InputError("states live in different bases")


def inner_standard(x: StateVec, y: StateVec) -> Cyclotomic:
    """Sum of conj(x_i) * y_i (conjugate-linear in the first slot)."""
    if x.dim != y.dim:
        raise InputError("state dimensions differ")
    return vec_inner(x.entries, y.entries)


def tagged_inner(x: StateVec, y: StateVec) -> Cyclotomic:
    """The inner product appropriate to the states' shared basis."""
    _require_compatible(x, y)
    if x.basis.kind == "quantum" and x.basis.weights is not None:
        if len(x.basis.weights) != x.dim:
            raise InputError("weight vector does not match the dimension")
        s = ZERO
        for w, a, b in zip(x.basis.weights, x.entries, y.entries):
            if a and b:
                s = s + w * (a.conjugate() * b)
        return s
    return vec_inner(x.entries, y.entries)


def _require_nonzero(*states: StateVec):
    for s in states:
        if s.is_zero():
            raise InputError("the Born rule is undefined on the zero vector")


def born_ratio(phi: StateVec, psi: StateVec) -> Cyclotomic:
    """|<phi|psi>|^2 / (<phi|phi><psi|psi>) as an exact field element."""
    _require_compatible(phi, psi)
    _require_nonzero(phi, psi)
    ip = tagged_inner(phi, psi)
    num = ip.abs2()
    den = tagged_inner(phi, phi) * tagged_inner(psi, psi)
    return num / den


def born_probability(phi: StateVec, psi: StateVec) -> Fraction:
    """born_ratio with the rationality of the observable asserted."""
    value = born_ratio(phi, psi)
    out = value.rational_or_none()
    if out is None:
        raise InvariantError(f"Born probability {value!r} is not rational")
    if out < 0 or out > 1:
        raise InvariantError(f"Born probability {out} is outside [0, 1]")
    return out


def _wedge_norm2(phi: StateVec, psi: StateVec) -> Cyclotomic:
    s = ZERO
    a, b = phi.entries, psi.entries
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            s = s + (a[i] * b[j] - a[j] * b[i]).abs2()
    return s


def born_symmetric_ratio(phi: StateVec, psi: StateVec) -> Cyclotomic:
    """Pair-symmetric form |ip|^2 / (|ip|^2 + ||phi wedge psi||^2).

    Agrees with born_ratio identically by the Lagrange identity; only
    meaningful for standard (unweighted) coordinates.
    """
    _require_compatible(phi, psi)
    _require_nonzero(phi, psi)
    if phi.basis.kind == "quantum":
        raise InputError("the wedge form needs unweighted coordinates")
    num = tagged_inner(phi, psi).abs2()
    den = num + _wedge_norm2(phi, psi)
    return num / den


def born_symmetric(phi: StateVec, psi: StateVec) -> Fraction:
    value = born_symmetric_ratio(phi, psi)
    out = value.rational_or_none()
    if out is None:
        raise InvariantError(f"Born probability {value!r} is not rational")
    return out


def completeness_check(psi: StateVec, basis: Sequence[StateVec]) -> Fraction:
    """Sum of Born probabilities of psi against an orthogonal basis.

    The basis vectors must be pairwise orthogonal and span the space; the
    sum then equals exactly 1.
    """
    _require_nonzero(psi)
    if len(basis) != psi.dim:
        raise InputError("need as many basis vectors as dimensions")
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            if tagged_inner(basis[i], basis[j]):
                raise InputError("basis vectors are not orthogonal")
    total = ZERO
    for e in basis:
        total = total + born_ratio(e, psi)
    out = total.rational_or_none()
    if out is None:
        raise InvariantError("completeness sum is not rational")
    return out


def project_component(v: StateVec, projector: CycMatrix, component: int) -> StateVec:
    """Apply an isotypic projector; the result carries a component tag.

    The zero vector is a legal result (the state is invisible in that
    component); downstream Born operations reject it explicitly.
    """
    if v.basis.kind != "permutation":
        raise InputError("projection expects permutation-basis coordinates")
    if projector.cols != v.dim:
        raise InputError("projector and state dimensions differ")
    return StateVec(projector.matvec(v.entries), component_basis(component))


def born_in_component(n: StateVec, m: StateVec, projector: CycMatrix,
                      component: int) -> Fraction:
    """Born probability of the projections of two permutation-basis states
    into one invariant component; rational by construction for natural
    states."""
    pn = project_component(n, projector, component)
    pm = project_component(m, projector, component)
    if pn.is_zero():
        raise ComponentInvisibleError(
            f"system state is invisible in component {component}"
        )
    if pm.is_zero():
        raise ComponentInvisibleError(
            f"apparatus state is invisible in component {component}"
        )
    return born_probability(pm, pn)


def interference_search(projector: CycMatrix, component: int, bound: int,
                        threads: int = 1) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All pairs of natural vectors with entries in [0, bound] whose
    projections into the component are destructively interfering (Born
    probability exactly zero).

    Vectors with zero projection are excluded.  Pairs are unordered and
    reported once, lexicographically; pairs differing by scaling are all
    kept.
    """
    if bound < 1:
        raise InputError("bound must be at least 1")
    dim = projector.cols
    vectors: list[tuple[int, ...]] = []
    projections: list[tuple[Cyclotomic, ...]] = []
    for vals in product(range(bound + 1), repeat=dim):
        proj = projector.matvec(tuple(Cyclotomic(v) for v in vals))
        if not vec_is_zero(proj):
            vectors.append(vals)
            projections.append(proj)

    def scan(a: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        hits = []
        pa = projections[a]
        for b in range(a + 1, len(vectors)):
            if not vec_inner(pa, projections[b]):
                hits.append((vectors[a], vectors[b]))
        return hits

    out: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for chunk in pool.map(scan, range(len(vectors))):
                out.extend(chunk)
    else:
        for a in range(len(vectors)):
            out.extend(scan(a))
    return out
