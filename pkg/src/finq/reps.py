"""Exact matrix representations, characters, character tables, isotypic
projectors and block-diagonalization into a basis adapted to the invariant
components.

Character tables are computed with the Dixon variant of Burnside's class
algebra method: the commuting integer matrices built from the class
coefficients are simultaneously diagonalized modulo a prime p = 1 (mod
exponent), and the character values are lifted back to exact cyclotomic
numbers by discrete Fourier inversion over the exponent.  The result is
verified against the orthogonality relations before it is returned.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import isqrt
from typing import Callable, Sequence

from finq.cyclotomic import Cyclotomic, ONE, ZERO, root_of_unity
from finq.errors import InputError, InvariantError
from finq.linalg import CycMatrix, EchelonSpace, vec_inner, vec_is_zero, vec_primitive, vec_scale, vec_sub
from finq.permgroup import FiniteGroup, Perm, class_coefficients, regular_action

__all__ = [
    "Representation",
    "CharacterTable",
    "BlockDiagonalization",
    "permutation_matrix",
    "permutation_rep",
    "regular_rep",
    "rep_from_generator_images",
    "character_table",
    "multiplicities",
    "isotypic_projectors",
    "block_diagonalize",
    "invariant_inner_product",
]

_EXHAUSTIVE_LIMIT = 200


def permutation_matrix(p: Perm) -> CycMatrix:
    """0/1 matrix M with M[i][j] = 1 exactly when p maps i to j."""
    n = p.degree
    return CycMatrix(
        [[ONE if p.images[i] == j else ZERO for j in range(n)] for i in range(n)]
    )


class Representation:
    """A homomorphism from a FiniteGroup into exact invertible matrices.

    images runs parallel to group.elements.  Construction verifies the
    homomorphism property (exhaustively for small groups, on generator
    products plus random samples otherwise) and records unitarity.
    """

    def __init__(self, group: FiniteGroup, images: Sequence[CycMatrix],
                 verify: bool = True):
        if len(images) != group.order:
            raise InputError("need one matrix per group element")
        self.group = group
        self.images = tuple(images)
        self.dim = images[0].rows
        if any(m.shape != (self.dim, self.dim) for m in images):
            raise InputError("images must be square matrices of equal size")
        if verify:
            self._verify_homomorphism()
        self.unitary = self._check_unitary()

    def _check_unitary(self) -> bool:
        ident = CycMatrix.identity(self.dim)
        for i in self._generator_ids():
            m = self.images[i]
            if (m.conj_transpose() * m) != ident:
                return False
        return True

    def _generator_ids(self) -> list[int]:
        return [self.group.index_of(g) for g in self.group.generators]

    def _verify_homomorphism(self):
        g = self.group
        n = g.order
        pairs: list[tuple[int, int]]
        if n <= _EXHAUSTIVE_LIMIT:
            pairs = [(i, j) for i in range(n) for j in range(n)]
        else:
            gen_ids = self._generator_ids()
            rng = random.Random(0)
            pairs = [(i, gj) for i in range(n) for gj in gen_ids]
            pairs += [(rng.randrange(n), rng.randrange(n)) for _ in range(100)]
        for i, j in pairs:
            if self.images[i] * self.images[j] != self.images[g.mul(i, j)]:
                raise InvariantError(
                    f"images do not form a homomorphism: witness pair "
                    f"({g.elements[i]!r}, {g.elements[j]!r})"
                )

    def image(self, i: int) -> CycMatrix:
        return self.images[i]

    def image_of(self, p: Perm) -> CycMatrix:
        return self.images[self.group.index_of(p)]

    def character(self) -> tuple[Cyclotomic, ...]:
        """Trace per conjugacy class; constancy across each class is checked."""
        out = []
        for cl in self.group.classes:
            t = self.images[cl[0]].trace()
            check = cl if self.group.order <= _EXHAUSTIVE_LIMIT else cl[:1]
            for i in check:
                if self.images[i].trace() != t:
                    raise InvariantError("trace varies within a conjugacy class")
            out.append(t)
        return tuple(out)


def permutation_rep(group: FiniteGroup, action: Sequence[Perm] | None = None) -> Representation:
    """Matrix form of a permutation action (the defining action by default)."""
    perms = list(action) if action is not None else list(group.elements)
    if len(perms) != group.order:
        raise InputError("action must assign a permutation to every element")
    # consistency of the action with the group product
    n = group.order
    if n <= _EXHAUSTIVE_LIMIT:
        pairs = [(i, j) for i in range(n) for j in range(n)]
    else:
        rng = random.Random(1)
        pairs = [(rng.randrange(n), rng.randrange(n)) for _ in range(200)]
    for i, j in pairs:
        if perms[i] * perms[j] != perms[group.mul(i, j)]:
            raise InvariantError("the given action is not a homomorphism")
    return Representation(group, [permutation_matrix(p) for p in perms], verify=False)


def regular_rep(group: FiniteGroup) -> Representation:
    """The group acting on itself; dimension equals the group order."""
    return permutation_rep(group, regular_action(group))


def rep_from_generator_images(group: FiniteGroup, generator_images: Sequence[CycMatrix]) -> Representation:
    """Extend matrices given for group.generators to the whole group by
    following the closure's factorization words, then verify consistency."""
    if len(generator_images) != len(group.generators):
        raise InputError("need exactly one matrix per generator")
    dim = generator_images[0].rows
    images: list[CycMatrix | None] = [None] * group.order
    images[0] = CycMatrix.identity(dim)
    for i in range(1, group.order):
        word = group.words[i]
        if word is None:
            raise InvariantError("non-identity element lacks a factorization word")
        parent, gi = word
        images[i] = images[parent] * generator_images[gi]
    return Representation(group, images)  # full verification happens here


@dataclass(frozen=True)
class CharacterTable:
    """Irreducible characters of a finite group, one row per irreducible.

    Row 0 is the trivial character; the remaining rows are sorted by
    dimension and then by the deterministic value order of their entries,
    so tables are stable across runs.  Columns follow the group's class
    order.
    """

    class_sizes: tuple[int, ...]
    class_orders: tuple[int, ...]
    rows: tuple[tuple[Cyclotomic, ...], ...]
    dims: tuple[int, ...]

    @property
    def num_classes(self) -> int:
        return len(self.class_sizes)

    def verify(self, group_order: int):
        K = self.num_classes
        if len(self.rows) != K:
            raise InvariantError("number of irreducibles must equal number of classes")
        if any(x != ONE for x in self.rows[0]):
            raise InvariantError("first row must be the trivial character")
        for t, row in enumerate(self.rows):
            if row[0] != Cyclotomic(self.dims[t]):
                raise InvariantError("first column must hold the dimensions")
        for i in range(K):
            for j in range(K):
                s = ZERO
                for k in range(K):
                    s = s + self.class_sizes[k] * self.rows[i][k] * self.rows[j][k].conjugate()
                if s != Cyclotomic(group_order if i == j else 0):
                    raise InvariantError("row orthogonality fails")
        if sum(d * d for d in self.dims) != group_order:
            raise InvariantError("sum of squared dimensions must equal the group order")
        for d in self.dims:
            if group_order % d != 0:
                raise InvariantError("dimensions must divide the group order")

    def to_json(self) -> dict:
        return {
            "class_sizes": list(self.class_sizes),
            "class_orders": list(self.class_orders),
            "dims": list(self.dims),
            "rows": [[x.to_json() for x in row] for row in self.rows],
        }


# -- Dixon / Burnside computation ------------------------------------------


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in range(2, isqrt(n) + 1):
        if n % p == 0:
            return False
    return True


def _dixon_prime(exponent: int, group_order: int) -> int:
    p = exponent + 1
    bound = 2 * isqrt(group_order) + 1
    while True:
        if p > bound and p % exponent == 1 and _is_prime(p):
            return p
        p += 1


def _primitive_root_of_order(e: int, p: int) -> int:
    for a in range(2, p):
        z = pow(a, (p - 1) // e, p)
        ok = z != 1
        if ok:
            for q in range(2, e):
                if e % q == 0 and pow(z, e // q, p) == 1:
                    ok = False
                    break
        if ok and pow(z, e, p) == 1:
            return z
    raise InvariantError("no primitive root found (prime selection is broken)")


def _nullspace_modp(mat: list[list[int]], p: int) -> list[list[int]]:
    """Column nullspace of a square matrix over GF(p)."""
    k = len(mat)
    m = [row[:] for row in mat]
    pivots: dict[int, int] = {}  # column -> row
    r = 0
    for c in range(k):
        pr = next((i for i in range(r, k) if m[i][c] % p), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(k):
            if i != r and m[i][c] % p:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        pivots[c] = r
        r += 1
    out = []
    for c in range(k):
        if c in pivots:
            continue
        v = [0] * k
        v[c] = 1
        for pc, prow in pivots.items():
            v[pc] = (-m[prow][c]) % p
        out.append(v)
    return out


def _split_common_eigenvectors(mats: list[list[list[int]]], K: int, p: int) -> list[list[int]]:
    """Common eigenvectors (up to scale) of commuting K x K matrices mod p."""
    # a subspace is a list of basis column-vectors (each length K)
    subspaces: list[list[list[int]]] = [[[int(i == c) for i in range(K)] for c in range(K)]]
    for M in mats:
        nxt: list[list[list[int]]] = []
        for basis in subspaces:
            k = len(basis)
            if k == 1:
                nxt.append(basis)
                continue
            # restriction A of M to the subspace: M*b_j = sum_i A[i][j] b_i
            S = [[basis[j][i] for j in range(k)] for i in range(K)]  # K x k
            MB = [[sum(M[i][l] * basis[j][l] for l in range(K)) % p for j in range(k)] for i in range(K)]
            A = _solve_in_span(S, MB, k, K, p)
            found = 0
            for lam in range(p):
                shifted = [[(A[i][j] - (lam if i == j else 0)) % p for j in range(k)] for i in range(k)]
                null = _nullspace_modp(shifted, p)
                if null:
                    vecs = [
                        [sum(S[i][j] * nv[j] for j in range(k)) % p for i in range(K)]
                        for nv in null
                    ]
                    nxt.append(vecs)
                    found += len(null)
                if found == k:
                    break
            if found != k:
                raise InvariantError("eigen-splitting failed over GF(p)")
        subspaces = nxt
        if all(len(b) == 1 for b in subspaces):
            break
    if any(len(b) != 1 for b in subspaces):
        raise InvariantError("class matrices failed to split into lines")
    return [b[0] for b in subspaces]


def _solve_in_span(S: list[list[int]], MB: list[list[int]], k: int, K: int, p: int) -> list[list[int]]:
    """Solve S*A = MB for A (k x k), where S has independent columns."""
    # row-reduce [S | MB]
    aug = [[S[i][j] for j in range(k)] + [MB[i][j] for j in range(k)] for i in range(K)]
    r = 0
    for c in range(k):
        pr = next((i for i in range(r, K) if aug[i][c] % p), None)
        if pr is None:
            raise InvariantError("subspace basis is degenerate mod p")
        aug[r], aug[pr] = aug[pr], aug[r]
        inv = pow(aug[r][c], p - 2, p)
        aug[r] = [(x * inv) % p for x in aug[r]]
        for i in range(K):
            if i != r and aug[i][c] % p:
                f = aug[i][c]
                aug[i] = [(x - f * y) % p for x, y in zip(aug[i], aug[r])]
        r += 1
    for i in range(r, K):
        if any(x % p for x in aug[i][k:]):
            raise InvariantError("matrix does not preserve the subspace")
    return [[aug[i][k + j] for j in range(k)] for i in range(k)]


def character_table(group: FiniteGroup) -> CharacterTable:
    """The exact character table, rows canonically ordered."""
    classes = group.classes
    K = len(classes)
    sizes = group.class_sizes
    reps = group.class_representatives
    N = group.order
    e = group.exponent()
    data = class_coefficients(group)

    p = _dixon_prime(e, N)
    z = _primitive_root_of_order(e, p)

    # class of the inverse of each representative
    inverse_class = [group.class_of[group.inv(r)] for r in reps]

    # commuting class matrices with (M_i)[k][j] = c_{ikj}, so that the vectors
    # of central-character values are their common eigenvectors
    mats = [
        [[data.coefficient(i, k, j) % p for j in range(K)] for k in range(K)]
        for i in range(K)
    ]
    eigvecs = _split_common_eigenvectors(mats[1:], K, p)
    if len(eigvecs) != K:
        raise InvariantError("wrong number of common eigenvectors")

    # power map: class of rep_k^j for j in 0..e-1
    power_class = []
    for r in reps:
        row = []
        g = 0  # identity id
        for j in range(e):
            row.append(group.class_of[g])
            g = group.mul(g, r)
        power_class.append(row)

    inv_e = pow(e % p, p - 2, p)
    rows: list[tuple[Cyclotomic, ...]] = []
    dims: list[int] = []
    for v in eigvecs:
        if v[0] % p == 0:
            raise InvariantError("central character vanishes on the identity class")
        scale = pow(v[0], p - 2, p)
        w = [(x * scale) % p for x in v]
        s = 0
        for k in range(K):
            s = (s + w[k] * w[inverse_class[k]] * pow(sizes[k], p - 2, p)) % p
        if s == 0:
            raise InvariantError("degenerate norm for a central character")
        d2 = (N * pow(s, p - 2, p)) % p
        d = next((r for r in range(1, isqrt(N) + 1) if (r * r) % p == d2), None)
        if d is None:
            raise InvariantError("could not recover an irreducible dimension")
        chi_modp = [(d * w[k] * pow(sizes[k], p - 2, p)) % p for k in range(K)]
        row = []
        for k in range(K):
            value = ZERO
            for sdx in range(e):
                m = 0
                for j in range(e):
                    m = (m + chi_modp[power_class[k][j]] * pow(z, (-j * sdx) % (p - 1), p)) % p
                m = (m * inv_e) % p
                if m:
                    value = value + m * root_of_unity(e, sdx)
            row.append(value)
        rows.append(tuple(row))
        dims.append(d)

    order = sorted(
        range(K),
        key=lambda t: (
            0 if all(x == ONE for x in rows[t]) else 1,
            dims[t],
            tuple(x.sort_key() for x in rows[t]),
        ),
    )
    table = CharacterTable(
        class_sizes=tuple(sizes),
        class_orders=tuple(group.element_order(r) for r in reps),
        rows=tuple(rows[t] for t in order),
        dims=tuple(dims[t] for t in order),
    )
    table.verify(N)
    return table


# -- decomposition ----------------------------------------------------------


def multiplicities(rep: Representation, table: CharacterTable) -> tuple[int, ...]:
    """How often each irreducible occurs in the representation."""
    chi = rep.character()
    N = rep.group.order
    out = []
    for j in range(table.num_classes):
        s = ZERO
        for k in range(table.num_classes):
            s = s + table.class_sizes[k] * chi[k] * table.rows[j][k].conjugate()
        m = (s / N).rational_or_none()
        if m is None or m.denominator != 1 or m < 0:
            raise InvariantError("multiplicity is not a natural number")
        out.append(int(m))
    if sum(m * d for m, d in zip(out, table.dims)) != rep.dim:
        raise InvariantError("multiplicities do not add up to the dimension")
    return tuple(out)


def isotypic_projectors(rep: Representation, table: CharacterTable) -> list[CycMatrix]:
    """P_j = (d_j/|G|) * sum_g conj(chi_j(g)) rho(g), one per irreducible."""
    if not rep.unitary:
        raise InputError("projectors need a unitary representation")
    N = rep.group.order
    class_of = rep.group.class_of
    out = []
    for j in range(table.num_classes):
        acc = CycMatrix.zeros(rep.dim, rep.dim)
        for i in range(N):
            c = table.rows[j][class_of[i]].conjugate()
            if c:
                acc = acc + c * rep.images[i]
        out.append(Fraction(table.dims[j], N) * acc)
    return out


@dataclass(frozen=True)
class BlockDiagonalization:
    """Change of basis separating a representation into invariant blocks.

    transform's columns span the isotypic components in layout order; they
    are pairwise orthogonal but deliberately not normalized, so everything
    stays inside the cyclotomic field.  layout lists (component, dim) per
    diagonal block; multiplicities[j] counts blocks of component j.
    """

    transform: CycMatrix
    inverse: CycMatrix
    layout: tuple[tuple[int, int], ...]
    column_norms: tuple[Fraction, ...]
    multiplicities: tuple[int, ...]

    def conjugated(self, m: CycMatrix) -> CycMatrix:
        return self.inverse * (m * self.transform)

    def block_slices(self) -> list[tuple[int, int, int]]:
        """(component, start, stop) column ranges of the diagonal blocks."""
        out = []
        pos = 0
        for j, d in self.layout:
            out.append((j, pos, pos + d))
            pos += d
        return out


def _orthogonalize(vectors: list, against: list) -> list:
    """Gram-Schmidt without normalization; `against` must be orthogonal."""
    out = []
    for v in vectors:
        w = v
        for c in against + out:
            ip = vec_inner(c, w)
            if ip:
                w = vec_sub(w, vec_scale(ip / vec_inner(c, c), c))
        if not vec_is_zero(w):
            out.append(vec_primitive(w))
    return out


def _spin(vec, generator_images: list[CycMatrix]) -> list:
    """Basis of the smallest invariant subspace containing vec."""
    space = EchelonSpace(len(vec))
    space.add(vec)
    frontier = [vec]
    while frontier:
        nxt = []
        for v in frontier:
            for m in generator_images:
                w = m.matvec(v)
                if space.add(w):
                    nxt.append(w)
        frontier = nxt
    return space.basis()


def _eigenvalue_multiplicity(table: CharacterTable, group: FiniteGroup, j: int,
                             rep_id: int, s: int, o: int) -> int:
    """Multiplicity of the eigenvalue zeta_o^s of irreducible j at an element
    of order o, computed from characters alone."""
    acc = ZERO
    g = 0
    for t in range(o):
        acc = acc + table.rows[j][group.class_of[g]] * root_of_unity(o, (-s * t) % o)
        g = group.mul(g, rep_id)
    m = (acc / o).rational_or_none()
    if m is None or m.denominator != 1:
        raise InvariantError("eigenvalue multiplicity is not an integer")
    return int(m)


def block_diagonalize(rep: Representation, table: CharacterTable) -> BlockDiagonalization:
    """Construct T whose columns split the representation into m_j blocks of
    size d_j per component j; T^-1 rho(g) T is block diagonal for every g."""
    group = rep.group
    mults = multiplicities(rep, table)
    projectors = isotypic_projectors(rep, table)
    gen_images = [rep.image_of(g) for g in group.generators]

    columns: list = []
    layout: list[tuple[int, int]] = []
    for j, m in enumerate(mults):
        if m == 0:
            continue
        d = table.dims[j]
        P = projectors[j]
        candidates = [c for c in P.columns() if not vec_is_zero(c)]
        component_cols: list = []
        if d == 1:
            copies = _orthogonalize(candidates, [])[:m]
            if len(copies) != m:
                raise InvariantError("rank deficiency inside an isotypic component")
            component_cols = copies
            layout.extend([(j, 1)] * m)
        elif m == 1:
            space = EchelonSpace(rep.dim)
            basis = []
            for c in candidates:
                if space.add(c):
                    basis.append(c)
                if len(basis) == d:
                    break
            if len(basis) != d:
                raise InvariantError("rank deficiency inside an isotypic component")
            component_cols = _orthogonalize(basis, [])
            layout.append((j, d))
        else:
            component_cols = _split_isotypic(rep, table, j, d, m, P, gen_images)
            layout.extend([(j, d)] * m)
        if len(component_cols) != d * m:
            raise InvariantError("rank deficiency inside an isotypic component")
        columns.extend(component_cols)

    norms = []
    for c in columns:
        nrm = vec_inner(c, c).rational_or_none()
        if nrm is None or nrm <= 0:
            raise InvariantError("column squared norm must be a positive rational")
        norms.append(nrm)
    T = CycMatrix.from_columns(columns)
    Tt = T.conj_transpose()
    inverse = CycMatrix(
        [[x / norms[i] for x in Tt.row(i)] for i in range(len(columns))]
    )
    if inverse * T != CycMatrix.identity(rep.dim):
        raise InvariantError("transform inverse check failed")
    return BlockDiagonalization(
        transform=T,
        inverse=inverse,
        layout=tuple(layout),
        column_norms=tuple(norms),
        multiplicities=mults,
    )


def _split_isotypic(rep: Representation, table: CharacterTable, j: int, d: int,
                    m: int, P: CycMatrix, gen_images: list[CycMatrix]) -> list:
    """Split a component with m > 1 copies of a d > 1 irreducible into
    mutually orthogonal invariant subspaces.

    Strategy: find a class representative h and an eigenvalue that occurs
    exactly once in the irreducible restricted to <h>.  Any vector of the
    corresponding eigenspace inside the component then generates a single
    copy, and working inside the orthogonal complement keeps copies
    orthogonal."""
    group = rep.group
    choice = None
    order_of = [group.element_order(r) for r in group.class_representatives]
    for rep_id, o in sorted(
        zip(group.class_representatives, order_of), key=lambda t: (t[1], t[0])
    ):
        if o == 1:
            continue
        for s in range(o):
            if _eigenvalue_multiplicity(table, group, j, rep_id, s, o) == 1:
                choice = (rep_id, s, o)
                break
        if choice:
            break
    if choice is None:
        raise InvariantError(
            "no cyclic subgroup separates the copies of this irreducible"
        )
    rep_id, s, o = choice
    lam_powers = [root_of_unity(o, (-s * t) % o) for t in range(o)]
    Q = CycMatrix.zeros(rep.dim, rep.dim)
    g = 0
    for t in range(o):
        Q = Q + lam_powers[t] * rep.images[g]
        g = group.mul(g, rep_id)
    S = Fraction(1, o) * (Q * P)  # projector onto the eigenspace inside the component

    out: list = []
    copies_found = 0
    for cand in S.columns():
        if copies_found == m:
            break
        if vec_is_zero(cand):
            continue
        seeds = _orthogonalize([cand], out)
        if not seeds:
            continue
        copy_basis = _spin(seeds[0], gen_images)
        if len(copy_basis) != d:
            raise InvariantError(
                f"generated subspace has dimension {len(copy_basis)}, expected {d}"
            )
        out.extend(_orthogonalize(copy_basis, out))
        copies_found += 1
    if copies_found != m:
        raise InvariantError("failed to separate all copies of an irreducible")
    return out


def invariant_inner_product(rep: Representation, x: Sequence, y: Sequence) -> Cyclotomic:
    """Average of the standard inner product over the whole group."""
    if len(x) != rep.dim or len(y) != rep.dim:
        raise InputError("dimension mismatch")
    s = ZERO
    for mtx in rep.images:
        s = s + vec_inner(mtx.matvec(x), mtx.matvec(y))
    return s / rep.group.order
