"""Permutations, group closure, conjugacy structure and group actions.

Composition convention: points act on the right and permutations compose
left-to-right, so (a * b) maps i to b(a(i)).  Every representation built on
top of this module uses the same convention.  Points are 0-based in code;
the JSON wire format uses 1-based image lists.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import lcm
from typing import Iterable, Sequence

from finq.errors import CapExceededError, InputError

__all__ = [
    "Perm",
    "FiniteGroup",
    "ClassData",
    "CosetAction",
    "group_closure",
    "class_coefficients",
    "coset_action",
    "regular_action",
    "charpoly_from_cycle_type",
    "DEFAULT_ELEMENT_CAP",
]

DEFAULT_ELEMENT_CAP = 10**6


class Perm:
    """A bijection of {0..deg-1}; images[i] is the image of point i."""

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        imgs = tuple(images)
        if sorted(imgs) != list(range(len(imgs))):
            raise ValueError(f"not a permutation: {imgs}")
        object.__setattr__(self, "images", imgs)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("Perm is immutable")

    @staticmethod
    def identity(degree: int) -> "Perm":
        return Perm(range(degree))

    @staticmethod
    def from_cycles(degree: int, cycles: Sequence[Sequence[int]]) -> "Perm":
        """Build from 0-based disjoint cycles."""
        imgs = list(range(degree))
        for cyc in cycles:
            for i, p in enumerate(cyc):
                imgs[p] = cyc[(i + 1) % len(cyc)]
        return Perm(imgs)

    @staticmethod
    def from_one_based(images: Sequence[int]) -> "Perm":
        return Perm(i - 1 for i in images)

    def to_one_based(self) -> list[int]:
        return [i + 1 for i in self.images]

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Perm") -> "Perm":
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        oi = other.images
        return Perm(oi[i] for i in self.images)

    def inverse(self) -> "Perm":
        out = [0] * self.degree
        for i, j in enumerate(self.images):
            out[j] = i
        return Perm(out)

    def __pow__(self, k: int) -> "Perm":
        if k < 0:
            return self.inverse() ** (-k)
        out = Perm.identity(self.degree)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self, include_fixed: bool = False) -> list[tuple[int, ...]]:
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            p = self.images[start]
            while p != start:
                cyc.append(p)
                seen[p] = True
                p = self.images[p]
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def cycle_type(self) -> dict[int, int]:
        """Multiset {cycle length: multiplicity}; lengths weighted sum is deg."""
        out: dict[int, int] = {}
        for cyc in self.cycles(include_fixed=True):
            out[len(cyc)] = out.get(len(cyc), 0) + 1
        return out

    def order(self) -> int:
        return lcm(*(length for length in self.cycle_type()))

    def fixed_points(self) -> int:
        return sum(1 for i, j in enumerate(self.images) if i == j)

    def __eq__(self, other) -> bool:
        return isinstance(other, Perm) and self.images == other.images

    def __lt__(self, other: "Perm") -> bool:
        return self.images < other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + " ".join(str(p + 1) for p in c) + ")" for c in cycs)


def charpoly_from_cycle_type(cycle_type: dict[int, int]) -> tuple[int, ...]:
    """Coefficients (constant first) of det(rho(g) - x*I) for a permutation
    of the given cycle type: the product of (x^len - 1) factors with the
    overall sign fixed so the leading coefficient is (-1)^degree."""
    degree = sum(length * k for length, k in cycle_type.items())
    poly = [1]
    for length, k in sorted(cycle_type.items()):
        factor = [-1] + [0] * (length - 1) + [1]
        for _ in range(k):
            poly = _poly_mul(poly, factor)
    if degree % 2:
        poly = [-c for c in poly]
    return tuple(poly)


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


class FiniteGroup:
    """A fully enumerated permutation group.

    elements[0] is the identity; the rest follow breadth-first discovery
    order over the sorted, deduplicated generators, which makes element ids
    reproducible.  words[i] = (parent id, generator id) reconstructs a
    factorization of element i used to extend generator data to the group.
    """

    def __init__(self, elements: Sequence[Perm], generators: Sequence[Perm],
                 words: Sequence[tuple[int, int] | None]):
        self.elements = tuple(elements)
        self.generators = tuple(generators)
        self.words = tuple(words)
        self.degree = self.elements[0].degree
        self._index = {p.images: i for i, p in enumerate(self.elements)}

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, p: Perm) -> bool:
        return isinstance(p, Perm) and p.images in self._index

    def index_of(self, p: Perm) -> int:
        try:
            return self._index[p.images]
        except KeyError:
            raise InputError(f"{p!r} is not an element of this group") from None

    def mul(self, i: int, j: int) -> int:
        """Cayley lookup: id of elements[i] * elements[j]."""
        return self._index[(self.elements[i] * self.elements[j]).images]

    product_index = mul

    def inv(self, i: int) -> int:
        return self._index[self.elements[i].inverse().images]

    def power(self, i: int, k: int) -> int:
        return self._index[(self.elements[i] ** k).images]

    def element_order(self, i: int) -> int:
        return self.elements[i].order()

    def exponent(self) -> int:
        return lcm(*(self.elements[i].order() for i in self.class_representatives))

    @cached_property
    def classes(self) -> tuple[tuple[int, ...], ...]:
        """Conjugacy classes as element-id tuples; identity class first,
        the rest ordered by (size, smallest member id)."""
        n = len(self.elements)
        assigned = [False] * n
        raw: list[list[int]] = []
        for start in range(n):
            if assigned[start]:
                continue
            orbit = [start]
            assigned[start] = True
            queue = [start]
            while queue:
                x = queue.pop()
                px = self.elements[x]
                for g in self.generators:
                    y = self._index[(g.inverse() * px * g).images]
                    if not assigned[y]:
                        assigned[y] = True
                        orbit.append(y)
                        queue.append(y)
            raw.append(sorted(orbit))
        ident = next(cl for cl in raw if cl[0] == 0)
        rest = sorted((cl for cl in raw if cl[0] != 0), key=lambda cl: (len(cl), cl[0]))
        return tuple(tuple(cl) for cl in [ident] + rest)

    @cached_property
    def class_of(self) -> tuple[int, ...]:
        out = [0] * len(self.elements)
        for k, cl in enumerate(self.classes):
            for i in cl:
                out[i] = k
        return tuple(out)

    @cached_property
    def class_representatives(self) -> tuple[int, ...]:
        return tuple(cl[0] for cl in self.classes)

    @property
    def class_sizes(self) -> tuple[int, ...]:
        return tuple(len(cl) for cl in self.classes)

    def to_json(self) -> dict:
        return {
            "type": "permutation",
            "degree": self.degree,
            "generators": [g.to_one_based() for g in self.generators],
        }

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order}, degree={self.degree})"


def group_closure(generators: Sequence[Perm], cap: int = DEFAULT_ELEMENT_CAP) -> FiniteGroup:
    """Enumerate the group generated by the given permutations.

    Breadth-first multiplication by the sorted generator list; identity is
    element 0.  Raises CapExceededError past `cap` elements.
    """
    gens = sorted(set(g for g in generators if not g.is_identity()))
    if not generators:
        raise InputError("need at least one generator")
    degree = generators[0].degree
    if any(g.degree != degree for g in generators):
        raise InputError("generators must share one degree")
    ident = Perm.identity(degree)
    elements: list[Perm] = [ident]
    words: list[tuple[int, int] | None] = [None]
    index = {ident.images: 0}
    frontier = [0]
    while frontier:
        nxt: list[int] = []
        for i in frontier:
            p = elements[i]
            for gi, g in enumerate(gens):
                q = p * g
                if q.images not in index:
                    index[q.images] = len(elements)
                    elements.append(q)
                    words.append((i, gi))
                    nxt.append(len(elements) - 1)
                    if len(elements) > cap:
                        raise CapExceededError(
                            f"group closure exceeded the cap of {cap} elements"
                        )
        frontier = nxt
    return FiniteGroup(elements, gens if gens else [ident], words)


@dataclass(frozen=True)
class ClassData:
    """Class sizes and the structure constants of class-sum multiplication:
    coefficients[i][j][k] counts pairs (a, b) in C_i x C_j with a*b equal to
    a fixed representative of C_k."""

    class_sizes: tuple[int, ...]
    coefficients: tuple[tuple[tuple[int, ...], ...], ...]

    def coefficient(self, i: int, j: int, k: int) -> int:
        return self.coefficients[i][j][k]


def class_coefficients(group: FiniteGroup) -> ClassData:
    classes = group.classes
    K = len(classes)
    reps = group.class_representatives
    class_of = group.class_of
    coeffs = [[[0] * K for _ in range(K)] for _ in range(K)]
    for i in range(K):
        for a in classes[i]:
            inv_a = group.elements[a].inverse()
            for k in range(K):
                # b = a^{-1} * rep_k solves a*b = rep_k
                b = inv_a * group.elements[reps[k]]
                j = class_of[group.index_of(b)]
                coeffs[i][j][k] += 1
    return ClassData(
        group.class_sizes,
        tuple(tuple(tuple(row) for row in plane) for plane in coeffs),
    )


@dataclass(frozen=True)
class CosetAction:
    """Action of a group on the right cosets of a subgroup."""

    action: tuple[Perm, ...]  # one permutation of the cosets per group element
    faithful: bool
    num_cosets: int
    coset_of: tuple[int, ...]  # element id -> coset id


def coset_action(group: FiniteGroup, subgroup_generators: Sequence[Perm]) -> CosetAction:
    """Enumerate right cosets H\\G and the permutation action g: Ha -> Hag.

    The subgroup is the closure of the given generators, all of which must
    lie in the group.  The action is faithful exactly when only the
    identity fixes every coset.
    """
    for g in subgroup_generators:
        if g not in group:
            raise InputError(f"subgroup generator {g!r} lies outside the group")
    sub = group_closure(list(subgroup_generators) + [Perm.identity(group.degree)])
    h_ids = sorted(group.index_of(h) for h in sub.elements)
    n = group.order
    coset_of = [-1] * n
    members: list[list[int]] = []
    for i in range(n):
        if coset_of[i] != -1:
            continue
        c = len(members)
        mem = []
        for h in h_ids:
            x = group.mul(h, i)
            coset_of[x] = c
            mem.append(x)
        members.append(mem)
    num = len(members)
    action = []
    identity_count = 0
    for i in range(n):
        images = [0] * num
        for c, mem in enumerate(members):
            images[c] = coset_of[group.mul(mem[0], i)]
        p = Perm(images)
        if p.is_identity():
            identity_count += 1
        action.append(p)
    return CosetAction(tuple(action), identity_count == 1, num, tuple(coset_of))


def regular_action(group: FiniteGroup) -> list[Perm]:
    """The group acting on itself by right multiplication, one permutation of
    element ids per element."""
    n = group.order
    out = []
    for i in range(n):
        out.append(Perm(group.mul(j, i) for j in range(n)))
    return out
