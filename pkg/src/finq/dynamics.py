"""Dynamical systems with space structure: classical and quantum evolutions,
trajectory amplitudes, and the equivalence of path-sums with matrix products.

The symmetry group of the full state set Sigma^X is realized as the standard
imprimitive wreath action: a pair (gamma, g) of an internal-symmetry-valued
function and a space symmetry sends the function f to
    (f . (gamma, g))(x) = gamma(x g^-1) applied to f(x g^-1).
Functions X -> Sigma are enumerated as mixed-radix integers with point 0
least significant, which fixes a reproducible state indexing.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from finq.cyclotomic import Cyclotomic, ZERO, as_cyclotomic
from finq.errors import CapExceededError, InputError, InvariantError
from finq.linalg import CycMatrix
from finq.permgroup import DEFAULT_ELEMENT_CAP, FiniteGroup, Perm, group_closure
from finq.reps import Representation

__all__ = [
    "SpaceStructure",
    "wreath_product",
    "function_states",
    "classical_evolve",
    "trajectory_amplitude",
    "feynman_sum",
]


@dataclass(frozen=True)
class SpaceStructure:
    """A finite space with symmetries plus local states with internal
    symmetries; the whole system's states are functions from space points to
    local states."""

    points: int
    space_group: FiniteGroup
    local_states: int
    internal_group: FiniteGroup

    def __post_init__(self):
        if self.points < 1 or self.local_states < 1:
            raise InputError("need at least one point and one local state")
        if self.space_group.degree != self.points:
            raise InputError("space group degree must match the point count")
        if self.internal_group.degree != self.local_states:
            raise InputError("internal group degree must match the local state count")

    @property
    def num_states(self) -> int:
        return self.local_states**self.points


def function_states(structure: SpaceStructure) -> list[tuple[int, ...]]:
    """All functions X -> Sigma in index order (point 0 least significant)."""
    pts, loc = structure.points, structure.local_states
    out = []
    for idx in range(loc**pts):
        f = []
        r = idx
        for _ in range(pts):
            f.append(r % loc)
            r //= loc
        out.append(tuple(f))
    return out


def _state_index(f: Sequence[int], local_states: int) -> int:
    idx = 0
    for x in reversed(f):
        idx = idx * local_states + x
    return idx


def wreath_product(structure: SpaceStructure,
                   cap: int = DEFAULT_ELEMENT_CAP) -> FiniteGroup:
    """The split extension of the space group by pointwise internal
    symmetries, acting on all |Sigma|^|X| functions.

    The order must come out |internal|^|X| * |space|; a mismatch (which can
    only happen for degenerate inputs) raises.
    """
    n_states = structure.num_states
    if n_states > cap:
        raise CapExceededError(
            f"{n_states} function states exceed the cap of {cap}"
        )
    states = function_states(structure)
    loc = structure.local_states
    gens: list[Perm] = []
    # internal generators concentrated at single points
    for x in range(structure.points):
        for gamma in structure.internal_group.generators:
            images = []
            for f in states:
                g = list(f)
                g[x] = gamma(f[x])
                images.append(_state_index(g, loc))
            gens.append(Perm(images))
    # space generators moving the points, trivial internal part
    for g in structure.space_group.generators:
        ginv = g.inverse()
        images = [
            _state_index([f[ginv(x)] for x in range(structure.points)], loc)
            for f in states
        ]
        gens.append(Perm(images))
    if not gens:
        gens = [Perm.identity(n_states)]
    group = group_closure(gens, cap=cap)
    expected = structure.internal_group.order**structure.points * structure.space_group.order
    if group.order != expected:
        raise InvariantError(
            f"wreath product order {group.order} differs from expected {expected};"
            " the action is degenerate"
        )
    return group


def classical_evolve(states: Sequence[int], num_states: int) -> dict:
    """Validate a classical history (a time-indexed state sequence)."""
    for t, s in enumerate(states):
        if not (0 <= s < num_states):
            raise InputError(f"state id {s} at time {t} is out of range")
    return {
        "kind": "classical",
        "length": len(states),
        "states": list(states),
        "valid": True,
    }


def trajectory_amplitude(rep: Representation, steps: Sequence[int | Perm],
                         start: Sequence) -> tuple[Cyclotomic, ...]:
    """Multicomponent amplitude of a quantum evolution: apply the matrices
    of the steps in time order (the step at time t acts on everything before
    it, so the latest factor ends up leftmost)."""
    amp = tuple(_coerce(x) for x in start)
    if len(amp) != rep.dim:
        raise InputError("initial amplitude has the wrong dimension")
    for step in steps:
        idx = step if isinstance(step, int) else rep.group.index_of(step)
        if not (0 <= idx < rep.group.order):
            raise InputError(f"step {step!r} is not a group element id")
        amp = rep.images[idx].matvec(amp)
    return amp


def _coerce(x) -> Cyclotomic:
    c = as_cyclotomic(x)
    if c is NotImplemented:
        raise InputError(f"bad amplitude entry {x!r}")
    return c


def feynman_sum(layers: Sequence[CycMatrix], source: int, target: int) -> Cyclotomic:
    """Sum amplitudes over all state paths from source to target through the
    layers, taken in time order.

    A path s_0 = source, s_1, ..., s_T = target contributes the product of
    layer_t[s_t, s_{t-1}]; the total equals the (target, source) entry of
    the matrix product of the layers with the latest leftmost, which is the
    defining postcondition of this operation.
    """
    if not layers:
        raise InputError("need at least one layer")
    for t in range(1, len(layers)):
        if layers[t].cols != layers[t - 1].rows:
            raise InputError(f"layer {t} does not compose with layer {t - 1}")
    if not (0 <= source < layers[0].cols):
        raise InputError("source state out of range")
    if not (0 <= target < layers[-1].rows):
        raise InputError("target state out of range")
    total = ZERO
    inner_sizes = [layers[t].rows for t in range(len(layers) - 1)]
    for mid in product(*(range(n) for n in inner_sizes)):
        path = (source, *mid, target)
        amp = layers[0][path[1], path[0]]
        for t in range(1, len(layers)):
            if not amp:
                break
            amp = layers[t][path[t + 1], path[t]] * amp
        total = total + amp
    return total
