"""Standard small groups used across tests, fixtures and the CLI docs."""

from __future__ import annotations

from finq.permgroup import FiniteGroup, Perm, group_closure

__all__ = [
    "cyclic_group",
    "symmetric_group",
    "alternating_group_4",
    "dihedral_group_4",
    "klein_four_group",
    "quaternion_group",
    "battery",
    "s3_group",
]


def cyclic_group(n: int) -> FiniteGroup:
    return group_closure([Perm([(i + 1) % n for i in range(n)])])


def symmetric_group(n: int) -> FiniteGroup:
    if n == 1:
        return group_closure([Perm.identity(1)])
    gens = [Perm.from_cycles(n, [(0, 1)])]
    if n > 2:
        gens.append(Perm([(i + 1) % n for i in range(n)]))
    return group_closure(gens)


def alternating_group_4() -> FiniteGroup:
    return group_closure(
        [Perm.from_cycles(4, [(0, 1, 2)]), Perm.from_cycles(4, [(0, 1), (2, 3)])]
    )


def dihedral_group_4() -> FiniteGroup:
    # symmetries of the square on its 4 vertices
    return group_closure([Perm([1, 2, 3, 0]), Perm.from_cycles(4, [(0, 2)])])


def klein_four_group() -> FiniteGroup:
    return group_closure([Perm.from_cycles(4, [(0, 1)]), Perm.from_cycles(4, [(2, 3)])])


def quaternion_group() -> FiniteGroup:
    # the 8 unit quaternions permuted by right multiplication, ordered
    # 1, i, -1, -i, j, k, -j, -k
    right_i = Perm([1, 2, 3, 0, 7, 4, 5, 6])
    right_j = Perm([4, 5, 6, 7, 2, 3, 0, 1])
    return group_closure([right_i, right_j])


def s3_group() -> FiniteGroup:
    return symmetric_group(3)


def battery() -> dict[str, FiniteGroup]:
    """The standard verification battery for table and decomposition checks."""
    return {
        "C2": cyclic_group(2),
        "C3": cyclic_group(3),
        "C4": cyclic_group(4),
        "C2xC2": klein_four_group(),
        "S3": symmetric_group(3),
        "D4": dihedral_group_4(),
        "Q8": quaternion_group(),
        "A4": alternating_group_4(),
        "S4": symmetric_group(4),
    }
