"""Exact finite-group quantum models.

Finite permutation dynamics, exact representations over cyclotomic numbers,
Born-rule observables that come out rational, and closures of groups
generated by quantum gates.
"""

from finq.cyclotomic import (
    Cyclotomic,
    cyclotomic_polynomial,
    negative_unit,
    root_of_unity,
    sqrt_two,
)

__version__ = "0.1.0"

__all__ = [
    "Cyclotomic",
    "cyclotomic_polynomial",
    "negative_unit",
    "root_of_unity",
    "sqrt_two",
]
