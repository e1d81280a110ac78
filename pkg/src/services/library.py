"""Named certificate vectors used throughout the proof scheme (n = 9)."""

from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional

from ..core.errors import InputError
from ..core.exactnum import RowVector


def _scaled(numerators: List[int], denominator: int) -> RowVector:
    return RowVector(Fraction(x, denominator) for x in numerators)


VECTORS: Dict[str, RowVector] = {
    "R0": _scaled([0] * 9, 1),
    "R1": _scaled([1, 0, 0, 0, 0, 0, 0, 0, 0], 1),
    "R2": _scaled([1, 1, 1, 1, 0, 0, 0, 0, 0], 2),
    "R3": _scaled([1] * 9, 3),
    "R3*": _scaled([2, 1, 1, 1, 1, 1, 0, 0, 0], 3),
    "R4": _scaled([3, 1, 1, 1, 1, 1, 1, 1, 0], 4),
    "R5": _scaled([3, 3, 1, 1, 1, 1, 1, 1, 1], 5),
    "R6": _scaled([4, 2, 2, 2, 2, 1, 1, 1, 1], 6),
}


def vector(label: str) -> RowVector:
    try:
        return VECTORS[label]
    except KeyError:
        raise InputError(f"unknown vector {label!r}; known: {', '.join(VECTORS)}")


class HkRow(NamedTuple):
    k: int
    label: str
    claimed: Optional[Fraction]


# (number of nonzero coordinates, vector, claimed constant)
HK_ROWS = [
    HkRow(1, "R1", Fraction(0)),
    HkRow(4, "R2", Fraction(3, 8)),
    HkRow(6, "R3*", Fraction(15, 32)),
    HkRow(8, "R4", Fraction(7, 16)),
    HkRow(9, "R3", Fraction(63, 128)),
    HkRow(9, "R5", None),
    HkRow(9, "R6", None),
]

# constants claimed without an attaining vector
HK_CLAIMS = [(k, Fraction(1, 2)) for k in (2, 3, 5, 7)]

# 8-tuples whose first three pairs are non-twins and the last a twin
SEMI_EIGHT_TUPLES = [
    ((7, 248), (20, 235), (33, 222), (77, 178)),
    ((15, 240), (24, 231), (66, 189), (87, 168)),
]

# σ = -1 on every non-twin pair, +1 on the twin
SEMI_EIGHT_SIGNS = (-1, -1, -1, 1)
