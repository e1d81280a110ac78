"""
The sign space {-1, +1}^n and its binary indexing.

Index i encodes ε by bits: coordinate c (1-based) is -1 iff bit (n - c) of i
is set, so S⁺ (ε¹ = +1) is exactly 0 … 2^(n-1) - 1 and ε_{2^(n-1)-1} is
(+, -, …, -). Coordinatewise product is XOR of indices.
"""

from functools import lru_cache
from fractions import Fraction
from typing import Iterable, Sequence, Tuple, Union

from ..core.config import settings
from ..core.errors import InputError
from ..core.exactnum import RowVector


def _check_dimension(n: int) -> None:
    if not 1 <= n <= settings.max_dimension:
        raise InputError(f"dimension n={n} outside 1..{settings.max_dimension}")


@lru_cache(maxsize=None)
def coordinates(n: int, index: int) -> Tuple[int, ...]:
    """The ±1 coordinates of ε_index in dimension n."""
    return tuple(-1 if (index >> (n - c)) & 1 else 1 for c in range(1, n + 1))


class SignVector:
    """A sign vector ε ∈ {-1, +1}^n with its index."""

    __slots__ = ("n", "index", "coords")

    def __init__(self, n: int, index: int):
        _check_dimension(n)
        if not 0 <= index < (1 << n):
            raise InputError(f"index {index} outside 0..{(1 << n) - 1} for n={n}")
        self.n = n
        self.index = index
        self.coords = coordinates(n, index)

    def __reduce__(self):
        return (SignVector, (self.n, self.index))

    def __eq__(self, other) -> bool:
        if isinstance(other, SignVector):
            return (self.n, self.index) == (other.n, other.index)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.n, self.index))

    def __mul__(self, other: "SignVector") -> "SignVector":
        return times(self, other)

    def __neg__(self) -> "SignVector":
        return SignVector(self.n, self.index ^ ((1 << self.n) - 1))

    @property
    def in_positive_half(self) -> bool:
        return self.coords[0] == 1

    def conjugate(self) -> "SignVector":
        return conj(self)

    def as_row(self) -> RowVector:
        return RowVector(self.coords)

    def __str__(self) -> str:
        signs = ",".join("+" if c > 0 else "-" for c in self.coords)
        return f"ε{self.index}=({signs})"

    def __repr__(self) -> str:
        return f"SignVector(n={self.n}, index={self.index})"


def signvec(n: int, index: int) -> SignVector:
    return SignVector(n, index)


def index_of(coords: Sequence[int]) -> int:
    """Inverse of the indexing: the index of a ±1 coordinate sequence."""
    n = len(coords)
    index = 0
    for c, value in enumerate(coords, start=1):
        if value == -1:
            index |= 1 << (n - c)
        elif value != 1:
            raise InputError(f"coordinate {c} is {value}, expected ±1")
    return index


def from_row(row: Iterable[Union[int, Fraction]]) -> SignVector:
    """Read a RowVector of ±1 entries back as a sign vector."""
    coords = tuple(row)
    return SignVector(len(coords), index_of(coords))


def conj(epsilon: SignVector) -> SignVector:
    """The conjugate: same first coordinate, all others negated."""
    return SignVector(epsilon.n, (1 << (epsilon.n - 1)) - 1 - epsilon.index)


def conj_index(n: int, index: int) -> int:
    _check_dimension(n)
    half = 1 << (n - 1)
    if not 0 <= index < half:
        raise InputError(f"index {index} outside S⁺ = 0..{half - 1} for n={n}")
    return half - 1 - index


def times(x: SignVector, y: SignVector) -> SignVector:
    """Coordinatewise product (the group operation)."""
    if x.n != y.n:
        raise InputError(f"dimension mismatch: {x.n} vs {y.n}")
    return SignVector(x.n, x.index ^ y.index)


def positive_half(n: int) -> range:
    """Indices of S⁺, in increasing order."""
    _check_dimension(n)
    return range(1 << (n - 1))


def eval_product(epsilon: SignVector, a: Sequence) -> Fraction:
    """The scalar εa = Σ ε^c a_c."""
    if len(a) != epsilon.n:
        raise InputError(f"vector of length {len(a)} against n={epsilon.n}")
    return sum((Fraction(x) if s > 0 else -Fraction(x) for s, x in zip(epsilon.coords, a)), Fraction(0))
