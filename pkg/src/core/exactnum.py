"""
Exact rational scalars and row vectors.

Everything that takes part in a verdict is computed with `fractions.Fraction`.
Vectors are immutable rows; parsing accepts integer and "p/q" tokens only, so
binary floating point never enters the pipeline.
"""

import re
from fractions import Fraction
from typing import Iterable, Iterator, List, Optional, Sequence, Union

from .errors import InputError

Rational = Fraction

_TOKEN = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")

Scalar = Union[int, Fraction]


def parse_rational(token: Union[str, int, Fraction]) -> Fraction:
    """Parse an integer or "p/q" token into an exact rational.

    Args:
        token: The token text, or an int/Fraction passed through unchanged

    Returns:
        The parsed Fraction

    Raises:
        InputError: For decimals, floats, empty tokens or a zero denominator
    """
    if isinstance(token, bool):
        raise InputError(f"not a rational: {token!r}")
    if isinstance(token, (int, Fraction)):
        return Fraction(token)
    if not isinstance(token, str):
        raise InputError(f"not a rational: {token!r}")
    match = _TOKEN.match(token)
    if match is None:
        raise InputError(f"malformed rational token: {token!r}")
    numerator, denominator = match.groups()
    if denominator is not None and int(denominator) == 0:
        raise InputError(f"zero denominator in {token!r}")
    return Fraction(int(numerator), int(denominator or 1))


def format_rational(value: Fraction) -> str:
    """Render a rational as "p" or "p/q" in lowest terms."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class RowVector:
    """An immutable row vector of exact rationals."""

    __slots__ = ("_entries",)

    def __init__(self, entries: Iterable[Scalar]):
        values = tuple(parse_rational(x) for x in entries)
        if not values:
            raise InputError("a vector needs at least one entry")
        self._entries = values

    @classmethod
    def zeros(cls, n: int) -> "RowVector":
        return cls([0] * n)

    @classmethod
    def unit(cls, n: int, position: int) -> "RowVector":
        """The 1-based unit vector e_position of length n."""
        return cls([1 if i == position else 0 for i in range(1, n + 1)])

    @property
    def entries(self) -> tuple:
        return self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self._entries)

    def __getitem__(self, index):
        return self._entries[index]

    def __eq__(self, other) -> bool:
        if isinstance(other, RowVector):
            return self._entries == other._entries
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._entries)

    def __reduce__(self):
        return (RowVector, (self._entries,))

    def _same_length(self, other: "RowVector") -> None:
        if len(self) != len(other):
            raise InputError(f"length mismatch: {len(self)} vs {len(other)}")

    def __add__(self, other: "RowVector") -> "RowVector":
        self._same_length(other)
        return RowVector(x + y for x, y in zip(self._entries, other._entries))

    def __sub__(self, other: "RowVector") -> "RowVector":
        self._same_length(other)
        return RowVector(x - y for x, y in zip(self._entries, other._entries))

    def __neg__(self) -> "RowVector":
        return RowVector(-x for x in self._entries)

    def __mul__(self, scalar: Scalar) -> "RowVector":
        scalar = Fraction(scalar)
        return RowVector(scalar * x for x in self._entries)

    __rmul__ = __mul__

    def dot(self, other: "RowVector") -> Fraction:
        return dot(self, other)

    def norm_squared(self) -> Fraction:
        return dot(self, self)

    def to_strings(self) -> List[str]:
        return [format_rational(x) for x in self._entries]

    def __str__(self) -> str:
        return format_vector(self)

    def __repr__(self) -> str:
        return f"RowVector({format_vector(self)})"


def dot(x: Sequence[Scalar], y: Sequence[Scalar]) -> Fraction:
    """Exact inner product of two equal-length rows."""
    if len(x) != len(y):
        raise InputError(f"length mismatch: {len(x)} vs {len(y)}")
    return sum((Fraction(a) * b for a, b in zip(x, y)), Fraction(0))


def parse_vector(text: Union[str, Sequence], n: Optional[int] = None) -> RowVector:
    """Parse "a1,a2,...,an" (optionally parenthesised) or a list of tokens.

    Raises:
        InputError: For malformed entries, or a length other than n when n is given
    """
    if isinstance(text, str):
        stripped = text.strip().strip("()[]")
        if not stripped:
            raise InputError("empty vector")
        tokens = stripped.split(",")
    else:
        tokens = list(text)
    vector = RowVector(parse_rational(token) for token in tokens)
    if n is not None and len(vector) != n:
        raise InputError(f"vector has {len(vector)} entries, expected n={n}")
    return vector


def format_vector(vector: Iterable[Scalar]) -> str:
    return "(" + ",".join(format_rational(Fraction(x)) for x in vector) + ")"


def solve_linear_system(
    matrix: Sequence[Sequence[Scalar]], rhs: Sequence[Scalar]
) -> Optional[List[Fraction]]:
    """Solve a square system exactly by Gaussian elimination.

    Args:
        matrix: Square coefficient matrix (rows)
        rhs: Right-hand side

    Returns:
        The unique solution, or None when the matrix is singular
    """
    size = len(matrix)
    if size == 0:
        return []
    if len(rhs) != size or any(len(row) != size for row in matrix):
        raise InputError("solve_linear_system expects a square system")

    m = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]

    for col in range(size):
        pivot = next((r for r in range(col, size) if m[r][col] != 0), None)
        if pivot is None:
            return None
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
        fp = m[col][col]
        for r in range(size):
            if r == col or m[r][col] == 0:
                continue
            factor = m[r][col] / fp
            for c in range(col, size + 1):
                m[r][c] -= m[col][c] * factor

    return [m[r][size] / m[r][r] for r in range(size)]
