"""
The cone Q of non-increasing non-negative vectors, its dual Q*, and the
cumulative-order lattice on the sign space.

V ∈ Q* iff every cumulative partial sum of V is non-negative. The order
V ⊆ W means W - V ∈ Q*; join and meet act on partial sums pointwise.
"""

import logging
from itertools import accumulate
from typing import Callable, Iterable, Sequence

from ..core.errors import InputError
from ..core.exactnum import RowVector, dot
from .signspace import SignVector, from_row, positive_half, signvec

logger = logging.getLogger(__name__)


def cumsum(V: Sequence) -> RowVector:
    """Cumulative partial sums (V_1, V_1 + V_2, …)."""
    return RowVector(accumulate(V))


def uncumsum(P: Sequence) -> RowVector:
    """Inverse of cumsum: first differences with P_0 = 0."""
    return RowVector(p - q for p, q in zip(P, [0] + list(P[:-1])))


def in_Q(R: Sequence) -> bool:
    """R ∈ Q iff R_1 ≥ R_2 ≥ … ≥ R_n ≥ 0."""
    return all(x >= y for x, y in zip(R, R[1:])) and R[-1] >= 0


def in_Qstar(V: Sequence) -> bool:
    """V ∈ Q* iff all partial sums are ≥ 0."""
    return all(p >= 0 for p in accumulate(V))


def in_Qstar_by_generators(V: Sequence) -> bool:
    """Membership through the generators (1,…,1,0,…,0) of Q.

    Same answer as in_Qstar; kept separate as an independent check.
    """
    n = len(V)
    generators = ([1] * m + [0] * (n - m) for m in range(1, n + 1))
    return all(dot(V, g) >= 0 for g in generators)


def precedes(V: Sequence, W: Sequence) -> bool:
    """V ⊆ W in the cumulative order, i.e. W - V ∈ Q*."""
    if len(V) != len(W):
        raise InputError(f"length mismatch: {len(V)} vs {len(W)}")
    return in_Qstar([w - v for v, w in zip(V, W)])


def join(V: Sequence, W: Sequence) -> RowVector:
    """Least upper bound: pointwise max of partial sums, differenced."""
    if len(V) != len(W):
        raise InputError(f"length mismatch: {len(V)} vs {len(W)}")
    return uncumsum([max(p, q) for p, q in zip(accumulate(V), accumulate(W))])


def meet(V: Sequence, W: Sequence) -> RowVector:
    """Greatest lower bound, meet(V, W) = -join(-V, -W)."""
    if len(V) != len(W):
        raise InputError(f"length mismatch: {len(V)} vs {len(W)}")
    return uncumsum([min(p, q) for p, q in zip(accumulate(V), accumulate(W))])


def join_signs(x: SignVector, y: SignVector) -> SignVector:
    return from_row(join(x.coords, y.coords))


def meet_signs(x: SignVector, y: SignVector) -> SignVector:
    return from_row(meet(x.coords, y.coords))


def _fold(indices: Iterable[int], n: int, mode: str) -> SignVector:
    if mode not in ("meet", "join"):
        raise InputError(f"mode must be 'meet' or 'join', got {mode!r}")
    combine = meet if mode == "meet" else join
    acc = None
    for index in indices:
        coords = signvec(n, index).coords
        acc = coords if acc is None else combine(acc, coords)
    if acc is None:
        raise InputError("empty index set has no bound in S⁺")
    return from_row(acc)


def glb_of(indices: Iterable[int], n: int = 9) -> SignVector:
    return _fold(indices, n, "meet")


def lub_of(indices: Iterable[int], n: int = 9) -> SignVector:
    return _fold(indices, n, "join")


def glb_filter(predicate: Callable[[int], bool], n: int = 9, mode: str = "meet") -> SignVector:
    """Fold meet (or join) over the S⁺ indices satisfying a predicate.

    Args:
        predicate: Test on an S⁺ index
        n: Dimension
        mode: "meet" for the greatest lower bound, "join" for the least upper

    Returns:
        The bound, which the lattice keeps inside the sign space
    """
    selected = [i for i in positive_half(n) if predicate(i)]
    logger.debug("glb_filter(%s): %d of %d indices selected", mode, len(selected), 1 << (n - 1))
    return _fold(selected, n, mode)
