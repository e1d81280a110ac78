"""
Exact two-phase tableau simplex over Fraction with Bland's rule.

Solves  maximize c·z  subject to  A z = b, z ≥ 0.  Bland's rule (lowest
entering index, ties in the ratio test broken by the lowest basic index)
keeps degenerate problems from cycling.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from ..core.errors import SolverError

logger = logging.getLogger(__name__)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class SimplexResult:
    status: str
    x: Optional[List[Fraction]] = None
    value: Optional[Fraction] = None
    pivots: int = 0


class Tableau:
    """Dense tableau rows [A | b] with the current basis."""

    def __init__(self, rows: List[List[Fraction]], basis: List[int]):
        self.rows = rows
        self.basis = basis
        self.pivots = 0

    @property
    def width(self) -> int:
        return len(self.rows[0]) - 1 if self.rows else 0

    def pivot(self, r: int, col: int) -> None:
        row = self.rows[r]
        norm = row[col]
        self.rows[r] = row = [x / norm for x in row]
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            mult = other[col]
            if mult != 0:
                self.rows[i] = [x - mult * y for x, y in zip(other, row)]
        self.basis[r] = col
        self.pivots += 1

    def reduced_costs(self, cost: Sequence[Fraction]) -> List[Fraction]:
        reduced = list(cost)
        for r, var in enumerate(self.basis):
            cb = cost[var]
            if cb != 0:
                reduced = [rc - cb * a for rc, a in zip(reduced, self.rows[r][:-1])]
        return reduced

    def iterate(self, cost: Sequence[Fraction], allowed: int) -> str:
        """Run Bland pivots until optimal or unbounded; columns ≥ allowed never enter."""
        while True:
            reduced = self.reduced_costs(cost)
            entering = next((j for j in range(allowed) if reduced[j] > 0), None)
            if entering is None:
                return OPTIMAL
            leaving = None
            best = None
            for r, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    ratio = row[-1] / a
                    if (
                        best is None
                        or ratio < best
                        or (ratio == best and self.basis[r] < self.basis[leaving])
                    ):
                        best, leaving = ratio, r
            if leaving is None:
                return UNBOUNDED
            self.pivot(leaving, entering)

    def solution(self, size: int) -> List[Fraction]:
        x = [Fraction(0)] * size
        for r, var in enumerate(self.basis):
            if var < size:
                x[var] = self.rows[r][-1]
        return x


def maximize(
    c: Sequence[Fraction], A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]
) -> SimplexResult:
    """Maximize c·z over {A z = b, z ≥ 0} exactly.

    Args:
        c: Objective coefficients
        A: Equality constraint rows
        b: Right-hand side

    Returns:
        SimplexResult with status and, when optimal, z and the optimal value
    """
    m, size = len(A), len(c)
    if any(len(row) != size for row in A) or len(b) != m:
        raise SolverError("simplex: inconsistent problem dimensions")

    # Phase I: one artificial per row, rows sign-normalized so b ≥ 0
    rows = []
    for i, (row, rhs) in enumerate(zip(A, b)):
        sign = -1 if rhs < 0 else 1
        artificial = [Fraction(1) if k == i else Fraction(0) for k in range(m)]
        rows.append([Fraction(sign * x) for x in row] + artificial + [Fraction(sign * rhs)])
    tableau = Tableau(rows, [size + i for i in range(m)])

    phase_one_cost = [Fraction(0)] * size + [Fraction(-1)] * m
    tableau.iterate(phase_one_cost, size + m)
    infeasibility = sum((tableau.rows[r][-1] for r, var in enumerate(tableau.basis) if var >= size), Fraction(0))
    if infeasibility > 0:
        return SimplexResult(status=INFEASIBLE, pivots=tableau.pivots)

    # Drive remaining (zero-valued) artificials out of the basis; drop redundant rows
    r = 0
    while r < len(tableau.rows):
        if tableau.basis[r] >= size:
            col = next((j for j in range(size) if tableau.rows[r][j] != 0), None)
            if col is None:
                del tableau.rows[r]
                del tableau.basis[r]
                continue
            tableau.pivot(r, col)
        r += 1
    tableau.rows = [row[:size] + [row[-1]] for row in tableau.rows]

    # Phase II
    status = tableau.iterate([Fraction(x) for x in c], size)
    if status == UNBOUNDED:
        return SimplexResult(status=UNBOUNDED, pivots=tableau.pivots)
    x = tableau.solution(size)
    value = sum((Fraction(ci) * xi for ci, xi in zip(c, x)), Fraction(0))
    logger.debug("simplex optimal after %d pivots, value %s", tableau.pivots, value)
    return SimplexResult(status=OPTIMAL, x=x, value=value, pivots=tableau.pivots)
