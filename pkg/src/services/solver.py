"""
Exact solvers for the per-case optimization problems.

For a case with signed legs e_1 … e_k the problem is

    minimize RR'  subject to  cum(R) ≥ Σ λ_i cum(e_i),  λ ≥ 0,  Σ λ = 1.

lp_max_margin fixes R and finds the λ that maximizes the smallest slack.
qp_min_norm solves the whole problem exactly: for k = 1 the optimum is the
slope sequence of a least concave majorant; for k ≥ 2 an active-set search
over (support of u, support of λ) solves the KKT equations in Fractions and
keeps the first candidate that passes the exact optimality check.
"""

import logging
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from ..core.config import settings
from ..core.errors import InputError, OptimalityError, SolverError
from ..core.exactnum import RowVector, solve_linear_system
from ..models.schemas import (
    CasePattern,
    Certificate,
    LegStatus,
    LPResult,
    QPResult,
    TupleSpec,
    TwinLegDecision,
    Witness,
)
from . import simplex
from .certify import build_L, case_legs, check_sqp_optimality, dual_from_primal
from .cone import cumsum
from .signspace import conj_index

logger = logging.getLogger(__name__)


def least_concave_majorant(partials: Sequence) -> RowVector:
    """Minimum-norm R with cum(R) ≥ partials, by greedy steepest chords.

    From the current point take the largest chord slope to a later point,
    preferring the farthest point on ties; once no slope is positive the
    rest of R is zero.
    """
    n = len(partials)
    R: List[Fraction] = []
    position, level = 0, Fraction(0)
    while position < n:
        best_slope, best_j = None, None
        for j in range(position + 1, n + 1):
            slope = (Fraction(partials[j - 1]) - level) / (j - position)
            if best_slope is None or slope >= best_slope:
                best_slope, best_j = slope, j
        if best_slope <= 0:
            R.extend([Fraction(0)] * (n - position))
            break
        R.extend([best_slope] * (best_j - position))
        position, level = best_j, Fraction(partials[best_j - 1])
    return RowVector(R)


def lp_max_margin(R: RowVector, tuple_spec: TupleSpec, pattern: CasePattern) -> LPResult:
    """Maximize min_j cum(R - L)_j over λ in the simplex (wildcards fixed at 0).

    Args:
        R: Fixed certificate vector
        tuple_spec: The tuple
        pattern: Case pattern, wildcards allowed

    Returns:
        LPResult; feasible iff the margin is ≥ 0
    """
    legs = case_legs(tuple_spec, pattern)
    if len(R) != tuple_spec.n:
        raise InputError(f"R has length {len(R)}, expected n={tuple_spec.n}")
    active = [i for i, leg in enumerate(legs) if leg is not None]
    if not active:
        raise InputError(f"case {pattern} has no concrete slot")
    n, m = tuple_spec.n, len(active)
    columns = [cumsum(legs[i]) for i in active]
    target = cumsum(R)

    # variables: λ_a (m), x⁺, x⁻, slacks s_1..s_n
    size = m + 2 + n
    A: List[List[Fraction]] = []
    b: List[Fraction] = []
    for j in range(n):
        row = [columns[a][j] for a in range(m)] + [Fraction(1), Fraction(-1)]
        row += [Fraction(1) if s == j else Fraction(0) for s in range(n)]
        A.append(row)
        b.append(target[j])
    A.append([Fraction(1)] * m + [Fraction(0)] * (2 + n))
    b.append(Fraction(1))
    c = [Fraction(0)] * m + [Fraction(1), Fraction(-1)] + [Fraction(0)] * n

    result = simplex.maximize(c, A, b)
    if result.status != simplex.OPTIMAL:
        raise SolverError(f"margin LP ended {result.status} for case {pattern}")

    lam = [Fraction(0)] * tuple_spec.k
    for a, i in enumerate(active):
        lam[i] = result.x[a]
    margin = min(cumsum(R - build_L(tuple_spec, pattern, lam)))
    if margin != result.value:
        raise SolverError(f"margin LP value {result.value} disagrees with recomputed {margin}")
    return LPResult(tuple_spec=tuple_spec, pattern=pattern, R=R, lam=tuple(lam), margin=margin)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _grid_guess(columns: List[RowVector], resolution: int) -> Tuple[frozenset, frozenset]:
    """Best λ on a rational grid; returns (breakpoints of its R, support of λ)."""
    n = len(columns[0])
    best = None
    for weights in _compositions(resolution, len(columns)):
        partials = [
            sum((w * col[j] for w, col in zip(weights, columns)), Fraction(0)) / resolution
            for j in range(n)
        ]
        R = least_concave_majorant(partials)
        value = R.norm_squared()
        if best is None or value < best[0]:
            best = (value, R, weights)
    _, R, weights = best
    breakpoints = frozenset(t for t in range(1, n + 1) if R[t - 1] > (R[t] if t < n else 0))
    support = frozenset(i for i, w in enumerate(weights) if w > 0)
    return breakpoints, support


def _solve_active_set(
    columns: List[RowVector], T: Sequence[int], S: Sequence[int]
) -> Optional[Tuple[RowVector, List[Fraction]]]:
    """Solve the KKT equations for u_T, λ_S, w; None when singular or invalid."""
    n, k = len(columns[0]), len(columns)
    size = len(T) + len(S) + 1
    matrix: List[List[Fraction]] = []
    rhs: List[Fraction] = []
    # active partial-sum constraints: Σ_t min(j, t) u_t - Σ_i C_ij λ_i = 0
    for j in T:
        row = [Fraction(min(j, t)) for t in T] + [-columns[i][j - 1] for i in S] + [Fraction(0)]
        matrix.append(row)
        rhs.append(Fraction(0))
    # stationarity in λ on its support: e_i·R + w = 0
    for i in S:
        row = [columns[i][t - 1] for t in T] + [Fraction(0)] * len(S) + [Fraction(1)]
        matrix.append(row)
        rhs.append(Fraction(0))
    matrix.append([Fraction(0)] * len(T) + [Fraction(1)] * len(S) + [Fraction(0)])
    rhs.append(Fraction(1))

    solution = solve_linear_system(matrix, rhs)
    if solution is None:
        return None
    u = solution[: len(T)]
    lam_s = solution[len(T) : len(T) + len(S)]
    if any(x < 0 for x in u) or any(x < 0 for x in lam_s):
        return None

    weights = dict(zip(T, u))
    R, tail = [Fraction(0)] * n, Fraction(0)
    for l in range(n, 0, -1):
        tail += weights.get(l, Fraction(0))
        R[l - 1] = tail
    lam = [Fraction(0)] * k
    for i, value in zip(S, lam_s):
        lam[i] = value
    return RowVector(R), lam


def _active_set_search(columns: List[RowVector], legs: List[RowVector]) -> Tuple[RowVector, List[Fraction]]:
    n, k = len(columns[0]), len(columns)
    guess_T, guess_S = _grid_guess(columns, settings.qp_grid_resolution)

    all_T = [frozenset(c) for size in range(n + 1) for c in combinations(range(1, n + 1), size)]
    all_T.sort(key=lambda T: (len(T ^ guess_T), len(T), sorted(T)))
    all_S = [frozenset(c) for size in range(1, k + 1) for c in combinations(range(k), size)]
    all_S.sort(key=lambda S: (len(S ^ guess_S), len(S), sorted(S)))

    tried = 0
    for T in all_T:
        for S in all_S:
            tried += 1
            candidate = _solve_active_set(columns, sorted(T), sorted(S))
            if candidate is None:
                continue
            R, lam = candidate
            partials = cumsum(R)
            L = [sum((lam[i] * columns[i][j] for i in range(k)), Fraction(0)) for j in range(n)]
            if any(p < q for p, q in zip(partials, L)):
                continue
            norm = R.norm_squared()
            if any(leg.dot(R) < norm for leg in legs):
                continue
            logger.debug("active set found after %d systems: T=%s S=%s", tried, sorted(T), sorted(S))
            return R, lam
    raise SolverError(f"active-set search exhausted {tried} systems without an optimum")


def qp_min_norm(tuple_spec: TupleSpec, pattern: CasePattern) -> QPResult:
    """Exact minimum of RR' for one concrete case, with its dual witness.

    Raises:
        InputError: If the pattern has wildcards
        SolverError: If no candidate passes the exact optimality check
    """
    if not pattern.is_concrete:
        raise InputError(f"case {pattern} has wildcards; a concrete case is required")
    legs: List[RowVector] = case_legs(tuple_spec, pattern)  # type: ignore[assignment]
    columns = [cumsum(leg) for leg in legs]

    if len(legs) == 1:
        R, lam = least_concave_majorant(columns[0]), [Fraction(1)]
    else:
        R, lam = _active_set_search(columns, legs)

    try:
        verdict = check_sqp_optimality(R, lam, tuple_spec, pattern)
    except OptimalityError as exc:
        raise SolverError(f"candidate for {pattern} is infeasible: {exc.detail}") from exc
    if not verdict.accepted:
        raise SolverError(f"optimum for {pattern} failed validation: {verdict.clause} {verdict.detail}")
    dual = dual_from_primal(R, lam, tuple_spec, pattern)
    return QPResult(
        tuple_spec=tuple_spec,
        pattern=pattern,
        R=R,
        lam=tuple(lam),
        value=R.norm_squared(),
        dual=dual,
    )


def certificate_from_result(result: QPResult, label: Optional[str] = None) -> Certificate:
    """A certificate from a CERT optimum, with '*' wherever λ = 0."""
    if result.status != LegStatus.CERT:
        raise InputError(f"case {result.pattern} has RR' > 1 and admits no certificate")
    slots = tuple(None if weight == 0 else slot for slot, weight in zip(result.pattern.slots, result.lam))
    pattern = CasePattern(slots=slots, signs=result.pattern.signs)
    return Certificate(
        tuple_spec=result.tuple_spec, pattern=pattern, R=result.R, lam=result.lam, label=label
    )


def witness_from_result(result: QPResult, leg: int) -> Witness:
    if result.status != LegStatus.REFUTE:
        raise InputError(f"leg {leg} is certified and has no witness")
    return Witness(leg=leg, R=result.R)


def decide_leg(leg: int, n: int = 9) -> TwinLegDecision:
    """Decide the k = 1 condition at a leg: certificate or refutation witness."""
    half = 1 << (n - 1)
    if not 0 <= leg < half:
        raise InputError(f"leg {leg} outside S⁺ = 0..{half - 1}")
    tuple_spec = TupleSpec(n=n, pairs=((leg, conj_index(n, leg)),))
    result = qp_min_norm(tuple_spec, CasePattern(slots=(1,)))
    status = result.status
    return TwinLegDecision(
        leg=leg,
        status=status,
        value=result.value,
        R=result.R,
        certificate=certificate_from_result(result) if status == LegStatus.CERT else None,
        witness=witness_from_result(result, leg) if status == LegStatus.REFUTE else None,
    )
