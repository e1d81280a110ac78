"""
Certificate checking.

A certificate (R, λ) covers a case of a tuple when λ is a probability vector,
RR' ≤ 1 and R - L ∈ Q*, where L = Σ λ_ℓ σ_ℓ ε_{s_ℓ}. Witnesses refute the
k = 1 condition at a leg. The SQP routines check optimality of a candidate
and produce the matching dual variables.
"""

import logging
from fractions import Fraction
from typing import List, Optional, Sequence

from ..core.errors import InputError, OptimalityError
from ..core.exactnum import RowVector, dot, format_rational
from ..models.schemas import CasePattern, Certificate, DualWitness, TupleSpec, Verdict, Witness
from .cone import cumsum, in_Q, in_Qstar
from .signspace import signvec

logger = logging.getLogger(__name__)


def case_legs(tuple_spec: TupleSpec, pattern: CasePattern) -> List[Optional[RowVector]]:
    """The signed legs σ_ℓ ε_{s_ℓ} of a case, None at wildcards."""
    if pattern.k != tuple_spec.k:
        raise InputError(f"case {pattern} does not fit tuple {tuple_spec.label()}")
    legs: List[Optional[RowVector]] = []
    for slot, sigma in zip(pattern.slots, pattern.resolved_signs()):
        if slot is None:
            legs.append(None)
        else:
            legs.append(signvec(tuple_spec.n, tuple_spec.position(slot)).as_row() * sigma)
    return legs


def _concrete_legs(tuple_spec: TupleSpec, pattern: CasePattern) -> List[RowVector]:
    if not pattern.is_concrete:
        raise InputError(f"case {pattern} has wildcards; a concrete case is required")
    return case_legs(tuple_spec, pattern)  # type: ignore[return-value]


def build_L(tuple_spec: TupleSpec, pattern: CasePattern, lam: Sequence[Fraction]) -> RowVector:
    """L = Σ λ_ℓ σ_ℓ ε_{s_ℓ}; wildcard slots must carry λ = 0."""
    if len(lam) != tuple_spec.k:
        raise InputError(f"{len(lam)} multipliers for a tuple of {tuple_spec.k} pairs")
    L = RowVector.zeros(tuple_spec.n)
    for leg, weight in zip(case_legs(tuple_spec, pattern), lam):
        if leg is None:
            if weight != 0:
                raise InputError(f"wildcard slot carries λ = {format_rational(weight)}")
            continue
        L = L + leg * weight
    return L


def _lambda_verdict(lam: Sequence[Fraction]) -> Optional[Verdict]:
    for position, weight in enumerate(lam, start=1):
        if weight < 0:
            return Verdict.reject("lambda-nonnegative", f"λ_{position} = {format_rational(weight)}")
    total = sum(lam, Fraction(0))
    if total != 1:
        return Verdict.reject("lambda-sum", f"Σλ = {format_rational(total)}")
    return None


def check_lemma2(cert: Certificate) -> Verdict:
    """Check one certificate exactly, naming the first violated clause."""
    for slot, weight in zip(cert.pattern.slots, cert.lam):
        if slot is None and weight != 0:
            return Verdict.reject("wildcard-lambda", f"λ = {format_rational(weight)} on a '*' slot")

    rejected = _lambda_verdict(cert.lam)
    if rejected is not None:
        return rejected

    norm = cert.R.norm_squared()
    if norm > 1:
        return Verdict.reject("norm", f"RR' = {format_rational(norm)} > 1")

    L = build_L(cert.tuple_spec, cert.pattern, cert.lam)
    partials = cumsum(cert.R - L)
    for j, value in enumerate(partials, start=1):
        if value < 0:
            return Verdict.reject(
                "cone-membership", f"cum(R - L)_{j} = {format_rational(value)} < 0"
            )
    return Verdict.accept()


def check_witness(witness: Witness) -> Verdict:
    """Accept iff R ∈ Q, RR' > 1 and -ε_leg · R ≥ RR'."""
    R = witness.R
    n = len(R)
    if not 0 <= witness.leg < (1 << (n - 1)):
        raise InputError(f"leg {witness.leg} outside S⁺ for n={n}")
    if not in_Q(R):
        return Verdict.reject("in-cone", f"{R} is not non-increasing and non-negative")
    norm = R.norm_squared()
    if norm <= 1:
        return Verdict.reject("norm", f"RR' = {format_rational(norm)} ≤ 1")
    product = -signvec(n, witness.leg).as_row().dot(R)
    if product < norm:
        return Verdict.reject(
            "leg-inequality",
            f"-ε{witness.leg}·R = {format_rational(product)} < RR' = {format_rational(norm)}",
        )
    return Verdict.accept()


def check_sqp_optimality(
    R: RowVector, lam: Sequence[Fraction], tuple_spec: TupleSpec, pattern: CasePattern
) -> Verdict:
    """A feasible (R, λ) is optimal iff R ∈ Q and e_i·R ≥ RR' for every leg.

    Raises:
        OptimalityError: If (R, λ) is not feasible for the case
    """
    legs = _concrete_legs(tuple_spec, pattern)
    rejected = _lambda_verdict(lam)
    if rejected is not None:
        raise OptimalityError(f"infeasible: λ is not a probability vector ({rejected.detail})")
    L = build_L(tuple_spec, pattern, lam)
    if not in_Qstar(R - L):
        raise OptimalityError("infeasible: R - L is not in Q*")
    if not in_Q(R):
        return Verdict.reject("in-cone", f"{R} is not in Q")
    norm = R.norm_squared()
    for number, leg in enumerate(legs, start=1):
        product = leg.dot(R)
        if product < norm:
            return Verdict.reject(
                "optimality",
                f"e_{number}·R = {format_rational(product)} < RR' = {format_rational(norm)}",
            )
    return Verdict.accept()


def dual_from_primal(
    R: RowVector, lam: Sequence[Fraction], tuple_spec: TupleSpec, pattern: CasePattern
) -> DualWitness:
    """Dual variables of an optimal (R, λ) with complementary slackness checked.

    Raises:
        OptimalityError: Naming the violated feasibility, sign or slackness condition
    """
    legs = _concrete_legs(tuple_spec, pattern)
    if _lambda_verdict(lam) is not None:
        raise OptimalityError("λ is not a probability vector")
    L = build_L(tuple_spec, pattern, lam)
    slack = cumsum(R - L)
    if any(s < 0 for s in slack):
        raise OptimalityError("infeasible: R - L is not in Q*")

    n = len(R)
    u = [R[j] - (R[j + 1] if j + 1 < n else 0) for j in range(n)]
    for j, value in enumerate(u, start=1):
        if value < 0:
            raise OptimalityError(f"u ⪰ 0 violated at position {j}: u_{j} = {format_rational(value)}")

    norm = R.norm_squared()
    v = [leg.dot(R) - norm for leg in legs]
    for number, value in enumerate(v, start=1):
        if value < 0:
            raise OptimalityError(f"v ⪰ 0 violated at leg {number}: v_{number} = {format_rational(value)}")

    if dot(u, slack) != 0:
        raise OptimalityError("complementary slackness u·cum(R - L) = 0 fails")
    if dot(lam, v) != 0:
        raise OptimalityError("complementary slackness λ·v = 0 fails")
    return DualWitness(u=tuple(u), v=tuple(v), w=-norm)


def dual_objective(dual: DualWitness) -> Fraction:
    """g(u, v, w) = -½‖Q⁻¹u‖² - w, where (Q⁻¹u)_l = -Σ_{j ≥ l} u_j."""
    tail = Fraction(0)
    squares = Fraction(0)
    for value in reversed(dual.u):
        tail += value
        squares += tail * tail
    return -squares / 2 - dual.w


def uniqueness_gap(R: RowVector, S: RowVector) -> Fraction:
    """SS' - RR' - (S - R)(S - R)', non-negative when R is optimal and S feasible."""
    difference = S - R
    return S.norm_squared() - R.norm_squared() - difference.norm_squared()


def pair_bound_holds(i: int, j: int, a: Sequence, n: int = 9) -> Optional[bool]:
    """For a conjugate pair with ε_i a ≥ 0 and ε_j a ≥ 0, min of the squares ≤ aa'.

    Returns None when the sign precondition does not hold.
    """
    row = RowVector(a)
    first = signvec(n, i).as_row().dot(row)
    second = signvec(n, j).as_row().dot(row)
    if first < 0 or second < 0:
        return None
    return min(first * first, second * second) <= row.norm_squared()
