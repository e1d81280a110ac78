import random
from fractions import Fraction

import pytest

from src.core.errors import InputError
from src.core.exactnum import RowVector
from src.models.schemas import CasePattern, LegStatus, TupleSpec
from src.services import simplex
from src.services.certify import check_lemma2, check_sqp_optimality, check_witness, dual_from_primal
from src.services.cone import cumsum, uncumsum
from src.services.ingestion_service import ingestion_service
from src.services.library import vector
from src.services.solver import (
    certificate_from_result,
    decide_leg,
    least_concave_majorant,
    lp_max_margin,
    qp_min_norm,
    witness_from_result,
)

REFUTED_LEGS = {*range(124, 128), *range(188, 192), *range(220, 224), 231, *range(235, 256)}


def _case(pairs, slots, signs=None):
    return TupleSpec(pairs=pairs), CasePattern(slots=slots, signs=signs)


def test_margin_lp_unique_midpoint():
    t, case = _case(((5, 250), (90, 165)), (2, 3))
    result = lp_max_margin(vector("R2"), t, case)
    assert result.margin == 0
    assert result.lam == (Fraction(1, 2), Fraction(1, 2))
    assert result.feasible


def test_margin_lp_single_leg():
    t, case = _case(((21, 234),), (1,))
    result = lp_max_margin(vector("R3"), t, case)
    assert result.lam == (1,)
    assert result.margin == Fraction(4, 3)


def test_margin_lp_negative_margin():
    t, case = _case(((0, 255),), (2,))
    result = lp_max_margin(vector("R0"), t, case)
    assert result.margin == -7
    assert not result.feasible


def test_margin_lp_keeps_wildcards_at_zero():
    t, case = _case(((0, 255), (94, 161), (105, 150), (109, 146)), (2, None, None, 7))
    result = lp_max_margin(vector("R5"), t, case)
    assert result.lam[1] == result.lam[2] == 0
    assert result.margin >= 0


def test_margin_lp_agrees_with_shipped_certificates():
    for _, cert in ingestion_service.load_certificates()[:40]:
        result = lp_max_margin(cert.R, cert.tuple_spec, cert.pattern)
        assert result.margin >= 0


def test_margin_lp_dimension_mismatch():
    t, case = _case(((21, 234),), (1,))
    with pytest.raises(InputError):
        lp_max_margin(RowVector([1, 0]), t, case)


def test_simplex_small_problem():
    # maximize x + y with x + 2y ≤ 4 and 3x + y ≤ 6
    result = simplex.maximize(
        [1, 1, 0, 0],
        [[1, 2, 1, 0], [3, 1, 0, 1]],
        [4, 6],
    )
    assert result.status == simplex.OPTIMAL
    assert result.x[:2] == [Fraction(8, 5), Fraction(6, 5)]
    assert result.value == Fraction(14, 5)


def test_simplex_infeasible_and_unbounded():
    assert simplex.maximize([1], [[1]], [-1]).status == simplex.INFEASIBLE
    assert simplex.maximize([1, 0], [[1, -1]], [0]).status == simplex.UNBOUNDED


def test_simplex_redundant_rows():
    result = simplex.maximize([1, 0], [[1, 1], [1, 1]], [1, 1])
    assert result.status == simplex.OPTIMAL
    assert result.value == 1


def test_least_concave_majorant_examples():
    assert least_concave_majorant([-1, -2, -3]) == RowVector([0, 0, 0])
    assert least_concave_majorant([1, 2, 3]) == RowVector([1, 1, 1])
    assert least_concave_majorant([0, 2, 2, 1]) == RowVector([1, 1, 0, 0])


def test_majorant_is_locally_minimal():
    rng = random.Random(42)
    delta = Fraction(1, 100)
    for _ in range(100):
        partials = [Fraction(rng.randint(-6, 6), 3) for _ in range(9)]
        R = least_concave_majorant(partials)
        levels = list(cumsum(R))
        assert all(p >= q for p, q in zip(levels, partials))
        for j in range(9):
            for step in (delta, -delta):
                moved = list(levels)
                moved[j] += step
                if any(p < q for p, q in zip(moved, partials)):
                    continue
                assert uncumsum(moved).norm_squared() >= R.norm_squared()


def test_qp_single_leg_refuted():
    t, case = _case(((240, 15),), (1,))
    result = qp_min_norm(t, case)
    assert result.R == RowVector([Fraction(3, 5)] * 5 + [0] * 4)
    assert result.value == Fraction(9, 5)
    assert result.status == LegStatus.REFUTE


def test_qp_single_leg_zero_optimum():
    t, case = _case(((0, 255),), (1,))
    result = qp_min_norm(t, case)
    assert result.R == vector("R0")
    assert result.value == 0
    assert result.status == LegStatus.CERT


def test_qp_two_pairs():
    t, case = _case(((5, 250), (90, 165)), (2, 3))
    result = qp_min_norm(t, case)
    assert result.R == vector("R2")
    assert result.value == 1
    assert result.lam == (Fraction(1, 2), Fraction(1, 2))
    assert check_sqp_optimality(result.R, result.lam, t, case).accepted
    assert dual_from_primal(result.R, result.lam, t, case) == result.dual


def test_qp_semi_eight_tuple_case():
    t, case = _case(((7, 248), (20, 235), (33, 222), (77, 178)), (2, 3, 5, 7))
    result = qp_min_norm(t, case)
    assert result.value == Fraction(9, 5)
    assert result.R == RowVector([Fraction(3, 5)] * 5 + [0] * 4)
    assert result.status == LegStatus.REFUTE


def test_qp_needs_concrete_case():
    t, case = _case(((5, 250), (90, 165)), (2, None))
    with pytest.raises(InputError):
        qp_min_norm(t, case)


def test_qp_results_are_unique_across_orderings():
    # the same legs listed in another order reach the same optimum
    first = qp_min_norm(*_case(((5, 250), (90, 165)), (2, 3)))
    second = qp_min_norm(*_case(((90, 165), (5, 250)), (1, 4), signs=(1, -1)))
    assert first.R == second.R


def test_certificate_from_result_marks_unused_slots():
    t, case = _case(((0, 255), (94, 161)), (1, 3))
    result = qp_min_norm(t, case)
    cert = certificate_from_result(result)
    assert check_lemma2(cert).accepted
    assert all(slot is None for slot, weight in zip(cert.pattern.slots, cert.lam) if weight == 0)


def test_result_conversions_check_status():
    refuted = qp_min_norm(*_case(((240, 15),), (1,)))
    with pytest.raises(InputError):
        certificate_from_result(refuted)
    certified = qp_min_norm(*_case(((0, 255),), (1,)))
    with pytest.raises(InputError):
        witness_from_result(certified, 0)


def test_decide_leg_examples():
    assert decide_leg(21).status == LegStatus.CERT
    assert decide_leg(170).status == LegStatus.CERT

    refuted = decide_leg(231)
    assert refuted.status == LegStatus.REFUTE
    assert refuted.R == RowVector([Fraction(1, 2)] * 4 + [Fraction(1, 5)] * 5)
    assert refuted.value == Fraction(6, 5)
    assert check_witness(refuted.witness).accepted

    assert decide_leg(240).value == Fraction(9, 5)


def test_decide_leg_out_of_range():
    with pytest.raises(InputError):
        decide_leg(256)


def test_decide_leg_partition():
    refuted = {leg for leg in range(256) if decide_leg(leg).status == LegStatus.REFUTE}
    assert refuted == REFUTED_LEGS
    assert len(refuted) == 34
