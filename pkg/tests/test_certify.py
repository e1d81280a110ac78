import random
from fractions import Fraction

import pytest

from src.core.errors import InputError, OptimalityError
from src.core.exactnum import RowVector
from src.models.schemas import CasePattern, Certificate, TupleSpec, Witness
from src.services.certify import (
    build_L,
    check_lemma2,
    check_sqp_optimality,
    check_witness,
    dual_from_primal,
    dual_objective,
    pair_bound_holds,
    uniqueness_gap,
)
from src.services.ingestion_service import ingestion_service
from src.services.library import vector
from src.services.oracle import random_cone_vector, spot_check_certificate
from src.services.signspace import signvec

LEG_240_OPTIMUM = RowVector([Fraction(3, 5)] * 5 + [0] * 4)
LEG_231_OPTIMUM = RowVector([Fraction(1, 2)] * 4 + [Fraction(1, 5)] * 5)


def _cert(pairs, case, R, lam, signs=None):
    record = {"tuple": pairs, "case": case, "R": R, "lambda": lam}
    if signs is not None:
        record["signs"] = signs
    return Certificate.model_validate(record)


def _case(pairs, slots, signs=None):
    return TupleSpec(pairs=pairs), CasePattern(slots=slots, signs=signs)


def test_build_L_two_legs():
    t, case = _case(((32, 223), (106, 149)), (2, 3))
    L = build_L(t, case, [Fraction(2, 5), Fraction(3, 5)])
    assert L == RowVector(Fraction(x, 5) for x in (1, 5, -1, -5, 5, -1, 5, -1, 5))


def test_build_L_four_tuple_case():
    t, case = _case(((5, 250), (90, 165)), (2, 3))
    L = build_L(t, case, [Fraction(1, 2), Fraction(1, 2)])
    assert L == RowVector([0, 1, 0, 1, 0, 0, 0, 0, 0])


def test_build_L_single_twin_leg():
    t, case = _case(((31, 224),), (1,))
    assert build_L(t, case, [1]) == -signvec(9, 31).as_row()


def test_build_L_errors():
    t, case = _case(((5, 250), (90, 165)), (2, None))
    with pytest.raises(InputError):
        build_L(t, case, [Fraction(1, 2), Fraction(1, 2)])
    with pytest.raises(InputError):
        build_L(t, case, [1])


def test_twin_certificate_accepted():
    cert = _cert([[21, 234]], ["1"], vector("R3").to_strings(), ["1"])
    assert check_lemma2(cert).accepted


def test_eight_tuple_certificate_with_wildcards_accepted():
    cert = _cert(
        [[0, 255], [94, 161], [105, 150], [109, 146]],
        ["2", "*", "*", "7"],
        vector("R5").to_strings(),
        ["2/5", "0", "0", "3/5"],
    )
    verdict = check_lemma2(cert)
    assert verdict.accepted
    assert verdict.clause is None


def test_appendix_style_certificate_accepted():
    cert = _cert([[32, 223], [106, 149]], ["2", "3"], vector("R5").to_strings(), ["2/5", "3/5"])
    assert check_lemma2(cert).accepted


@pytest.mark.parametrize(
    "case,R,lam,clause",
    [
        (["2"], ["0"] * 9, ["1"], "cone-membership"),
        (["1"], ["3/5", "3/5", "1/5", "1/5", "1/5", "1/5", "1/5", "1/5", "2/5"], ["1"], "norm"),
        (["1"], ["0"] * 9, ["-1"], "lambda-nonnegative"),
        (["1"], ["0"] * 9, ["1/2"], "lambda-sum"),
    ],
)
def test_rejected_certificates_name_the_clause(case, R, lam, clause):
    verdict = check_lemma2(_cert([[0, 255]], case, R, lam))
    assert not verdict.accepted
    assert verdict.clause == clause


def test_wildcard_with_weight_is_rejected_first():
    cert = _cert([[5, 250], [90, 165]], ["2", "*"], ["-1"] + ["0"] * 8, ["1/2", "1/2"])
    assert check_lemma2(cert).clause == "wildcard-lambda"


def test_general_signs_are_honoured():
    # σ = +1 on the only slot: R1 - ε255 = (0, 1, …, 1) ∈ Q*
    cert = _cert([[255, 0]], ["1"], vector("R1").to_strings(), ["1"], signs=[1])
    assert check_lemma2(cert).accepted
    assert cert.to_record()["signs"] == [1]


def test_witness_examples():
    accepted = check_witness(Witness(leg=231, R=LEG_231_OPTIMUM))
    assert accepted.accepted
    assert LEG_231_OPTIMUM.norm_squared() == Fraction(6, 5)
    assert check_witness(Witness(leg=240, R=LEG_240_OPTIMUM)).accepted
    assert LEG_240_OPTIMUM.norm_squared() == Fraction(9, 5)

    assert check_witness(Witness(leg=21, R=vector("R3"))).clause == "norm"
    assert check_witness(Witness(leg=0, R=LEG_240_OPTIMUM)).clause == "leg-inequality"
    assert check_witness(Witness(leg=240, R=RowVector([0, 2] + [0] * 7))).clause == "in-cone"


def test_witness_leg_outside_positive_half():
    with pytest.raises(InputError):
        check_witness(Witness(leg=300, R=LEG_240_OPTIMUM))


def test_witness_refutes_both_legs_of_its_pair():
    for leg, R in ((231, LEG_231_OPTIMUM), (240, LEG_240_OPTIMUM)):
        norm = R.norm_squared()
        for index in (leg, 255 - leg):
            product = signvec(9, index).as_row().dot(R)
            assert product * product > norm


def test_sqp_optimality_examples():
    t, case = _case(((240, 15),), (1,))
    assert check_sqp_optimality(LEG_240_OPTIMUM, [1], t, case).accepted

    t, case = _case(((21, 234),), (1,))
    verdict = check_sqp_optimality(vector("R3"), [1], t, case)
    assert verdict.clause == "optimality"

    t, case = _case(((0, 255),), (1,))
    assert check_sqp_optimality(vector("R0"), [1], t, case).accepted


def test_sqp_optimality_rejects_infeasible_input():
    t, case = _case(((0, 255),), (2,))
    with pytest.raises(OptimalityError, match="R - L is not in Q"):
        check_sqp_optimality(vector("R0"), [1], t, case)

    t, case = _case(((0, 255),), (1,))
    with pytest.raises(OptimalityError, match="probability vector"):
        check_sqp_optimality(vector("R0"), [Fraction(1, 2)], t, case)
    with pytest.raises(InputError):
        check_sqp_optimality(vector("R0"), [-1], t, case)


def test_sqp_optimality_needs_a_concrete_case():
    t, case = _case(((5, 250), (90, 165)), (2, None))
    with pytest.raises(InputError):
        check_sqp_optimality(vector("R2"), [1, 0], t, case)


def test_dual_of_unit_vector_optimum():
    t, case = _case(((255, 0),), (1,), signs=(1,))
    dual = dual_from_primal(vector("R1"), [1], t, case)
    assert dual.u == (1,) + (0,) * 8
    assert dual.v == (0,)
    assert dual.w == -1
    assert dual_objective(dual) == Fraction(1, 2)


def test_dual_of_leg_240_optimum():
    t, case = _case(((240, 15),), (1,))
    dual = dual_from_primal(LEG_240_OPTIMUM, [1], t, case)
    assert dual.u == (0, 0, 0, 0, Fraction(3, 5), 0, 0, 0, 0)
    assert dual.w == Fraction(-9, 5)
    assert dual_objective(dual) == LEG_240_OPTIMUM.norm_squared() / 2


def test_dual_of_zero_optimum():
    t, case = _case(((0, 255),), (1,))
    dual = dual_from_primal(vector("R0"), [1], t, case)
    assert dual.u == (0,) * 9
    assert dual.w == 0
    assert dual_objective(dual) == 0


def test_dual_rejects_non_optimal_points():
    t, case = _case(((21, 234),), (1,))
    with pytest.raises(OptimalityError, match="v ⪰ 0 violated at leg 1"):
        dual_from_primal(vector("R3"), [1], t, case)

    t, case = _case(((0, 255),), (1,))
    with pytest.raises(OptimalityError, match="u ⪰ 0 violated at position 1"):
        dual_from_primal(RowVector([0, 1] + [0] * 7), [1], t, case)

    t, case = _case(((0, 255),), (2,))
    with pytest.raises(OptimalityError, match="infeasible"):
        dual_from_primal(vector("R0"), [1], t, case)


def test_uniqueness_gap_is_non_negative_against_feasible_points():
    # S = (1, …, 1) is feasible for leg 240
    S = RowVector([1] * 9)
    assert uniqueness_gap(LEG_240_OPTIMUM, S) == Fraction(12, 5)
    assert uniqueness_gap(LEG_240_OPTIMUM, LEG_240_OPTIMUM) == 0


def test_conjugate_pair_bound_sampled():
    rng = random.Random(99)
    decided = 0
    for _ in range(500):
        i = rng.randrange(256)
        a = random_cone_vector(rng, 9)
        outcome = pair_bound_holds(i, 255 - i, a)
        assert outcome is not False
        decided += outcome is True
    assert decided > 0


def test_accepted_certificates_hold_on_sampled_vectors():
    cert = _cert([[32, 223], [106, 149]], ["2", "3"], vector("R5").to_strings(), ["2/5", "3/5"])
    check = spot_check_certificate(cert, samples=300, seed=1)
    assert check.violations == []
    assert check.tested + check.skipped == 300
    assert check.tested > 0


@pytest.mark.slow
def test_every_shipped_certificate_holds_on_sampled_vectors():
    certificates = ingestion_service.load_certificates()
    assert len(certificates) == 521
    tested = 0
    for number, (cid, cert) in enumerate(certificates):
        assert check_lemma2(cert).accepted, cid
        check = spot_check_certificate(cert, samples=200, seed=number)
        assert check.violations == [], cid
        tested += check.tested
    assert tested > 0


@pytest.mark.slow
def test_conjugate_pair_bound_at_scale():
    rng = random.Random(4242)
    for _ in range(10_000):
        i = rng.randrange(256)
        assert pair_bound_holds(i, 255 - i, random_cone_vector(rng, 9)) is not False
