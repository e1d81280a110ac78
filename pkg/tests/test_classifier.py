import asyncio
import random

import pytest

from src.core.errors import InputError
from src.models.schemas import LegStatus
from src.services.certify import check_witness
from src.services.classifier import ClassificationService, classify_pairs

REFUTED_LEGS = [*range(124, 128), *range(188, 192), *range(220, 224), 231, *range(235, 256)]


def test_classification_of_dimension_nine():
    classification = classify_pairs(9)
    assert len(classification.non_twins) == 34
    assert len(classification.twins) == 94
    expected = sorted(max(leg, 255 - leg) for leg in REFUTED_LEGS)
    assert classification.to_record()["non_twin_j"] == expected
    assert classification.is_twin((21, 234))
    assert classification.is_twin((234, 21))
    assert not classification.is_twin((24, 231))


def test_non_twin_witnesses_check_out():
    classification = classify_pairs(9)
    for entry in classification.non_twins:
        assert len(entry.witnesses) == 1
        assert check_witness(entry.witnesses[0]).accepted


def test_decisions_cover_every_leg():
    classification = classify_pairs(9)
    assert [d.leg for d in classification.decisions] == list(range(256))
    refuted = [d.leg for d in classification.decisions if d.status == LegStatus.REFUTE]
    assert refuted == REFUTED_LEGS


def test_leg_order_does_not_change_the_result():
    order = list(range(256))
    random.Random(31).shuffle(order)
    service = ClassificationService()
    shuffled = asyncio.run(service.classify(9, leg_order=order))
    assert shuffled == classify_pairs(9)


def test_parallel_classification_matches_serial():
    service = ClassificationService()
    parallel = asyncio.run(service.classify(7, jobs=2))
    serial = asyncio.run(ClassificationService().classify(7, jobs=1))
    assert parallel == serial


def test_results_are_cached_per_dimension():
    service = ClassificationService()
    first = asyncio.run(service.classify(5))
    assert asyncio.run(service.classify(5)) is first
    service.clear()
    assert asyncio.run(service.classify(5)) is not first


def test_leg_order_must_be_a_permutation():
    service = ClassificationService()
    with pytest.raises(InputError):
        asyncio.run(service.classify(4, leg_order=[0, 1, 2, 2, 4, 5, 6, 7]))
