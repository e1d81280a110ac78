import logging
import random
from fractions import Fraction

import pytest

from src.core.errors import InputError
from src.core.exactnum import RowVector
from src.services import oracle
from src.services.library import vector
from src.services.oracle import (
    count_good,
    fraction_good,
    hk_table,
    random_cone_vector,
    sample_min_fraction,
    to_gray_code,
)
from src.services.signspace import eval_product, signvec


@pytest.mark.parametrize(
    "label,count_lt",
    [("R1", 0), ("R2", 192), ("R3*", 240), ("R4", 252), ("R3", 252), ("R5", 282), ("R6", 290)],
)
def test_strict_counts_at_library_vectors(label, count_lt):
    result = count_good(vector(label))
    assert result.count_lt == count_lt
    assert result.total == 512


def test_weak_counts():
    assert count_good(vector("R3")).count_le == 420
    assert count_good(vector("R1")).count_le == 512
    assert fraction_good(vector("R3"), strict=True) == Fraction(63, 128)


def test_counts_match_direct_enumeration():
    rng = random.Random(4)
    for n in (1, 3, 6):
        a = random_cone_vector(rng, n)
        norm = a.norm_squared()
        values = [eval_product(signvec(n, index), a) ** 2 for index in range(1 << n)]
        result = count_good(a)
        assert result.count_lt == sum(1 for v in values if v < norm)
        assert result.count_le == sum(1 for v in values if v <= norm)


def test_counts_are_invariant_under_sign_order_and_scale():
    a = RowVector([Fraction(3, 5), Fraction(3, 5), Fraction(1, 5), Fraction(1, 5), Fraction(1, 5)])
    reference = count_good(a)
    for variant in (
        RowVector([Fraction(1, 5), Fraction(-3, 5), Fraction(1, 5), Fraction(3, 5), Fraction(-1, 5)]),
        a * Fraction(7, 3),
    ):
        result = count_good(variant)
        assert (result.count_lt, result.count_le) == (reference.count_lt, reference.count_le)


def test_gray_code_changes_one_bit():
    for step in range(1, 256):
        change = to_gray_code(step) ^ to_gray_code(step - 1)
        assert change & (change - 1) == 0


def test_count_rejects_large_dimension():
    with pytest.raises(InputError):
        count_good([1] * 17)


def test_hk_table_reports_the_mismatch(caplog):
    with caplog.at_level(logging.WARNING):
        table = hk_table()
    entries = {entry.label: entry for entry in table.entries}
    assert entries["R2"].fraction == Fraction(3, 8)
    assert entries["R3*"].fraction == Fraction(15, 32)
    assert entries["R3"].fraction == Fraction(63, 128)
    assert entries["R3"].match is True
    assert entries["R4"].fraction == Fraction(252, 512)
    assert entries["R4"].match is False
    assert entries["R5"].match is None
    assert [claim.k for claim in table.claims] == [2, 3, 5, 7]
    assert "R4" in caplog.text


def test_two_dimensional_minimum_is_one_half():
    result = sample_min_fraction(2, 200, seed=1)
    assert result.min_fraction == Fraction(1, 2)
    assert result.n == 2


def test_sampling_is_deterministic_across_jobs():
    serial = sample_min_fraction(4, 2500, seed=7, jobs=1)
    parallel = sample_min_fraction(4, 2500, seed=7, jobs=2)
    assert serial.min_fraction == parallel.min_fraction
    assert serial.worst == parallel.worst


def test_sampling_fans_out_through_the_batch_runner(monkeypatch):
    calls = []

    def recording_run_batch(func, arguments, jobs=1):
        calls.append((len(arguments), jobs))
        return [func(*args) for args in arguments]

    monkeypatch.setattr(oracle, "run_batch", recording_run_batch)
    monkeypatch.setattr(oracle.settings, "sample_batch_size", 100)
    result = sample_min_fraction(3, 250, seed=5, jobs=3)
    assert calls == [(3, 3)]
    assert result.samples == 250


def test_sampling_rejects_bad_arguments():
    with pytest.raises(InputError):
        sample_min_fraction(9, 0, seed=1)
    with pytest.raises(InputError):
        sample_min_fraction(0, 10, seed=1)


def test_random_cone_vectors_lie_in_the_cone():
    rng = random.Random(0)
    for _ in range(100):
        a = random_cone_vector(rng, 9)
        assert list(a) == sorted(a, reverse=True)
        assert a[-1] >= 0


@pytest.mark.slow
def test_at_least_half_of_the_signs_are_good_in_dimension_nine():
    result = sample_min_fraction(9, 100_000, seed=2024, jobs=2)
    assert result.min_fraction >= Fraction(1, 2)
