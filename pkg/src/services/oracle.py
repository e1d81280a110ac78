"""
Brute-force counting over the sign space.

count_good walks S⁺ in Gray-code order with one incremental update per step
and compares squares of integers, so the counts are exact. Every ε and -ε
give the same |εa|, so each S⁺ element stands for two sign vectors.
"""

import logging
import math
import random
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from ..core.config import settings
from ..core.errors import InputError
from ..core.exactnum import RowVector
from ..models.schemas import Certificate, CkEntry, CountResult, HkClaim, HkTable, SampleResult, SpotCheck
from .batch import run_batch
from .library import HK_CLAIMS, HK_ROWS, vector
from .signspace import signvec

logger = logging.getLogger(__name__)


def to_gray_code(x: int) -> int:
    return (x >> 1) ^ x


def _integer_scaling(a: RowVector) -> List[int]:
    scale = math.lcm(*(x.denominator for x in a))
    return [int(x * scale) for x in a]


def count_good(a: Sequence) -> CountResult:
    """Count ε with (εa)² < aa' and with (εa)² ≤ aa'.

    Args:
        a: Vector of length 1..max_dimension; any signs and order

    Returns:
        CountResult over all 2^n sign vectors
    """
    row = RowVector(a)
    n = len(row)
    if n > settings.max_dimension:
        raise InputError(f"dimension n={n} exceeds {settings.max_dimension}")

    values = _integer_scaling(row)
    norm = sum(x * x for x in values)
    signs = [1] * n
    total = sum(values)
    strict = weak = 0

    for step in range(1 << (n - 1)):
        if step:
            # bit b of the Gray code governs coordinate n - b (1-based); b ≤ n - 2
            bit = (to_gray_code(step) ^ to_gray_code(step - 1)).bit_length() - 1
            position = n - 1 - bit
            total -= 2 * signs[position] * values[position]
            signs[position] = -signs[position]
        square = total * total
        if square < norm:
            strict += 1
        if square <= norm:
            weak += 1

    return CountResult(a=row, count_lt=2 * strict, count_le=2 * weak, total=1 << n)


def fraction_good(a: Sequence, strict: bool = False) -> Fraction:
    result = count_good(a)
    return result.fraction_lt if strict else result.fraction_le


def hk_table() -> HkTable:
    """Strict fractions at the library vectors next to the claimed constants."""
    entries = []
    for row in HK_ROWS:
        a = vector(row.label)
        fraction = count_good(a).fraction_lt
        match = None if row.claimed is None else fraction == row.claimed
        if match is False:
            logger.warning("HK value at %s is %s, claimed %s", row.label, fraction, row.claimed)
        entries.append(
            CkEntry(k=row.k, label=row.label, a=a, fraction=fraction, claimed=row.claimed, match=match)
        )
    claims = [HkClaim(k=k, claimed=value, note="no attaining vector given") for k, value in HK_CLAIMS]
    return HkTable(entries=entries, claims=claims)


def random_cone_vector(rng: random.Random, n: int) -> RowVector:
    """Sorted non-negative rationals with bounded numerators and denominators."""
    values = [
        Fraction(
            rng.randint(0, settings.sample_numerator_bound),
            rng.randint(1, settings.sample_denominator_bound),
        )
        for _ in range(n)
    ]
    return RowVector(sorted(values, reverse=True))


def _sample_batch(n: int, size: int, seed: int, strict: bool) -> Tuple[Fraction, RowVector]:
    rng = random.Random(seed)
    worst: Optional[Tuple[Fraction, RowVector]] = None
    for _ in range(size):
        a = random_cone_vector(rng, n)
        fraction = fraction_good(a, strict=strict)
        if worst is None or fraction < worst[0]:
            worst = (fraction, a)
    return worst


def sample_min_fraction(
    n: int, samples: int, seed: int, strict: bool = False, jobs: int = 1
) -> SampleResult:
    """Minimum fraction of good sign vectors over random a ∈ Q.

    Batches get seeds drawn from the master seed, so the result does not
    depend on the number of jobs.
    """
    if samples < 1:
        raise InputError("samples must be positive")
    if not 1 <= n <= settings.max_dimension:
        raise InputError(f"dimension n={n} outside 1..{settings.max_dimension}")

    master = random.Random(seed)
    batch = settings.sample_batch_size
    sizes = [min(batch, samples - start) for start in range(0, samples, batch)]
    seeds = [master.getrandbits(64) for _ in sizes]
    arguments = [(n, size, batch_seed, strict) for size, batch_seed in zip(sizes, seeds)]
    results = run_batch(_sample_batch, arguments, jobs)

    fraction, worst = min(results, key=lambda item: item[0])
    logger.info("sampled %d vectors in %d batches, min fraction %s", samples, len(sizes), fraction)
    return SampleResult(n=n, samples=samples, seed=seed, strict=strict, min_fraction=fraction, worst=worst)


def spot_check_certificate(cert: Certificate, samples: int, seed: int) -> SpotCheck:
    """Sample a ∈ Q inside the certificate's case and test its conclusion.

    In the case σ_ℓ ε_{s_ℓ}·a ≥ 0 for every slot with λ_ℓ > 0, some such slot
    must have (ε_{s_ℓ}a)² ≤ aa'.
    """
    tuple_spec, pattern = cert.tuple_spec, cert.pattern
    legs = [
        signvec(tuple_spec.n, tuple_spec.position(slot)).as_row() * sigma
        for slot, sigma, weight in zip(pattern.slots, pattern.resolved_signs(), cert.lam)
        if slot is not None and weight > 0
    ]
    rng = random.Random(seed)
    tested = skipped = 0
    violations = []
    for _ in range(samples):
        a = random_cone_vector(rng, tuple_spec.n)
        products = [leg.dot(a) for leg in legs]
        if any(p < 0 for p in products):
            skipped += 1
            continue
        tested += 1
        if min(p * p for p in products) > a.norm_squared():
            violations.append(a)
    return SpotCheck(tested=tested, skipped=skipped, violations=violations)
