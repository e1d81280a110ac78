"""
Twin classification of all conjugate pairs.

A pair (i, 2^(n-1) - 1 - i) is a twin when both of its legs admit a k = 1
certificate, and non-twin when some leg is refuted by a witness.
"""

import asyncio
import logging
from typing import Dict, List, Optional, Sequence

from ..core.config import settings
from ..core.errors import InputError
from ..models.schemas import Classification, LegStatus, NonTwinPair, TwinLegDecision
from .batch import map_in_executor
from .signspace import conj_index, positive_half
from .solver import decide_leg

logger = logging.getLogger(__name__)


class ClassificationService:
    """Runs decide_leg over S⁺ and keeps one classification per dimension."""

    def __init__(self):
        self._cache: Dict[int, Classification] = {}

    async def classify(
        self, n: int = 9, jobs: int = 1, leg_order: Optional[Sequence[int]] = None
    ) -> Classification:
        """Classify every conjugate pair of dimension n.

        Args:
            n: Dimension
            jobs: Worker processes for the leg decisions
            leg_order: Optional permutation of S⁺ to process legs in

        Returns:
            Classification with twins, non-twins and their witnesses
        """
        if leg_order is None and n in self._cache:
            return self._cache[n]

        legs = list(positive_half(n))
        order = list(leg_order) if leg_order is not None else legs
        if sorted(order) != legs:
            raise InputError("leg order must be a permutation of S⁺")

        decisions: List[TwinLegDecision] = await map_in_executor(
            decide_leg, [(leg, n) for leg in order], jobs
        )
        by_leg = {d.leg: d for d in decisions}

        twins, non_twins = [], []
        for i in range(len(legs) // 2):
            j = conj_index(n, i)
            refuted = [by_leg[leg] for leg in (i, j) if by_leg[leg].status == LegStatus.REFUTE]
            if refuted:
                non_twins.append(NonTwinPair(pair=(i, j), witnesses=[d.witness for d in refuted]))
            else:
                twins.append((i, j))

        classification = Classification(
            n=n,
            twins=twins,
            non_twins=non_twins,
            decisions=[by_leg[leg] for leg in legs],
        )
        logger.info("n=%d: %d twins, %d non-twin pairs", n, len(twins), len(non_twins))
        if leg_order is None:
            self._cache[n] = classification
        return classification

    def clear(self) -> None:
        self._cache.clear()


# Global service instance
classification_service = ClassificationService()


def classify_pairs(
    n: int = 9, jobs: Optional[int] = None, leg_order: Optional[Sequence[int]] = None
) -> Classification:
    """Synchronous wrapper around the shared ClassificationService."""
    return asyncio.run(classification_service.classify(n, jobs or settings.jobs, leg_order))
