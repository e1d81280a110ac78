"""
Fan-out of independent exact computations.

Work items run through the event loop's executor: a process pool when more
than one job is requested, in-process otherwise. Results keep submission order.
"""

import asyncio
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Sequence, Tuple, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")


async def map_in_executor(func: Callable[..., T], arguments: Sequence[Tuple], jobs: int = 1) -> List[T]:
    """Apply func to each argument tuple, in parallel when jobs > 1.

    Args:
        func: A picklable module-level function
        arguments: One argument tuple per call
        jobs: Worker processes

    Returns:
        Results in the order of arguments
    """
    if jobs <= 1 or len(arguments) <= 1:
        return [func(*args) for args in arguments]

    loop = asyncio.get_running_loop()
    logger.debug("dispatching %d calls of %s to %d workers", len(arguments), func.__name__, jobs)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [loop.run_in_executor(pool, func, *args) for args in arguments]
        return list(await asyncio.gather(*futures))


def run_batch(func: Callable[..., T], arguments: Sequence[Tuple], jobs: int = 1) -> List[T]:
    """Synchronous entry point for map_in_executor."""
    return asyncio.run(map_in_executor(func, arguments, jobs))
