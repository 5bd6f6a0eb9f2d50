"""
Order-preserving parallel map.

All library parallelism goes through parallel_map so that a single switch
(deterministic mode) turns every computation sequential. Results are
returned in input order regardless of the worker count.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from config.settings import get_execution_config

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(
    fn: Callable[[T], R],
    items: Iterable[T],
    deterministic: Optional[bool] = None,
    workers: Optional[int] = None,
) -> List[R]:
    """
    Apply fn to every item, optionally on a thread pool.

    Args:
        fn: Pure function of one item
        items: Inputs
        deterministic: Force sequential evaluation (defaults to the environment)
        workers: Pool size (defaults to GABORTORUS_WORKERS)

    Returns:
        List of results in input order
    """
    execution = get_execution_config(deterministic)
    pool_size = workers or execution.workers
    items = list(items)

    if execution.deterministic or pool_size <= 1 or len(items) <= 1:
        return [fn(item) for item in items]

    logger.debug(f"parallel_map: {len(items)} items on {pool_size} workers")
    with ThreadPoolExecutor(max_workers=pool_size) as pool:
        return list(pool.map(fn, items))
