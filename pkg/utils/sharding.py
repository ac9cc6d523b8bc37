"""Static round-robin sharding of independent work units over a process pool."""
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Sequence, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def round_robin(items: Sequence[T], workers: int) -> List[List[T]]:
    shards: List[List[T]] = [[] for _ in range(max(1, workers))]
    for i, item in enumerate(items):
        shards[i % len(shards)].append(item)
    return shards


def shard_map(func: Callable[[List[T]], R], items: Sequence[T], workers: int = 1) -> List[R]:
    """
    Apply func to each round-robin shard of items. Results come back in shard
    order, so callers merging them get the same set for any worker count.
    """
    if workers < 1:
        raise ValueError(f"workers must be at least 1, got {workers}")
    if workers == 1 or len(items) <= 1:
        return [func(list(items))]
    shards = [s for s in round_robin(items, workers) if s]
    logger.debug(f"Dispatching {len(items)} work units over {len(shards)} workers")
    with ProcessPoolExecutor(max_workers=len(shards)) as pool:
        return list(pool.map(func, shards))
