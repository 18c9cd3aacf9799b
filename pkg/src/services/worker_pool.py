from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Iterator, List, Optional, Sequence, TypeVar

import numpy as np

from src.core.config import get_max_workers
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

T = TypeVar("T")
R = TypeVar("R")


class WorkerPool:
    """
    Caps the worker count of the parallel sections (phase-diagram rows,
    sampling chunks, symmetry audits) and keeps their results in input order,
    so output never depends on completion order or on the worker count.
    """
    def __init__(self, max_workers: Optional[int] = None):
        self._max_workers = max_workers or get_max_workers()

    @property
    def max_workers(self) -> int:
        return self._max_workers

    def set_limit(self, max_workers: Optional[int]):
        """
        Applies the --threads cap. None restores the environment default.
        """
        self._max_workers = max(1, max_workers) if max_workers else get_max_workers()
        logger.info(f"Worker pool capped at {self._max_workers} thread(s)")

    def imap_ordered(self, fn: Callable[[T], R], items: Iterable[T]) -> Iterator[R]:
        """
        Yields fn(item) for every item, in input order.
        """
        items = list(items)
        if self._max_workers == 1 or len(items) <= 1:
            for item in items:
                yield fn(item)
            return

        with ThreadPoolExecutor(max_workers=min(self._max_workers, len(items))) as executor:
            # Executor.map already yields in submission order
            for result in executor.map(fn, items):
                yield result

    def map_ordered(self, fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
        return list(self.imap_ordered(fn, items))


def resolve_seed(seed: Optional[int]) -> int:
    """
    Returns the seed unchanged, or fresh OS entropy when it is None.
    Callers record the returned value so the run can be repeated.
    """
    if seed is not None:
        return int(seed)
    generated = int(np.random.SeedSequence().entropy)
    logger.info(f"No seed supplied. Generated seed {generated}")
    return generated


def spawn_seeds(seed: int, count: int) -> Sequence[np.random.SeedSequence]:
    """
    Per-chunk seeds derived as hash(seed, chunk_index): chunk i always gets
    the same stream no matter how many workers run.
    """
    return [np.random.SeedSequence(int(seed), spawn_key=(index,)) for index in range(count)]


# Global instance
pool = WorkerPool()
