"""Process-pool helpers for independent work items (sample batches, grids)."""

from __future__ import annotations

import itertools
import logging
import multiprocessing as mp
import os
from typing import Callable, Iterable, Iterator, List, Sequence, TypeVar

logger = logging.getLogger(__name__)

THREADS_ENV = "RAILYARD_THREADS"

T = TypeVar("T")


def resolve_threads(requested: int | None = None) -> int:
    """``--threads`` wins, then ``RAILYARD_THREADS``, then a single process."""
    if requested is not None:
        threads = int(requested)
    else:
        threads = int(os.environ.get(THREADS_ENV, "1"))
    if threads < 1:
        raise ValueError(f"thread count must be positive, got {threads}")
    return threads


def chunked(count: int, chunk: int) -> Iterator[int]:
    """Sizes of consecutive chunks covering ``count`` items."""
    full, rest = divmod(count, chunk)
    yield from itertools.repeat(chunk, full)
    if rest:
        yield rest


def pool_starmap(func: Callable[..., T], jobs: Sequence[tuple], threads: int = 1) -> List[T]:
    """``starmap`` over ``jobs``, in a process pool when ``threads > 1``.

    Results keep the order of ``jobs``.
    """
    if threads <= 1 or len(jobs) <= 1:
        return list(itertools.starmap(func, jobs))
    processes = min(threads, len(jobs))
    logger.debug("dispatching %d jobs to %d processes", len(jobs), processes)
    with mp.Pool(processes) as pool:
        return pool.starmap(func, jobs)


def grid_map(func: Callable[..., T], points: Iterable, fixed: tuple = (), threads: int = 1) -> List[T]:
    """Evaluate ``func(*fixed, p)`` for every grid point ``p``."""
    return pool_starmap(func, [(*fixed, p) for p in points], threads)
