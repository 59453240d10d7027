"""Worker-pool helpers for data-parallel grid evaluation.

All field evaluations are pure, so rows of a sampling grid can be
dispatched to any number of threads; results are reassembled by index,
which keeps output bit-identical regardless of the worker count.  The
``VORTEXLAB_THREADS`` environment variable caps the pool size.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar

__all__ = ["worker_count", "map_indexed"]

_ENV_VAR = "VORTEXLAB_THREADS"

T = TypeVar("T")


def worker_count() -> int:
    """Number of workers to use: min(cpu count, VORTEXLAB_THREADS if set)."""
    available = os.cpu_count() or 1
    raw = os.environ.get(_ENV_VAR)
    if raw is None:
        return available
    try:
        requested = int(raw)
    except ValueError as exc:
        raise ValueError(f"{_ENV_VAR} must be an integer, got {raw!r}") from exc
    return max(1, min(available, requested))


def map_indexed(fn: Callable[[int], T], n: int) -> list[T]:
    """Evaluate ``fn(i)`` for i in range(n), possibly concurrently; ordered."""
    workers = worker_count()
    if workers <= 1 or n <= 1:
        return [fn(i) for i in range(n)]
    with ThreadPoolExecutor(max_workers=min(workers, n)) as pool:
        return list(pool.map(fn, range(n)))
