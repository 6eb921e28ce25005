"""Trial-parallel execution with an ordered, scheduling-independent reduction."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar

from threadpoolctl import threadpool_limits

from .errors import ConfigError
from .seeding import MASK64, splitmix64

T = TypeVar("T")

THREADS_ENV = "MPSPECTRA_THREADS"


def worker_count(workers: int | None = None) -> int:
    """Explicit ``workers``, else ``$MPSPECTRA_THREADS``, else the CPU count."""
    if workers is not None:
        if workers < 1:
            raise ConfigError("worker count must be positive", key="workers")
        return workers
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw == "":
        return max(1, os.cpu_count() or 1)
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"expected a positive integer, got {raw!r}", key=THREADS_ENV) from None
    if value < 1:
        raise ConfigError(f"expected a positive integer, got {raw!r}", key=THREADS_ENV)
    return value


def map_trials(fn: Callable[[int], T], trials: Sequence[int] | int, workers: int | None = None) -> list[T]:
    """Run ``fn(trial)`` for every trial and return results in trial order.

    BLAS is pinned to one thread for the duration so every trial runs the same
    single-threaded kernels whatever the worker count; results are then
    bitwise independent of scheduling.
    """
    ids = list(range(trials)) if isinstance(trials, int) else list(trials)
    count = min(worker_count(workers), max(1, len(ids)))
    with threadpool_limits(limits=1, user_api="blas"):
        if count == 1:
            return [fn(t) for t in ids]
        with ThreadPoolExecutor(max_workers=count) as pool:
            return list(pool.map(fn, ids))


def derive_master(master: int, *labels: int) -> int:
    """Independent master seed for one experiment cell, e.g. ``(n, beta)``."""
    h = splitmix64(master & MASK64)
    for label in labels:
        h = splitmix64(h ^ (int(label) & MASK64))
    return h
