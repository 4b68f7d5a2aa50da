"""Deterministic worker-pool helper.

Results always come back in input order, so output bytes do not depend on
the worker count. Workers are forked processes; the callable and items must
be picklable.
"""

from __future__ import annotations

import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(fn: Callable[[T], R], items: Iterable[T], threads: int = 1) -> list[R]:
    work: Sequence[T] = list(items)
    if threads <= 1 or len(work) <= 1:
        return [fn(x) for x in work]
    ctx = multiprocessing.get_context("fork")
    chunk = max(1, len(work) // (threads * 4))
    with ProcessPoolExecutor(max_workers=min(threads, len(work)), mp_context=ctx) as pool:
        return list(pool.map(fn, work, chunksize=chunk))
