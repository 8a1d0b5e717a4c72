"""Chunked evaluation over index ranges with a bounded thread pool.

Each chunk writes only its own slice of the output, so the result does not
depend on the number of workers. ``SECTOR_RKHS_THREADS`` caps the pool size
(default: the CPU count, at most 8).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable


def worker_count() -> int:
    env = os.environ.get("SECTOR_RKHS_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError as exc:
            raise ValueError(f"SECTOR_RKHS_THREADS must be an integer, got {env!r}") from exc
        return max(1, n)
    return max(1, min(8, os.cpu_count() or 1))


def for_chunks(body: Callable[[slice], None], n: int, chunk: int) -> None:
    """Call ``body(slice)`` over consecutive slices covering range(n)."""
    slices = [slice(i, min(i + chunk, n)) for i in range(0, n, chunk)]
    workers = min(worker_count(), len(slices))
    if workers <= 1:
        for sl in slices:
            body(sl)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        # list() re-raises the first worker exception
        list(pool.map(body, slices))
