"""Ordered fan-out of independent trials across threads."""

import os
from concurrent.futures import ThreadPoolExecutor

__all__ = ["map_trials", "threads_from_env"]


def map_trials(fn, count: int, threads: int = 1) -> list:
    """Apply fn to 0..count-1, results in index order.

    threads=1 runs serially; threads=0 uses the CPU count. Trials must be
    independent (each derives its own random streams), so scheduling cannot
    change results.
    """
    if threads == 0:
        threads = os.cpu_count() or 1
    if threads <= 1 or count <= 1:
        return [fn(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=min(threads, count)) as pool:
        return list(pool.map(fn, range(count)))


def threads_from_env() -> int:
    """Trial concurrency cap from SGQGAN_THREADS (0 = auto, default 1)."""
    raw = os.environ.get("SGQGAN_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"SGQGAN_THREADS must be an integer, got {raw!r}") from None
    if value < 0:
        raise ValueError("SGQGAN_THREADS must be >= 0")
    return value
