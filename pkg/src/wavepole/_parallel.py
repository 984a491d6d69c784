"""Optional thread fan-out for independent sweeps, capped by WAVEPOLE_THREADS."""

import os
from concurrent.futures import ThreadPoolExecutor


def max_threads() -> int:
    try:
        return max(1, int(os.environ.get("WAVEPOLE_THREADS", "1")))
    except ValueError:
        return 1


def parallel_map(fn, items):
    """``list(map(fn, items))``, run on up to WAVEPOLE_THREADS threads; order is preserved."""
    n = max_threads()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(n, len(items))) as pool:
        return list(pool.map(fn, items))
