"""
Ordered parallel evaluation for parameter sweeps.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from ringlight.core.config import settings

T = TypeVar("T")
R = TypeVar("R")


def resolve_threads(threads: Optional[int] = None) -> int:
    """Worker count: explicit value, else settings, where 0 means one per CPU."""
    n = settings.threads if threads is None else threads
    if n < 0:
        raise ValueError("threads must be >= 0")
    return n or (os.cpu_count() or 1)


def ordered_map(fn: Callable[[T], R], items: Iterable[T],
                threads: Optional[int] = None) -> List[R]:
    """
    Evaluate ``fn`` over ``items`` and return results in input order.

    Results never depend on completion order, so output built from them is
    identical for any thread count.
    """
    items = list(items)
    workers = min(resolve_threads(threads), max(len(items), 1))
    if workers == 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
