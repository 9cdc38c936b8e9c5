"""Deterministic parallel map.

Worker count affects speed only: results are collected in input order, so
output is identical for any thread count.
"""

from concurrent.futures import ThreadPoolExecutor


def parallel_map(fn, items, threads: int = 1):
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
