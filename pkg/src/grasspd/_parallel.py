import os
from concurrent.futures import ThreadPoolExecutor


def resolve_jobs(n_jobs):
    if n_jobs is None or n_jobs == 1:
        return 1
    if n_jobs <= 0:
        return os.cpu_count() or 1
    return int(n_jobs)


def parallel_map(fn, items, n_jobs=None):
    """Map ``fn`` over ``items`` preserving order; threads when ``n_jobs > 1``.

    numpy releases the GIL inside LAPACK calls, so threads are enough for the
    per-segment linear algebra.
    """
    items = list(items)
    jobs = min(resolve_jobs(n_jobs), len(items))
    if jobs <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))
