"""Run seeded searches with a single BLAS thread.

Multithreaded BLAS may sum in a different order from call to call. The
searches here end anywhere on a continuum of minimizers (an automorphism
orbit), so last-bit differences grow into visibly different answers. One
thread makes them bitwise reproducible, and is faster at n <= 10 anyway.
"""

from __future__ import annotations

import functools

from threadpoolctl import threadpool_limits


def single_threaded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        with threadpool_limits(limits=1):
            return fn(*args, **kwargs)

    return wrapper
