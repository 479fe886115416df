"""Thread-count control for the compiled lattice kernels.

All kernels parallelise over an outer index and reduce each inner sum sequentially,
then combine the per-index results in a fixed order, so results do not depend on the
number of threads.
"""

from __future__ import annotations

import os

import numba

# the bundled TBB is too old for numba and only produces a warning; prefer OpenMP
numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]


def available_threads() -> int:
    return int(numba.config.NUMBA_NUM_THREADS)


def set_threads(n: int | None) -> int:
    """Use ``n`` threads (``None``/0 = all available); returns the count in effect.

    Requests above the pool size fixed at import time (``NUMBA_NUM_THREADS``) are clamped.
    """
    limit = available_threads()
    n = limit if not n else max(1, min(int(n), limit))
    numba.set_num_threads(n)
    return n


def default_threads() -> int:
    return min(available_threads(), os.cpu_count() or 1)
