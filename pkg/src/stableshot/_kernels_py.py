"""Pure numpy/Python fallback for the compiled kernels.

Same contracts as the Cython module ``stableshot._kernels``:

* ``compensated_cumsum`` -- running sum of float deltas.  The compiled
  version uses Kahan compensation; this fallback uses ``np.cumsum``, so the
  two agree only up to the documented numerical slack, not bitwise.
* ``busy_bounds`` -- indices where an integer occupancy sequence leaves /
  enters zero.
* ``sliding_range_max`` -- max of ``values[lo[i]:hi[i]+1]`` for monotone
  index windows (two-pointer with a monotone deque in the compiled core).
* ``frechet_minimax`` -- minimax dynamic program between two polylines
  under the max(|dt|, |dv|) ground metric.
"""

from collections import deque

import numpy as np

BACKEND = "python"


def compensated_cumsum(deltas):
    return np.cumsum(np.asarray(deltas, dtype=np.float64))


def busy_bounds(counts, init_count):
    """Indices of 0->positive (starts) and positive->0 (ends) transitions.

    ``counts[i]`` is the occupancy right after event ``i``; ``init_count``
    is the occupancy before the first event.
    """
    counts = np.asarray(counts, dtype=np.int64)
    prev = np.empty_like(counts)
    if counts.size:
        prev[0] = init_count
        prev[1:] = counts[:-1]
    starts = np.flatnonzero((prev == 0) & (counts > 0))
    ends = np.flatnonzero((prev > 0) & (counts == 0))
    return starts, ends


def sliding_range_max(values, lo, hi):
    values = np.asarray(values, dtype=np.float64)
    lo = np.asarray(lo, dtype=np.int64)
    hi = np.asarray(hi, dtype=np.int64)
    out = np.empty(len(lo), dtype=np.float64)
    dq = deque()  # indices into values, decreasing values
    nxt = 0
    for i in range(len(lo)):
        while nxt <= hi[i]:
            while dq and values[dq[-1]] <= values[nxt]:
                dq.pop()
            dq.append(nxt)
            nxt += 1
        while dq and dq[0] < lo[i]:
            dq.popleft()
        out[i] = values[dq[0]]
    return out


def frechet_minimax(p, q):
    """Discrete Frechet distance under d((t,v), (t',v')) = max(|dt|, |dv|)."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    n, m = len(p), len(q)
    cost0 = np.maximum(
        np.abs(p[0, 0] - q[:, 0]), np.abs(p[0, 1] - q[:, 1])
    )
    prev = np.maximum.accumulate(cost0)
    for i in range(1, n):
        cost = np.maximum(
            np.abs(p[i, 0] - q[:, 0]), np.abs(p[i, 1] - q[:, 1])
        )
        cur = np.empty(m)
        cur[0] = max(prev[0], cost[0])
        for j in range(1, m):
            reach = min(prev[j], prev[j - 1], cur[j - 1])
            cur[j] = max(reach, cost[j])
        prev = cur
    return float(prev[-1])
