# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the sequential hot loops.

Contracts mirror ``stableshot._kernels_py``; see that module for docs.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"


def compensated_cumsum(deltas):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] d = np.ascontiguousarray(deltas, dtype=np.float64)
    cdef Py_ssize_t n = d.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef double s = 0.0, c = 0.0, y, t
    cdef Py_ssize_t i
    for i in range(n):
        y = d[i] - c
        t = s + y
        c = (t - s) - y
        s = t
        out[i] = s
    return out


def busy_bounds(counts, init_count):
    cdef cnp.ndarray[cnp.int64_t, ndim=1] c = np.ascontiguousarray(counts, dtype=np.int64)
    cdef Py_ssize_t n = c.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] starts = np.empty(n, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] ends = np.empty(n, dtype=np.int64)
    cdef Py_ssize_t ns = 0, ne = 0, i
    cdef long long prev = init_count, cur
    for i in range(n):
        cur = c[i]
        if prev == 0 and cur > 0:
            starts[ns] = i
            ns += 1
        elif prev > 0 and cur == 0:
            ends[ne] = i
            ne += 1
        prev = cur
    return starts[:ns].copy(), ends[:ne].copy()


def sliding_range_max(values, lo, hi):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] l = np.ascontiguousarray(lo, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] h = np.ascontiguousarray(hi, dtype=np.int64)
    cdef Py_ssize_t k = l.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(k, dtype=np.float64)
    # monotone deque of indices into v, values strictly decreasing
    cdef cnp.ndarray[cnp.int64_t, ndim=1] dq = np.empty(v.shape[0] + 1, dtype=np.int64)
    cdef Py_ssize_t head = 0, tail = 0  # [head, tail)
    cdef Py_ssize_t nxt = 0, i
    cdef long long hi_i, lo_i
    for i in range(k):
        hi_i = h[i]
        lo_i = l[i]
        while nxt <= hi_i:
            while tail > head and v[dq[tail - 1]] <= v[nxt]:
                tail -= 1
            dq[tail] = nxt
            tail += 1
            nxt += 1
        while tail > head and dq[head] < lo_i:
            head += 1
        out[i] = v[dq[head]]
    return out


def frechet_minimax(p, q):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] a = np.ascontiguousarray(p, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] b = np.ascontiguousarray(q, dtype=np.float64)
    cdef Py_ssize_t n = a.shape[0], m = b.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] prev = np.empty(m, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cur = np.empty(m, dtype=np.float64)
    cdef Py_ssize_t i, j
    cdef double cost, reach, dt, dv
    for j in range(m):
        dt = a[0, 0] - b[j, 0]
        if dt < 0:
            dt = -dt
        dv = a[0, 1] - b[j, 1]
        if dv < 0:
            dv = -dv
        cost = dt if dt > dv else dv
        if j == 0:
            prev[0] = cost
        else:
            prev[j] = prev[j - 1] if prev[j - 1] > cost else cost
    for i in range(1, n):
        for j in range(m):
            dt = a[i, 0] - b[j, 0]
            if dt < 0:
                dt = -dt
            dv = a[i, 1] - b[j, 1]
            if dv < 0:
                dv = -dv
            cost = dt if dt > dv else dv
            if j == 0:
                reach = prev[0]
            else:
                reach = prev[j]
                if prev[j - 1] < reach:
                    reach = prev[j - 1]
                if cur[j - 1] < reach:
                    reach = cur[j - 1]
            cur[j] = reach if reach > cost else cost
        prev, cur = cur, prev
    return float(prev[m - 1])
