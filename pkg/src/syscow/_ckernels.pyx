# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the loops in ``_pykernels`` (same signatures, same output)."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, ceil, floor

cnp.import_array()


def enumerate_ball(R, double radius2, long max_count):
    cdef double[:, ::1] Rm = np.ascontiguousarray(R, dtype=np.float64)
    cdef Py_ssize_t d = Rm.shape[0]
    cdef double[::1] diag2 = np.empty(d)
    cdef double[:, ::1] mu = np.zeros((d, d))
    cdef long[::1] x = np.zeros(d, dtype=np.int64)
    cdef long[::1] hi = np.zeros(d, dtype=np.int64)
    cdef double[::1] center = np.zeros(d)
    cdef double[::1] partial = np.zeros(d + 1)
    cdef Py_ssize_t cap = 1024
    out_arr = np.empty((cap, d), dtype=np.int64)
    cdef long[:, ::1] out = out_arr
    cdef Py_ssize_t count = 0
    cdef Py_ssize_t i, j, level
    cdef double c, rem, half, t, val
    cdef bint nonzero

    for i in range(d):
        diag2[i] = Rm[i, i] * Rm[i, i]
        for j in range(d):
            mu[i, j] = Rm[i, j] / Rm[i, i]

    level = d - 1
    # bounds for the top level
    center[level] = 0.0
    half = sqrt(radius2 / diag2[level])
    x[level] = <long>ceil(-half - 1e-12)
    hi[level] = <long>floor(half + 1e-12)

    while True:
        if x[level] > hi[level]:
            level += 1
            if level == d:
                break
            x[level] += 1
            continue
        t = x[level] - center[level]
        val = partial[level + 1] + diag2[level] * t * t
        if val > radius2:
            x[level] += 1
            continue
        partial[level] = val
        if level == 0:
            nonzero = False
            for i in range(d):
                if x[i] != 0:
                    nonzero = True
                    break
            if nonzero:
                if count == cap:
                    cap *= 2
                    out_arr = np.resize(out_arr, (cap, d))
                    out = out_arr
                for i in range(d):
                    out[count, i] = x[i]
                count += 1
                if count > max_count:
                    return np.asarray(out_arr[:count]).copy(), True
            x[0] += 1
            continue
        level -= 1
        c = 0.0
        for j in range(level + 1, d):
            c -= mu[level, j] * x[j]
        center[level] = c
        rem = radius2 - partial[level + 1]
        if rem < 0:
            rem = 0.0
        half = sqrt(rem / diag2[level])
        x[level] = <long>ceil(c - half - 1e-12)
        hi[level] = <long>floor(c + half + 1e-12)
    return np.asarray(out_arr[:count]).copy(), False


cdef bint _search(long[:, ::1] V, Py_ssize_t n, Py_ssize_t pos, long remaining,
                  long[::1] a, long[:, ::1] acc):
    # acc[pos] holds the partial sum before choosing a[pos]
    cdef Py_ssize_t i
    cdef long t
    cdef bint ok
    if pos == n - 1:
        t = remaining
        while True:
            ok = True
            for i in range(n):
                if acc[pos, i] + t * V[i, pos] == 0:
                    ok = False
                    break
            if ok:
                a[pos] = t
                return True
            if t <= 0:
                break
            t = -remaining
        return False
    # coefficient order 0, 1, -1, 2, -2, ...
    t = 0
    while True:
        a[pos] = t
        for i in range(n):
            acc[pos + 1, i] = acc[pos, i] + t * V[i, pos]
        if _search(V, n, pos + 1, remaining - (t if t >= 0 else -t), a, acc):
            return True
        if t > 0:
            t = -t
        else:
            t = 1 - t
        if t > remaining:
            break
    a[pos] = 0
    return False


def min_cost_nonzero(V, long budget):
    cdef long[:, ::1] Vm = np.ascontiguousarray(V, dtype=np.int64)
    cdef Py_ssize_t n = Vm.shape[1]
    cdef long[::1] a = np.zeros(n, dtype=np.int64)
    cdef long[:, ::1] acc = np.zeros((n + 1, Vm.shape[0]), dtype=np.int64)
    cdef long cost
    for cost in range(budget + 1):
        acc[0, :] = 0
        if _search(Vm, n, 0, cost, a, acc):
            return [int(v) for v in a]
    return None
