# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Gaussian-integer matrix product on int64 with overflow detection."""

import numpy as np
from libc.stdint cimport int64_t

cdef extern from *:
    bint mul_ovf "__builtin_mul_overflow"(int64_t a, int64_t b, int64_t *r) nogil
    bint add_ovf "__builtin_add_overflow"(int64_t a, int64_t b, int64_t *r) nogil
    bint sub_ovf "__builtin_sub_overflow"(int64_t a, int64_t b, int64_t *r) nogil


def gauss_matmul(const int64_t[:, ::1] ar, const int64_t[:, ::1] ai,
                 const int64_t[:, ::1] br, const int64_t[:, ::1] bi):
    """``(ar + i*ai) @ (br + i*bi)`` as a pair of int64 arrays, or None on overflow."""
    cdef Py_ssize_t n = ar.shape[0], k = ar.shape[1], m = br.shape[1]
    cdef Py_ssize_t i, p, j
    cdef int64_t xr, xi, yr, yi, t1, t2
    cdef bint ovf = 0
    cr = np.zeros((n, m), dtype=np.int64)
    ci = np.zeros((n, m), dtype=np.int64)
    cdef int64_t[:, ::1] vr = cr
    cdef int64_t[:, ::1] vi = ci
    with nogil:
        for i in range(n):
            for p in range(k):
                xr = ar[i, p]
                xi = ai[i, p]
                if xr == 0 and xi == 0:
                    continue
                for j in range(m):
                    yr = br[p, j]
                    yi = bi[p, j]
                    if yr == 0 and yi == 0:
                        continue
                    ovf |= mul_ovf(xr, yr, &t1)
                    ovf |= mul_ovf(xi, yi, &t2)
                    ovf |= sub_ovf(t1, t2, &t1)
                    ovf |= add_ovf(vr[i, j], t1, &vr[i, j])
                    ovf |= mul_ovf(xr, yi, &t1)
                    ovf |= mul_ovf(xi, yr, &t2)
                    ovf |= add_ovf(t1, t2, &t1)
                    ovf |= add_ovf(vi[i, j], t1, &vi[i, j])
                if ovf:
                    break
            if ovf:
                break
    if ovf:
        return None
    return cr, ci
