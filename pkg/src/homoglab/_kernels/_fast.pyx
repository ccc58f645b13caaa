# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled lookup kernels; mirrors _pure exactly (same clamping rules)."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef inline Py_ssize_t _seg(const double[::1] knots, double x) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = knots.shape[0], mid
    # index of the last knot <= x, clamped to a valid segment
    while lo < hi:
        mid = (lo + hi) // 2
        if knots[mid] <= x:
            lo = mid + 1
        else:
            hi = mid
    lo -= 1
    if lo < 0:
        lo = 0
    elif lo > knots.shape[0] - 2:
        lo = knots.shape[0] - 2
    return lo


def pwconst_eval(const double[::1] knots, const double[::1] segvals, x):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xa = \
        np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(xa.shape[0])
    cdef double[::1] xv = xa, ov = out
    cdef Py_ssize_t n = xa.shape[0], i
    with nogil:
        for i in range(n):
            ov[i] = segvals[_seg(knots, xv[i])]
    return out.reshape(np.shape(x))


def pwlin_eval(const double[::1] knots, const double[::1] vals,
               const double[::1] slopes, x):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xa = \
        np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(xa.shape[0])
    cdef double[::1] xv = xa, ov = out
    cdef Py_ssize_t n = xa.shape[0], i, s
    with nogil:
        for i in range(n):
            s = _seg(knots, xv[i])
            ov[i] = vals[s] + slopes[s] * (xv[i] - knots[s])
    return out.reshape(np.shape(x))


def pwquad_eval(const double[::1] knots, const double[::1] vals,
                const double[::1] derivs, const double[::1] curvs, x):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xa = \
        np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(xa.shape[0])
    cdef double[::1] xv = xa, ov = out
    cdef Py_ssize_t n = xa.shape[0], i, s
    cdef double d
    with nogil:
        for i in range(n):
            s = _seg(knots, xv[i])
            d = xv[i] - knots[s]
            ov[i] = vals[s] + d * (derivs[s] + d * curvs[s])
    return out.reshape(np.shape(x))
