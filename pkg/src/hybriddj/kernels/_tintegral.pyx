# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled t-integral kernel; mirrors ``_tintegral_py`` step for step."""

from libc.math cimport exp, sqrt, fabs
from libc.stdlib cimport malloc, free

import numpy as np

from ._tintegral_py import XGK as _XGK, WGK as _WGK, WG as _WG

cdef double XGK[8]
cdef double WGK[8]
cdef double WG[4]
for _i in range(8):
    XGK[_i] = _XGK[_i]
    WGK[_i] = _WGK[_i]
for _i in range(4):
    WG[_i] = _WG[_i]


cdef inline double _integrand(double t, double q, double s, bint full) noexcept nogil:
    cdef double it = 1.0 / t
    cdef double v = it * it * exp(-(q * it) * (q * it))
    if full:
        v /= sqrt(1.0 + (s * it) * (s * it))
    return v


cdef void _gk15(double a, double b, double q, double s, bint full,
                double* res, double* err) noexcept nogil:
    cdef double c = 0.5 * (a + b)
    cdef double h = 0.5 * (b - a)
    cdef double fc = _integrand(c, q, s, full)
    cdef double resk = WGK[7] * fc
    cdef double resg = WG[3] * fc
    cdef double x, pair
    cdef int j
    for j in range(7):
        x = h * XGK[j]
        pair = _integrand(c - x, q, s, full) + _integrand(c + x, q, s, full)
        resk += WGK[j] * pair
        if j % 2 == 1:
            resg += WG[j // 2] * pair
    res[0] = resk * h
    err[0] = fabs((resk - resg) * h)


cdef int _adapt(double q, double lo, double hi, double s, bint full, double epsabs,
                int limit, double* a, double* b, double* v, double* e,
                double* value, double* abserr) noexcept nogil:
    cdef int n = 1, k, i
    cdef double total, m, emax
    if hi == lo:
        value[0] = 0.0
        abserr[0] = 0.0
        return 1
    a[0] = lo
    b[0] = hi
    _gk15(lo, hi, q, s, full, &v[0], &e[0])
    total = e[0]
    while total > epsabs and n < limit:
        k = 0
        emax = e[0]
        for i in range(1, n):
            if e[i] > emax:
                emax = e[i]
                k = i
        m = 0.5 * (a[k] + b[k])
        a[n] = m
        b[n] = b[k]
        b[k] = m
        _gk15(a[k], b[k], q, s, full, &v[k], &e[k])
        _gk15(a[n], b[n], q, s, full, &v[n], &e[n])
        n += 1
        total = 0.0
        for i in range(n):
            total += e[i]
    value[0] = 0.0
    for i in range(n):
        value[0] += v[i]
    abserr[0] = total
    return total <= epsabs


def t_integral(double q, double lo, double hi, double s, bint full,
               double epsabs=1e-12, int limit=200):
    cdef double value, abserr
    cdef int ok
    cdef double* buf = <double*> malloc(4 * limit * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    try:
        ok = _adapt(q, lo, hi, s, full, epsabs, limit,
                    buf, buf + limit, buf + 2 * limit, buf + 3 * limit,
                    &value, &abserr)
    finally:
        free(buf)
    return value, abserr, bool(ok)


def t_integral_many(qs, double lo, double hi, double s, bint full,
                    double epsabs=1e-12, int limit=200):
    q_arr = np.ascontiguousarray(qs, dtype=float)
    flat = q_arr.reshape(-1)
    values = np.empty(flat.shape[0])
    errors = np.empty(flat.shape[0])
    cdef double[::1] qv = flat
    cdef double[::1] vv = values
    cdef double[::1] ev = errors
    cdef Py_ssize_t i, n = flat.shape[0]
    cdef int ok = 1
    cdef double* buf = <double*> malloc(4 * limit * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    try:
        with nogil:
            for i in range(n):
                ok &= _adapt(qv[i], lo, hi, s, full, epsabs, limit,
                             buf, buf + limit, buf + 2 * limit, buf + 3 * limit,
                             &vv[i], &ev[i])
    finally:
        free(buf)
    return values.reshape(q_arr.shape), errors.reshape(q_arr.shape), bool(ok)
