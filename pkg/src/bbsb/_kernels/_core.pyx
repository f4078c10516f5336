# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled implementation of the hot numerical kernels (see ``_ref`` for the
reference semantics)."""

from libc.math cimport lgamma, log, log1p, exp
from libc.stdlib cimport malloc, free

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef double NEG_INF = -float("inf")


cdef inline double _logsumexp(double* a, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i
    cdef double m = NEG_INF
    cdef double s = 0.0
    for i in range(n):
        if a[i] > m:
            m = a[i]
    if m == NEG_INF:
        return NEG_INF
    for i in range(n):
        s += exp(a[i] - m)
    return m + log(s)


cdef void _fill_transition_table(double* lognorm, long kappa,
                                 double alpha, double theta) noexcept nogil:
    # lognorm[x] = log C(kappa, x) + log 1/B(alpha+x, theta+kappa-x)
    cdef long x
    cdef double lgk = lgamma(kappa + 1.0)
    cdef double a, b
    for x in range(kappa + 1):
        a = alpha + x
        b = theta + kappa - x
        lognorm[x] = (lgk - lgamma(x + 1.0) - lgamma(kappa - x + 1.0)
                      + lgamma(a + b) - lgamma(a) - lgamma(b))


cdef double _chain_loglik_with_table(double[:] v, long kappa, double alpha,
                                     double theta, double* lognorm,
                                     double* scratch) noexcept nogil:
    cdef Py_ssize_t m = v.shape[0]
    cdef Py_ssize_t i
    cdef long x
    cdef double total = 0.0
    cdef double lvp, l1vp, lvn, l1vn, base, slope
    if m < 2:
        return 0.0
    for i in range(m - 1):
        lvp = log(v[i])
        l1vp = log1p(-v[i])
        lvn = log(v[i + 1])
        l1vn = log1p(-v[i + 1])
        base = kappa * l1vp + (alpha - 1.0) * lvn + (theta + kappa - 1.0) * l1vn
        slope = (lvp - l1vp) + (lvn - l1vn)
        for x in range(kappa + 1):
            scratch[x] = lognorm[x] + x * slope
        total += base + _logsumexp(scratch, kappa + 1)
    return total


def v_transition_logpdf(double v_next, double v_prev, long kappa,
                        double alpha, double theta):
    cdef double* lognorm = <double*> malloc((kappa + 1) * sizeof(double))
    cdef double* scratch = <double*> malloc((kappa + 1) * sizeof(double))
    cdef double out
    cdef double[2] pair
    if lognorm == NULL or scratch == NULL:
        free(lognorm); free(scratch)
        raise MemoryError()
    pair[0] = v_prev
    pair[1] = v_next
    try:
        _fill_transition_table(lognorm, kappa, alpha, theta)
        out = _chain_loglik_with_table(<double[:2]> pair, kappa, alpha, theta,
                                       lognorm, scratch)
    finally:
        free(lognorm)
        free(scratch)
    return out


def chain_loglik(v, long kappa, double alpha, double theta):
    cdef double[:] vv = np.ascontiguousarray(v, dtype=np.float64)
    cdef double* lognorm = <double*> malloc((kappa + 1) * sizeof(double))
    cdef double* scratch = <double*> malloc((kappa + 1) * sizeof(double))
    cdef double out
    if lognorm == NULL or scratch == NULL:
        free(lognorm); free(scratch)
        raise MemoryError()
    try:
        with nogil:
            _fill_transition_table(lognorm, kappa, alpha, theta)
            out = _chain_loglik_with_table(vv, kappa, alpha, theta, lognorm, scratch)
    finally:
        free(lognorm)
        free(scratch)
    return out


def kappa_support_logliks(v, support, double alpha, double theta):
    cdef double[:] vv = np.ascontiguousarray(v, dtype=np.float64)
    cdef long[:] supp = np.ascontiguousarray(support, dtype=np.int64)
    cdef Py_ssize_t ns = supp.shape[0]
    cdef cnp.ndarray[double, ndim=1] out = np.empty(ns, dtype=np.float64)
    cdef double[:] out_v = out
    cdef Py_ssize_t j
    cdef long kmax = 0, kappa
    for j in range(ns):
        if supp[j] > kmax:
            kmax = supp[j]
    cdef double* lognorm = <double*> malloc((kmax + 1) * sizeof(double))
    cdef double* scratch = <double*> malloc((kmax + 1) * sizeof(double))
    if lognorm == NULL or scratch == NULL:
        free(lognorm); free(scratch)
        raise MemoryError()
    try:
        with nogil:
            for j in range(ns):
                kappa = supp[j]
                _fill_transition_table(lognorm, kappa, alpha, theta)
                out_v[j] = _chain_loglik_with_table(vv, kappa, alpha, theta,
                                                    lognorm, scratch)
    finally:
        free(lognorm)
        free(scratch)
    return out


def step2_logweights(double v_prev, long kappa, double alpha, double theta,
                     double a_count, double t_count):
    cdef cnp.ndarray[double, ndim=1] out = np.empty(kappa + 1, dtype=np.float64)
    cdef double[:] out_v = out
    cdef long x
    cdef double a, b
    cdef double lgk = lgamma(kappa + 1.0)
    cdef double lvp = log(v_prev)
    cdef double l1vp = log1p(-v_prev)
    with nogil:
        for x in range(kappa + 1):
            a = alpha + x
            b = theta + kappa - x
            out_v[x] = (lgamma(a + a_count) - lgamma(a)
                        + lgamma(b + t_count) - lgamma(b)
                        + lgk - lgamma(x + 1.0) - lgamma(kappa - x + 1.0)
                        + x * lvp + (kappa - x) * l1vp)
    return out


def pair_logweights(double v_prev, double v_next, long kappa,
                    double alpha, double theta):
    cdef cnp.ndarray[double, ndim=1] out = np.empty(kappa + 1, dtype=np.float64)
    cdef double[:] out_v = out
    cdef long x
    cdef double a, b
    cdef double lgk = lgamma(kappa + 1.0)
    cdef double lvp = log(v_prev)
    cdef double l1vp = log1p(-v_prev)
    cdef double lvn = log(v_next)
    cdef double l1vn = log1p(-v_next)
    with nogil:
        for x in range(kappa + 1):
            a = alpha + x
            b = theta + kappa - x
            out_v[x] = (lgk - lgamma(x + 1.0) - lgamma(kappa - x + 1.0)
                        + lgamma(a + b) - lgamma(a) - lgamma(b)
                        + x * lvp + (kappa - x) * l1vp
                        + (a - 1.0) * lvn + (b - 1.0) * l1vn)
    return out
