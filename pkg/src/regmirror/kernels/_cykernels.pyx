# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled mirror-step kernels. Same contract as _pykernels."""

from libc.math cimport exp, fabs, pow, sqrt


cdef inline double _signed_pow(double x, double e) nogil:
    # fast paths for the exponents q-norm potentials actually hit
    # (q = 3 gives e = 2 forward and e = 1/2 inverse)
    cdef double a = fabs(x)
    cdef double r
    if e == 2.0:
        r = a * a
    elif e == 0.5:
        r = sqrt(a)
    elif e == 1.0:
        r = a
    else:
        r = pow(a, e)
    if x > 0.0:
        return r
    elif x < 0.0:
        return -r
    return 0.0


def l2_step(double[::1] w, double[::1] g, double s):
    cdef Py_ssize_t k, n = w.shape[0]
    with nogil:
        for k in range(n):
            w[k] += s * g[k]


def qnorm_step(double[::1] w, double[::1] g, double s, double q):
    cdef Py_ssize_t k, n = w.shape[0]
    cdef double dual
    cdef double e_fwd = q - 1.0
    cdef double e_inv = 1.0 / (q - 1.0)
    with nogil:
        for k in range(n):
            dual = _signed_pow(w[k], e_fwd) + s * g[k]
            w[k] = _signed_pow(dual, e_inv)


def entropy_step(double[::1] w, double[::1] g, double s):
    cdef Py_ssize_t k, n = w.shape[0]
    cdef double lo
    with nogil:
        for k in range(n):
            w[k] *= exp(s * g[k])
        lo = w[0]
        for k in range(1, n):
            if w[k] < lo:
                lo = w[k]
    return lo
