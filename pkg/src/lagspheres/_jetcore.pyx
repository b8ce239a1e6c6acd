# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled 2-jet kernel for the immersion family Phi_t.

Same formulas as ``_kernels.phi_components``, carried through a small
struct of Taylor coefficients per point instead of numpy temporaries.
"""

from libc.math cimport sqrt, sinh, cosh, tanh, sin, cos

import numpy as np


cdef struct jet:
    double v
    double d1
    double d2
    double d11
    double d12
    double d22


cdef inline jet jconst(double c) noexcept nogil:
    cdef jet r
    r.v = c
    r.d1 = 0.0
    r.d2 = 0.0
    r.d11 = 0.0
    r.d12 = 0.0
    r.d22 = 0.0
    return r


cdef inline jet jvar(double c, int index) noexcept nogil:
    cdef jet r = jconst(c)
    if index == 1:
        r.d1 = 1.0
    else:
        r.d2 = 1.0
    return r


cdef inline jet jadd(jet a, jet b) noexcept nogil:
    cdef jet r
    r.v = a.v + b.v
    r.d1 = a.d1 + b.d1
    r.d2 = a.d2 + b.d2
    r.d11 = a.d11 + b.d11
    r.d12 = a.d12 + b.d12
    r.d22 = a.d22 + b.d22
    return r


cdef inline jet jaxpy(double s, jet a, double c) noexcept nogil:
    # s * a + c
    cdef jet r
    r.v = s * a.v + c
    r.d1 = s * a.d1
    r.d2 = s * a.d2
    r.d11 = s * a.d11
    r.d12 = s * a.d12
    r.d22 = s * a.d22
    return r


cdef inline jet jmul(jet a, jet b) noexcept nogil:
    cdef jet r
    r.v = a.v * b.v
    r.d1 = a.d1 * b.v + a.v * b.d1
    r.d2 = a.d2 * b.v + a.v * b.d2
    r.d11 = a.d11 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d11
    r.d12 = a.d12 * b.v + a.d1 * b.d2 + a.d2 * b.d1 + a.v * b.d12
    r.d22 = a.d22 * b.v + 2.0 * a.d2 * b.d2 + a.v * b.d22
    return r


cdef inline jet jchain(jet a, double f0, double f1, double f2) noexcept nogil:
    cdef jet r
    r.v = f0
    r.d1 = f1 * a.d1
    r.d2 = f1 * a.d2
    r.d11 = f1 * a.d11 + f2 * a.d1 * a.d1
    r.d12 = f1 * a.d12 + f2 * a.d1 * a.d2
    r.d22 = f1 * a.d22 + f2 * a.d2 * a.d2
    return r


cdef inline jet jrecip(jet a) noexcept nogil:
    cdef double q = 1.0 / a.v
    return jchain(a, q, -q * q, 2.0 * q * q * q)


cdef inline jet jsqrt(jet a) noexcept nogil:
    cdef double r = sqrt(a.v)
    return jchain(a, r, 0.5 / r, -0.25 / (r * a.v))


cdef inline jet jsin(jet a) noexcept nogil:
    cdef double s = sin(a.v), c = cos(a.v)
    return jchain(a, s, c, -s)


cdef inline jet jcos(jet a) noexcept nogil:
    cdef double s = sin(a.v), c = cos(a.v)
    return jchain(a, c, -s, -c)


cdef inline jet jsech(jet a) noexcept nogil:
    cdef double q = 1.0 / cosh(a.v), th = tanh(a.v)
    # d sech = -sech tanh ; d2 sech = sech (tanh^2 - sech^2)
    return jchain(a, q, -q * th, q * (th * th - q * q))


cdef inline jet jtanh(jet a) noexcept nogil:
    cdef double th = tanh(a.v)
    cdef double s2 = 1.0 - th * th
    return jchain(a, th, s2, -2.0 * th * s2)


cdef inline void store(double[:, :, ::1] out, Py_ssize_t k, Py_ssize_t comp, jet a) noexcept nogil:
    out[0, k, comp] = a.v
    out[1, k, comp] = a.d1
    out[2, k, comp] = a.d2
    out[3, k, comp] = a.d11
    out[4, k, comp] = a.d12
    out[5, k, comp] = a.d22


def phi_jets(double c1, double c2, double t, int chart,
             const double[::1] u1, const double[::1] u2):
    """2-jets of Phi_t at chart points; returns an array ``(6, n, 6)``.

    ``chart`` is 0 for the cylinder chart (s1, s2) and 1 for the sphere
    chart (x, theta).
    """
    cdef Py_ssize_t n = u1.shape[0]
    if u2.shape[0] != n:
        raise ValueError("coordinate arrays differ in length")
    if chart != 0 and chart != 1:
        raise ValueError(f"unknown chart code {chart}")
    result = np.empty((6, n, 6), dtype=np.float64)
    cdef double[:, :, ::1] out = result

    cdef double st = sinh(t), ct = cosh(t)
    cdef double rd = sqrt(c1 - c2)
    cdef double den0 = c1 * ct * ct - c2 * st * st
    cdef double den2 = c1 * st * st - c2 * ct * ct
    cdef double n10 = (c1 * ct * ct - 2.0 * c1 - c2 * st * st) / (2.0 * sqrt(c1) * rd)
    cdef double n12 = (c1 * st * st + 2.0 * c1 - c2 * ct * ct) / (2.0 * sqrt(c1) * rd)
    cdef double n20 = (c1 * ct * ct - 2.0 * c2 - c2 * st * st) / (2.0 * sqrt(c2) * rd)
    cdef double n22 = (c1 * st * st + 2.0 * c2 - c2 * ct * ct) / (2.0 * sqrt(c2) * rd)

    cdef Py_ssize_t k
    cdef jet a, b, r, zr, zi, x, xx, k_, xzr, xzi
    with nogil:
        for k in range(n):
            a = jvar(u1[k], 1)
            b = jvar(u2[k], 2)
            if chart == 0:
                r = jsech(a)
                x = jtanh(a)
            else:
                r = jsqrt(jaxpy(-1.0, jmul(a, a), 1.0))
                x = a
            zr = jmul(r, jcos(b))
            zi = jmul(r, jsin(b))
            xx = jmul(x, x)
            k_ = jaxpy(2.0 * rd, jrecip(jaxpy(den2, xx, den0)), 0.0)
            xzr = jmul(x, zr)
            xzi = jmul(x, zi)
            store(out, k, 0, jmul(k_, jadd(jaxpy(st, zr, 0.0), jaxpy(-ct, xzi, 0.0))))
            store(out, k, 1, jmul(k_, jadd(jaxpy(st, zi, 0.0), jaxpy(ct, xzr, 0.0))))
            store(out, k, 2, jmul(k_, jaxpy(n12, xx, n10)))
            store(out, k, 3, jmul(k_, jadd(jaxpy(ct, zr, 0.0), jaxpy(st, xzi, 0.0))))
            store(out, k, 4, jmul(k_, jadd(jaxpy(st, xzr, 0.0), jaxpy(-ct, zi, 0.0))))
            store(out, k, 5, jmul(k_, jaxpy(n22, xx, n20)))
    return result
