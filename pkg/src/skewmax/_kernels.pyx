# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled sampling kernels.

Same arithmetic as ``_fallback.py``: Philox4x32-10 keyed by the seed with
counter ``(draw index, stream id)``, 53-bit uniforms on the open unit
interval, inverse-transform radius, and the four array transforms. Loops
release the GIL so replications can run on threads.
"""

import numpy as np

from libc.math cimport INFINITY, cos, expm1, fabs, log1p, pow, sin, sqrt
from libc.stdint cimport uint32_t, uint64_t

NAME = "cython"

cdef double PI = 3.141592653589793
cdef double TWO_M53 = 1.0 / 9007199254740992.0


cdef inline void _philox(uint32_t* c, uint64_t seed) noexcept nogil:
    cdef uint32_t k0 = <uint32_t>seed
    cdef uint32_t k1 = <uint32_t>(seed >> 32)
    cdef uint64_t p0, p1
    cdef uint32_t t1, t3
    cdef int r
    for r in range(10):
        p0 = <uint64_t>0xD2511F53 * <uint64_t>c[0]
        p1 = <uint64_t>0xCD9E8D57 * <uint64_t>c[2]
        t1 = c[1]
        t3 = c[3]
        c[0] = <uint32_t>(p1 >> 32) ^ t1 ^ k0
        c[1] = <uint32_t>p1
        c[2] = <uint32_t>(p0 >> 32) ^ t3 ^ k1
        c[3] = <uint32_t>p0
        k0 = k0 + <uint32_t>0x9E3779B9
        k1 = k1 + <uint32_t>0xBB67AE85


cdef inline double _u53(uint32_t hi, uint32_t lo) noexcept nogil:
    cdef uint64_t k = (((<uint64_t>hi) << 32) | <uint64_t>lo) >> 11
    return (<double>k + 0.5) * TWO_M53


cdef inline void _draw(uint64_t seed, uint64_t stream, uint64_t idx, double* ur, double* ut) noexcept nogil:
    cdef uint32_t c[4]
    c[0] = <uint32_t>idx
    c[1] = <uint32_t>(idx >> 32)
    c[2] = <uint32_t>stream
    c[3] = <uint32_t>(stream >> 32)
    _philox(c, seed)
    ur[0] = _u53(c[0], c[1])
    ut[0] = _u53(c[2], c[3])


cdef inline double _radius(int rcode, double rp1, double rp2, double u) noexcept nogil:
    if rcode == 1:
        return sqrt(-2.0 * log1p(-u))
    if rcode == 2:
        return u
    if rcode == 3:
        return pow(-log1p(-u) / rp1, rp2)
    if rcode == 4:
        return pow(u, rp1)
    return -expm1(log1p(-u) * rp1)


cdef inline void _transform(double r, double ut, int mcode, double r1, double s1, double r2, double s2,
                            double* a, double* b) noexcept nogil:
    cdef double theta = (2.0 * ut - 1.0) * PI
    cdef double x = r * cos(theta)
    cdef double y = r * sin(theta)
    cdef double ax
    if mcode == 0:
        a[0] = x
        b[0] = r1 * x + s1 * y
    elif mcode == 1:
        ax = fabs(x)
        a[0] = ax
        b[0] = r1 * ax + s1 * y
    elif mcode == 2:
        a[0] = x
        b[0] = r1 * fabs(x) + s1 * y
    else:
        ax = fabs(x)
        a[0] = r1 * ax + s1 * y
        b[0] = r2 * ax + s2 * y


def _check_codes(int rcode, int mcode):
    if rcode < 1 or rcode > 5:
        raise ValueError(f"unknown radius code {rcode}")
    if mcode < 0 or mcode > 3:
        raise ValueError(f"unknown model code {mcode}")


def philox_pairs(uint64_t seed, uint64_t stream, uint64_t start, Py_ssize_t count):
    """Uniform pairs in (0, 1) for draw indices ``start .. start+count-1``."""
    out = np.empty((count, 2))
    cdef double[:, ::1] view = out
    cdef Py_ssize_t j
    with nogil:
        for j in range(count):
            _draw(seed, stream, start + <uint64_t>j, &view[j, 0], &view[j, 1])
    return out


def row_maxima_polar(const double[::1] radii, const double[::1] u_theta, int mcode,
                     double r1, double s1, double r2, double s2):
    _check_codes(1, mcode)
    if radii.shape[0] != u_theta.shape[0] or radii.shape[0] == 0:
        raise ValueError("radii and u_theta must be non-empty and of equal length")
    cdef double m1 = -INFINITY
    cdef double m2 = -INFINITY
    cdef double a, b
    cdef Py_ssize_t j
    with nogil:
        for j in range(radii.shape[0]):
            _transform(radii[j], u_theta[j], mcode, r1, s1, r2, s2, &a, &b)
            if a > m1:
                m1 = a
            if b > m2:
                m2 = b
    return m1, m2


def row_maxima_fused(uint64_t seed, uint64_t stream, uint64_t start, Py_ssize_t n,
                     int rcode, double rp1, double rp2, int mcode,
                     double r1, double s1, double r2, double s2):
    """Componentwise maxima of ``n`` pairs for a radius with closed-form quantile."""
    _check_codes(rcode, mcode)
    cdef double m1 = -INFINITY
    cdef double m2 = -INFINITY
    cdef double ur, ut, a, b
    cdef Py_ssize_t j
    with nogil:
        for j in range(n):
            _draw(seed, stream, start + <uint64_t>j, &ur, &ut)
            _transform(_radius(rcode, rp1, rp2, ur), ut, mcode, r1, s1, r2, s2, &a, &b)
            if a > m1:
                m1 = a
            if b > m2:
                m2 = b
    return m1, m2
