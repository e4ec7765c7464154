"""Pure numpy implementation of the sampling kernels.

Mirrors ``_kernels.pyx`` operation for operation. The uniforms are
bit-identical across the two backends (integer arithmetic only); the
maxima agree to the last few ulps of the platform's ``sin``/``cos``.
"""

from __future__ import annotations

import math

import numpy as np

NAME = "python"

CHUNK = 1 << 16

_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_W0 = 0x9E3779B9
_W1 = 0xBB67AE85
_MASK32 = 0xFFFFFFFF
_SHIFT32 = np.uint64(32)
_SHIFT11 = np.uint64(11)
_TWO_M53 = 2.0**-53


def _round_keys(seed: int):
    k0, k1 = seed & _MASK32, (seed >> 32) & _MASK32
    keys = []
    for _ in range(10):
        keys.append((np.uint32(k0), np.uint32(k1)))
        k0 = (k0 + _W0) & _MASK32
        k1 = (k1 + _W1) & _MASK32
    return keys


def philox4x32(c0, c1, c2, c3, seed: int):
    """Ten-round Philox4x32 on uint32 counter words, key taken from ``seed``."""
    c0, c1, c2, c3 = (np.asarray(c, dtype=np.uint32) for c in (c0, c1, c2, c3))
    for k0, k1 in _round_keys(seed):
        p0 = _M0 * c0.astype(np.uint64)
        p1 = _M1 * c2.astype(np.uint64)
        c0, c1, c2, c3 = (
            (p1 >> _SHIFT32).astype(np.uint32) ^ c1 ^ k0,
            p1.astype(np.uint32),
            (p0 >> _SHIFT32).astype(np.uint32) ^ c3 ^ k1,
            p0.astype(np.uint32),
        )
    return c0, c1, c2, c3


def _u53(hi, lo):
    k = ((hi.astype(np.uint64) << _SHIFT32) | lo.astype(np.uint64)) >> _SHIFT11
    return (k.astype(np.float64) + 0.5) * _TWO_M53


def philox_pairs(seed: int, stream: int, start: int, count: int) -> np.ndarray:
    """Uniform pairs in (0, 1) for draw indices ``start .. start+count-1``."""
    idx = np.arange(start, start + count, dtype=np.uint64)
    c0 = (idx & np.uint64(_MASK32)).astype(np.uint32)
    c1 = (idx >> _SHIFT32).astype(np.uint32)
    c2 = np.full(count, stream & _MASK32, dtype=np.uint32)
    c3 = np.full(count, (stream >> 32) & _MASK32, dtype=np.uint32)
    w0, w1, w2, w3 = philox4x32(c0, c1, c2, c3, seed)
    out = np.empty((count, 2))
    out[:, 0] = _u53(w0, w1)
    out[:, 1] = _u53(w2, w3)
    return out


def closed_form_radius(rcode: int, rp1: float, rp2: float, u: np.ndarray) -> np.ndarray:
    if rcode == 1:
        return np.sqrt(-2.0 * np.log1p(-u))
    if rcode == 2:
        return u
    if rcode == 3:
        return np.power(-np.log1p(-u) / rp1, rp2)
    if rcode == 4:
        return np.power(u, rp1)
    if rcode == 5:
        return -np.expm1(np.log1p(-u) * rp1)
    raise ValueError(f"unknown radius code {rcode}")


def transform(radii, u_theta, mcode: int, r1: float, s1: float, r2: float, s2: float):
    theta = (2.0 * u_theta - 1.0) * math.pi
    x = radii * np.cos(theta)
    y = radii * np.sin(theta)
    if mcode == 0:
        return x, r1 * x + s1 * y
    if mcode == 1:
        ax = np.abs(x)
        return ax, r1 * ax + s1 * y
    if mcode == 2:
        return x, r1 * np.abs(x) + s1 * y
    if mcode == 3:
        ax = np.abs(x)
        return r1 * ax + s1 * y, r2 * ax + s2 * y
    raise ValueError(f"unknown model code {mcode}")


def row_maxima_polar(radii, u_theta, mcode, r1, s1, r2, s2):
    a, b = transform(np.asarray(radii, dtype=float), np.asarray(u_theta, dtype=float), mcode, r1, s1, r2, s2)
    return float(a.max()), float(b.max())


def row_maxima_fused(seed, stream, start, n, rcode, rp1, rp2, mcode, r1, s1, r2, s2):
    m1 = m2 = -math.inf
    for lo in range(start, start + n, CHUNK):
        count = min(CHUNK, start + n - lo)
        u = philox_pairs(seed, stream, lo, count)
        radii = closed_form_radius(rcode, rp1, rp2, u[:, 0])
        a, b = row_maxima_polar(radii, u[:, 1], mcode, r1, s1, r2, s2)
        m1 = max(m1, a)
        m2 = max(m2, b)
    return m1, m2
