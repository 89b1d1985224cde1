# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled digit-counting kernels; mirrors ``_kernels_py``.

Callers guarantee that every operand fits comfortably in 64 bits (the
dispatcher in ``behrend`` falls back to the pure module otherwise).
"""

from libc.stdlib cimport calloc, free
from libc.string cimport memset


cdef long long _top_square_sum(long long x, int pos, int carry,
                               int d, int m, int kprime) noexcept nogil:
    cdef long long z, w
    cdef int i
    if pos >= d:
        return 0 if carry == 0 else -1
    z = (x >> (pos * kprime)) + carry
    if z >> ((d - pos) * kprime):
        return -1
    cdef long long mask = (<long long>1 << kprime) - 1
    cdef long long acc = 0
    for i in range(d - pos):
        w = z & mask
        if w >= m:
            return -1
        acc += w * w
        z >>= kprime
    return acc


cdef long long _count_range(long long x, int k, int r,
                            int d, int m, int kprime,
                            long long* buf) noexcept nogil:
    # buf holds 4 rows of (r + 1) entries: dp[0], dp[1], ndp[0], ndp[1].
    cdef long long base = <long long>1 << kprime
    cdef long long limit = <long long>1 << (d * kprime)
    cdef int width = r + 1
    cdef int full, partial_bits, i, carry_in, carry_out, v, s, sj
    cdef long long xi, bound, sigma, vv, top, c, total, y2
    cdef long long *dp0
    cdef long long *dp1
    cdef long long *nd0
    cdef long long *nd1
    cdef long long *tmp
    if x >= limit:
        return 0
    if k > d * kprime:
        k = d * kprime
    full = k / kprime
    partial_bits = k - full * kprime
    dp0 = buf
    dp1 = buf + width
    nd0 = buf + 2 * width
    nd1 = buf + 3 * width
    memset(dp0, 0, 2 * width * sizeof(long long))
    dp0[0] = 1
    for i in range(full):
        xi = (x >> (i * kprime)) & (base - 1)
        memset(nd0, 0, 2 * width * sizeof(long long))
        for carry_in in range(2):
            bound = xi + carry_in
            for v in range(m):
                vv = <long long>v * v
                if vv > r:
                    break
                if v < bound:
                    tmp = nd1
                else:
                    tmp = nd0
                for s in range(width - <int>vv):
                    c = dp0[s] if carry_in == 0 else dp1[s]
                    if c:
                        tmp[s + <int>vv] += c
        tmp = dp0; dp0 = nd0; nd0 = tmp
        tmp = dp1; dp1 = nd1; nd1 = tmp
    total = 0
    if partial_bits:
        xi = (x >> (full * kprime)) & (base - 1)
        for carry_in in range(2):
            for y2 in range(<long long>1 << partial_bits):
                sigma = xi + y2 + carry_in
                carry_out = 1 if sigma >= base else 0
                v = <int>(sigma - (<long long>carry_out << kprime))
                if v >= m:
                    continue
                top = _top_square_sum(x, full + 1, carry_out, d, m, kprime)
                if top < 0:
                    continue
                sj = r - v * v - <int>top
                if 0 <= sj <= r:
                    total += dp0[sj] if carry_in == 0 else dp1[sj]
    else:
        for carry_in in range(2):
            top = _top_square_sum(x, full, carry_in, d, m, kprime)
            if top < 0:
                continue
            sj = r - <int>top
            if 0 <= sj <= r:
                total += dp0[sj] if carry_in == 0 else dp1[sj]
    return total


cdef long long _count_below(long long bound, int r, int d, int m, int kprime,
                            long long* buf) noexcept nogil:
    cdef long long limit = <long long>1 << (d * kprime)
    cdef long long total = 0, cur = 0
    cdef int j, top
    if bound > limit:
        bound = limit
    if bound <= 0:
        return 0
    top = 0
    while (<long long>1 << (top + 1)) <= bound:
        top += 1
    for j in range(top, -1, -1):
        if (bound >> j) & 1:
            total += _count_range(cur, j, r, d, m, kprime, buf)
            cur += <long long>1 << j
    return total


def count_range(x, k, r, d, m, kprime):
    cdef long long out
    cdef long long* buf = <long long*>calloc(4 * (r + 1), sizeof(long long))
    if buf == NULL:
        raise MemoryError()
    try:
        out = _count_range(x, k, r, d, m, kprime, buf)
    finally:
        free(buf)
    return out


def count_below(bound, r, d, m, kprime):
    cdef long long out
    cdef long long* buf = <long long*>calloc(4 * (r + 1), sizeof(long long))
    if buf == NULL:
        raise MemoryError()
    try:
        out = _count_below(bound, r, d, m, kprime, buf)
    finally:
        free(buf)
    return out


def window_sum(long long[::1] values, tau, k, r, d, m, kprime):
    cdef long long t = tau, total = 0, x
    cdef long long span = <long long>1 << k
    cdef int kk = k, rr = r, dd = d, mm = m, kp = kprime
    cdef Py_ssize_t i, n = values.shape[0]
    cdef long long* buf = <long long*>calloc(4 * (r + 1), sizeof(long long))
    if buf == NULL:
        raise MemoryError()
    try:
        with nogil:
            for i in range(n):
                x = values[i] - t - span + 1
                if x >= 0:
                    total += _count_range(x, kk, rr, dd, mm, kp, buf)
                else:
                    total += _count_below(x + span, rr, dd, mm, kp, buf)
    finally:
        free(buf)
    return total
