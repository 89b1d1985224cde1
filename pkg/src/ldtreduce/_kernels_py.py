"""Pure-Python digit-counting kernels.

Twin of the compiled module in ``_kernels.pyx``; selected at import time
when the extension is missing or disabled. Operates on plain Python
integers, so results are exact for any operand size.

The counted objects are "digit spheres": nonnegative integers with d
digits in base 2**kprime, every digit below m, whose digit squares sum
to a prescribed radius r.
"""

from __future__ import annotations

__all__ = ["count_range", "count_below", "window_sum"]


def count_range(x: int, k: int, r: int, d: int, m: int, kprime: int) -> int:
    """Number of sphere members in [x, x + 2**k) for nonnegative x.

    Dynamic program over the base-2**kprime digits of the offset y: state
    (carry, digit-square sum) after each full digit of x + y, then an
    explicit scan of the k % kprime leftover bits, then validation of the
    untouched top digits of x (plus the pending carry). Offsets that push
    x + y beyond the d-digit range are rejected via the final carry.
    """
    base = 1 << kprime
    limit = 1 << (d * kprime)
    if x >= limit:
        return 0
    if k > d * kprime:
        k = d * kprime
    full, partial_bits = divmod(k, kprime)
    width = r + 1
    dp = [[0] * width, [0] * width]
    dp[0][0] = 1
    for i in range(full):
        xi = (x >> (i * kprime)) & (base - 1)
        ndp = [[0] * width, [0] * width]
        for carry_in in (0, 1):
            row = dp[carry_in]
            if not any(row):
                continue
            bound = xi + carry_in
            for v in range(m):
                vsq = v * v
                if vsq > r:
                    break
                out = ndp[1 if v < bound else 0]
                for s in range(width - vsq):
                    c = row[s]
                    if c:
                        out[s + vsq] += c
        dp = ndp
    total = 0
    if partial_bits:
        xi = (x >> (full * kprime)) & (base - 1)
        tops = (
            _top_square_sum(x, full + 1, 0, d, m, kprime),
            _top_square_sum(x, full + 1, 1, d, m, kprime),
        )
        for carry_in in (0, 1):
            row = dp[carry_in]
            for y2 in range(1 << partial_bits):
                sigma = xi + y2 + carry_in
                carry_out = 1 if sigma >= base else 0
                v = sigma - (carry_out << kprime)
                if v >= m:
                    continue
                top = tops[carry_out]
                if top < 0:
                    continue
                s_needed = r - v * v - top
                if 0 <= s_needed <= r:
                    total += row[s_needed]
    else:
        for carry_in in (0, 1):
            top = _top_square_sum(x, full, carry_in, d, m, kprime)
            if top < 0:
                continue
            s_needed = r - top
            if 0 <= s_needed <= r:
                total += dp[carry_in][s_needed]
    return total


def _top_square_sum(x: int, pos: int, carry: int, d: int, m: int, kprime: int) -> int:
    """Square sum of digits pos..d-1 of x plus an incoming carry, or -1
    when a digit reaches m or the carry overflows past digit d-1."""
    if pos >= d:
        return 0 if carry == 0 else -1
    z = (x >> (pos * kprime)) + carry
    if z >> ((d - pos) * kprime):
        return -1
    mask = (1 << kprime) - 1
    acc = 0
    for _ in range(d - pos):
        w = z & mask
        if w >= m:
            return -1
        acc += w * w
        z >>= kprime
    return acc


def count_below(bound: int, r: int, d: int, m: int, kprime: int) -> int:
    """Number of sphere members in [0, bound), via dyadic pieces of the
    prefix, each counted by the same digit dynamic program."""
    limit = 1 << (d * kprime)
    if bound > limit:
        bound = limit
    if bound <= 0:
        return 0
    total = 0
    cur = 0
    for j in range(bound.bit_length() - 1, -1, -1):
        if (bound >> j) & 1:
            total += count_range(cur, j, r, d, m, kprime)
            cur += 1 << j
    return total


def window_sum(values, tau: int, k: int, r: int, d: int, m: int, kprime: int) -> int:
    """Sum over a of the sphere members in [a - tau - 2**k + 1, a - tau].

    Windows extending below zero are truncated at zero, since sphere
    members are nonnegative.
    """
    span = 1 << k
    total = 0
    for a in values:
        x = a - tau - span + 1
        if x >= 0:
            total += count_range(x, k, r, d, m, kprime)
        else:
            total += count_below(x + span, r, d, m, kprime)
    return total
