"""Families of equation-free sets built from digit spheres.

For parameters (gamma, delta) the family Q_0, ..., Q_{r_max} over [0, N)
is defined digit-wise: pick the base 2**digit_width = p*m where p is the
smallest power of two exceeding gamma + delta and m = p**(d-1); a number
belongs to Q_r when each of its d digits is below m and the digit squares
sum to r. Every Q_r avoids gamma*a + delta*b = (gamma+delta)*c over
distinct a, b, c, because the coefficients are too small to produce digit
carries and the sphere constraint forces equality through the triangle
inequality.

Range counting (how many members of Q_r land in a window) is answered by
a dynamic program over digits, without materializing the sets.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import _backend
from .core import checked_wide

__all__ = [
    "BehrendParams",
    "make_params",
    "q_membership",
    "q_count_range",
    "q_size",
    "q_elements",
    "best_r",
    "smallest_power_of_two_above",
]

# Operand budget for the int64 compiled kernels; larger parameterizations
# fall back to the exact pure-Python path.
_COMPILED_BIT_BUDGET = 60


def smallest_power_of_two_above(value: int) -> int:
    """Smallest power of two strictly greater than ``value`` (>= 1)."""
    return 1 << value.bit_length()


@dataclass(frozen=True)
class BehrendParams:
    """Derived construction parameters for a universe and coefficient pair.

    Invariants: p is a power of two above gamma + delta, d is the largest
    integer with p**(d*d) <= N, m = p**(d-1), p*m = 2**digit_width, and
    every sphere member is below (p*m)**d <= N.
    """

    N: int
    gamma: int
    delta: int
    p: int
    d: int
    m: int
    digit_width: int
    r_max: int

    @property
    def base(self) -> int:
        return 1 << self.digit_width

    @property
    def limit(self) -> int:
        """Exclusive upper bound (p*m)**d on sphere members."""
        return 1 << (self.digit_width * self.d)

    def _structure(self) -> tuple[int, int]:
        # Everything except N is determined by (p, d); cache keys use this.
        return (self.p, self.d)


def make_params(N: int, gamma: int, delta: int) -> BehrendParams:
    """Derive construction parameters for universe size N.

    d is computed as the largest d with p**(d*d) <= N, which equals the
    floor of sqrt(log_p N) without floating-point boundary hazards.
    """
    if gamma < 1 or delta < 1:
        raise ValueError("gamma and delta must be positive")
    if N < 1:
        raise ValueError("N must be positive")
    p = smallest_power_of_two_above(gamma + delta)
    d = 0
    while p ** ((d + 1) * (d + 1)) <= N:
        d += 1
    if d < 1:
        raise ValueError(f"N={N} is too small for the construction (need N >= {p})")
    m = p ** (d - 1)
    digit_width = (p * m).bit_length() - 1
    r_max = d * (m - 1) * (m - 1)
    return BehrendParams(
        N=N, gamma=gamma, delta=delta, p=p, d=d, m=m,
        digit_width=digit_width, r_max=r_max,
    )


def _check_r(r: int, params: BehrendParams) -> None:
    if not 0 <= r <= params.r_max:
        raise ValueError(f"radius r={r} outside [0, {params.r_max}]")


def q_membership(x: int, r: int, params: BehrendParams) -> bool:
    """Digit test: True iff x is a sphere member of radius r.

    Negative values are vacuously non-members (the family lives in
    [0, (p*m)**d)). Runs in O(d) with constant space.
    """
    _check_r(r, params)
    if x < 0 or x >= params.limit:
        return False
    acc = 0
    mask = params.base - 1
    for _ in range(params.d):
        digit = x & mask
        if digit >= params.m:
            return False
        acc += digit * digit
        x >>= params.digit_width
    return acc == r


def _kernel_for(params: BehrendParams, x: int, k: int):
    if (
        _backend.USING_COMPILED
        and params.digit_width * params.d <= _COMPILED_BIT_BUDGET
        and abs(x) < (1 << 62)
        and k <= 62
    ):
        return _backend.compiled
    return _backend.pure


def q_count_range(x: int, k: int, r: int, params: BehrendParams) -> int:
    """Count sphere members of radius r in [x, x + 2**k).

    x may be any integer: windows reaching below zero are truncated at
    zero and the surviving prefix is counted as dyadic pieces, each by
    the same digit dynamic program.
    """
    _check_r(r, params)
    if k < 0:
        raise ValueError("k must be nonnegative")
    kern = _kernel_for(params, x, k)
    if x >= 0:
        return kern.count_range(x, k, r, params.d, params.m, params.digit_width)
    bound = x + (1 << k)
    if bound <= 0:
        return 0
    bound = min(bound, params.limit)
    return kern.count_below(bound, r, params.d, params.m, params.digit_width)


_size_cache: dict[tuple[int, int, int], int] = {}
_elements_cache: dict[tuple[int, int, int], tuple[int, ...]] = {}


def q_size(r: int, params: BehrendParams) -> int:
    """|Q_r|, evaluated by the range-counting program over the whole
    digit range. Cached on (p, d, r): the construction is independent of
    N once p and d are fixed."""
    _check_r(r, params)
    key = (*params._structure(), r)
    got = _size_cache.get(key)
    if got is None:
        got = q_count_range(0, params.d * params.digit_width, r, params)
        _size_cache[key] = got
    return got


def q_elements(r: int, params: BehrendParams) -> tuple[int, ...]:
    """Explicit sorted members of Q_r, by digit enumeration.

    Intended for desk-scale radii where the sphere is small; the range
    counting path never needs this.
    """
    _check_r(r, params)
    key = (*params._structure(), r)
    got = _elements_cache.get(key)
    if got is not None:
        return got
    d, m, width = params.d, params.m, params.digit_width
    # reachable[j][s]: can j digits reach square sum s
    reachable = [[False] * (r + 1) for _ in range(d + 1)]
    reachable[0][0] = True
    for j in range(1, d + 1):
        prev = reachable[j - 1]
        cur = reachable[j]
        for v in range(m):
            vsq = v * v
            if vsq > r:
                break
            for s in range(r + 1 - vsq):
                if prev[s]:
                    cur[s + vsq] = True
    out: list[int] = []

    def walk(pos: int, remaining: int, value: int) -> None:
        if pos == d:
            if remaining == 0:
                out.append(value)
            return
        rest = d - pos - 1
        for v in range(m):
            vsq = v * v
            if vsq > remaining:
                break
            if reachable[rest][remaining - vsq]:
                walk(pos + 1, remaining - vsq, value + (v << (pos * width)))

    walk(0, r, 0)
    out.sort()
    result = tuple(out)
    _elements_cache[key] = result
    return result


def best_r(params: BehrendParams) -> tuple[int, int]:
    """The radius with the largest sphere (smallest r on ties) and its
    size. Pigeonhole over the m**d lattice points guarantees the winner
    holds at least m**d / (d*(m-1)**2 + 1) members."""
    best_radius = 0
    best_size = -1
    for r in range(params.r_max + 1):
        size = q_size(r, params)
        if size > best_size:
            best_radius, best_size = r, size
    checked_wide(best_size)
    return best_radius, best_size


def ranked_radii(params: BehrendParams) -> list[tuple[int, int]]:
    """All radii with nonempty spheres, densest first, ties toward
    smaller r."""
    sizes = [(r, q_size(r, params)) for r in range(params.r_max + 1)]
    nonempty = [(r, s) for r, s in sizes if s > 0]
    nonempty.sort(key=lambda rs: (-rs[1], rs[0]))
    return nonempty


def density_lower_bound(params: BehrendParams) -> tuple[int, int]:
    """Numerator and denominator of the pigeonhole bound
    m**d / (d*(m-1)**2 + 1)."""
    return params.m ** params.d, params.r_max + 1
