"""Derandomized shift selection and partitioning into equation-free sets.

``find_shift`` locates a translate of a digit sphere Q_r that meets a
given set A in at least |A| * |Q_r| / (2N) elements, by fixing the bits
of the shift from the most significant down and keeping, at every step,
the half-window whose conditional expectation (an exact integer count
divided by a power of two) is larger.

``partition_free`` peels such intersections off A until nothing is left,
yielding parts that each avoid gamma*a + delta*b = (gamma+delta)*c.

Two interchangeable evaluation engines compute the window counts:

* ``dp``      - one digit-dynamic-program call per set element, exactly
                the definition of the conditional expectation;
* ``sparse``  - materializes the multiset {a' - q} once and answers each
                window by binary search. Feasible whenever the sphere is
                small enough to enumerate, and returns bit-for-bit the
                same sums, hence the same shifts.

The default picks ``sparse`` when the element/sphere product is modest
and ``dp`` otherwise. Equality of the two engines is enforced by tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from . import _backend
from .behrend import (
    BehrendParams,
    make_params,
    q_elements,
    q_membership,
    q_size,
    ranked_radii,
    smallest_power_of_two_above,
)

__all__ = [
    "ShiftResult",
    "FreePartition",
    "find_shift",
    "extract_free_subset",
    "partition_free",
    "is_free",
    "iteration_cap",
]

# Above this element/sphere product the sparse engine would allocate too
# much; the dynamic-program engine takes over.
_SPARSE_PRODUCT_LIMIT = 8_000_000

OnStep = Callable[[int, int, int, int], None]


@dataclass(frozen=True)
class ShiftResult:
    """A chosen shift and the size of the resulting intersection.

    ``hit_count`` equals |(Q_r + delta) & A| and is at least
    |A| * |Q_r| / (2N) whenever every (element, member) pair is reachable
    within the nonnegative shift window, which holds for the nonnegative
    normalized sets used throughout this package.
    """

    delta: int
    hit_count: int


@dataclass(frozen=True)
class FreePartition:
    """Disjoint cover of ``source`` by (gamma, delta)-free parts, in
    extraction order."""

    parts: tuple[tuple[int, ...], ...]
    gamma: int
    delta: int
    source: tuple[int, ...]


def iteration_cap(n: int, sphere_size: int, N: int) -> int:
    """Extraction budget for one radius: ceil(ln n / -ln(1 - q/(2N))) + 1.

    Derived from the guaranteed per-step shrink factor (1 - q/(2N)); the
    loop aborting on this cap indicates a counting bug, not bad luck.
    """
    if n <= 1:
        return 1
    rate = -math.log1p(-sphere_size / (2 * N))
    return math.ceil(math.log(n) / rate) + 1


def _descend(window_fn: Callable[[int, int], int], K: int,
             on_step: Optional[OnStep]) -> tuple[int, int]:
    """Greedy bit descent over dyadic windows of [0, 2**K).

    ``window_fn(tau, w)`` must return the exact number of (element,
    member) pairs whose difference lies in [tau, tau + 2**w). Returns the
    final window start and its pair count. Ties keep the low half, so
    results are reproducible.
    """
    tau = 0
    s_prev: Optional[int] = None
    for k in range(K, 0, -1):
        half = 1 << (k - 1)
        s_low = window_fn(tau, k - 1)
        s_high = window_fn(tau + half, k - 1)
        parent = s_low + s_high
        if s_prev is not None and parent != s_prev:
            raise RuntimeError(
                f"window sums inconsistent at bit {k}: {s_low}+{s_high} != {s_prev}"
            )
        chosen = s_low if s_low >= s_high else s_high
        if 2 * chosen < parent:
            raise RuntimeError("conditional expectation decreased")
        if on_step is not None:
            on_step(k, parent, s_low, s_high)
        if s_high > s_low:
            tau += half
        s_prev = chosen
    return tau, int(s_prev)


def _fits_compiled(params: BehrendParams) -> bool:
    return (
        _backend.USING_COMPILED
        and params.digit_width * params.d <= 60
        and params.N < (1 << 58)
    )


def _dp_window_fn(shifted: Sequence[int], r: int, params: BehrendParams):
    d, m, width = params.d, params.m, params.digit_width
    if _fits_compiled(params):
        arr = np.ascontiguousarray(shifted, dtype=np.int64)
        kern = _backend.compiled

        def fn(tau: int, w: int) -> int:
            return int(kern.window_sum(arr, tau, w, r, d, m, width))

        return fn
    values = list(shifted)

    def fn_pure(tau: int, w: int) -> int:
        return _backend.pure.window_sum(values, tau, w, r, d, m, width)

    return fn_pure


def _sparse_deltas(shifted: Sequence[int], members: Sequence[int]) -> np.ndarray:
    a = np.asarray(shifted, dtype=np.int64)
    q = np.asarray(members, dtype=np.int64)
    deltas = (a[:, None] - q[None, :]).ravel()
    deltas = deltas[deltas >= 0]
    deltas.sort()
    return deltas


def _sparse_window_fn(deltas: np.ndarray):
    def fn(tau: int, w: int) -> int:
        left = np.searchsorted(deltas, tau, side="left")
        right = np.searchsorted(deltas, tau + (1 << w), side="left")
        return int(right - left)

    return fn


def _resolve_engine(engine: str, n: int, sphere: int) -> str:
    if engine not in ("auto", "sparse", "dp"):
        raise ValueError(f"unknown engine {engine!r}")
    if engine != "auto":
        return engine
    return "sparse" if n * sphere <= _SPARSE_PRODUCT_LIMIT else "dp"


def find_shift(
    A: Iterable[int],
    r: int,
    params: BehrendParams,
    engine: str = "auto",
    on_step: Optional[OnStep] = None,
) -> ShiftResult:
    """Deterministically pick delta in [-N+1, N-1] making |(Q_r+delta) & A|
    meet the expectation bound.

    A must already be normalized into [-N+1, N-1]. Elements are lifted by
    N-1 so candidate shifts live in [0, 2**K) with 2**K the first power of
    two above 2(N-1); the greedy bit descent then maximizes the exact
    conditional expectation
    2**-k * sum over a of |Q_r & [a - tau - 2**k + 1, a - tau]|,
    one range count per element per candidate. ``on_step`` receives
    (bit, parent_sum, low_sum, high_sum) after every comparison.
    """
    items = sorted(set(A))
    if not items:
        raise ValueError("cannot shift against an empty set")
    N = params.N
    if items[0] < -N + 1 or items[-1] > N - 1:
        raise ValueError("set elements outside [-N+1, N-1]")
    sphere = q_size(r, params)
    if sphere == 0:
        raise ValueError(f"sphere of radius {r} is empty")
    off = N - 1
    shifted = [a + off for a in items]
    K = (2 * (N - 1)).bit_length()
    mode = _resolve_engine(engine, len(items), sphere)
    if mode == "sparse":
        deltas = _sparse_deltas(shifted, q_elements(r, params))
        window_fn = _sparse_window_fn(deltas)
    else:
        window_fn = _dp_window_fn(shifted, r, params)
    tau, hits = _descend(window_fn, K, on_step)
    return ShiftResult(delta=tau - off, hit_count=hits)


def extract_free_subset(
    A: Iterable[int],
    r: int,
    params: BehrendParams,
    engine: str = "auto",
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split A into (B, rest) where B = A & (Q_r + delta) for the shift
    chosen by ``find_shift``. B inherits freeness from the sphere."""
    items = sorted(set(A))
    res = find_shift(items, r, params, engine=engine)
    B = tuple(a for a in items if q_membership(a - res.delta, r, params))
    if len(B) != res.hit_count:
        raise RuntimeError(
            f"extraction mismatch: descent reported {res.hit_count}, found {len(B)}"
        )
    rest = tuple(a for a in items if not q_membership(a - res.delta, r, params))
    return B, rest


def _campaign_dp(shifted: list[int], r: int, params: BehrendParams,
                 cap: int, engine: str) -> Optional[list[tuple[int, ...]]]:
    parts: list[tuple[int, ...]] = []
    remaining = tuple(shifted)
    while remaining and len(parts) < cap:
        block, remaining = extract_free_subset(remaining, r, params, engine=engine)
        if not block:
            return None
        parts.append(block)
    return parts if not remaining else None


def _campaign_sparse(shifted: list[int], r: int, params: BehrendParams,
                     cap: int) -> Optional[list[tuple[int, ...]]]:
    """Incremental variant of the extraction loop: the difference multiset
    is maintained under deletions instead of rebuilt, which changes none
    of the window sums."""
    members = q_elements(r, params)
    q_arr = np.asarray(members, dtype=np.int64)
    off = params.N - 1
    K = (2 * (params.N - 1)).bit_length()
    alive = sorted(shifted)
    lifted = [a + off for a in alive]
    deltas = _sparse_deltas(lifted, members)
    parts: list[tuple[int, ...]] = []
    while alive and len(parts) < cap:
        tau, hits = _descend(_sparse_window_fn(deltas), K, None)
        delta = tau - off
        block = tuple(a for a in alive if q_membership(a - delta, r, params))
        if len(block) != hits:
            raise RuntimeError(
                f"extraction mismatch: descent reported {hits}, found {len(block)}"
            )
        if not block:
            return None
        parts.append(block)
        removed = set(block)
        alive = [a for a in alive if a not in removed]
        gone = np.asarray(
            sorted(
                int(b + off - q)
                for b in block
                for q in q_arr
                if b + off - q >= 0
            ),
            dtype=np.int64,
        )
        idx: list[int] = []
        i = 0
        while i < len(gone):
            j = i
            while j < len(gone) and gone[j] == gone[i]:
                j += 1
            base = int(np.searchsorted(deltas, gone[i], side="left"))
            idx.extend(range(base, base + (j - i)))
            i = j
        deltas = np.delete(deltas, idx)
    return parts if not alive else None


def partition_free(
    A: Iterable[int],
    gamma: int,
    delta: int,
    n0: Optional[int] = None,
    engine: str = "auto",
) -> FreePartition:
    """Partition A into (gamma, delta)-free parts.

    Elements in [-n0, n0] are lifted into [0, 2*n0] and repeatedly
    intersected with shifted spheres, densest radius first. Each
    extraction is guaranteed nonempty, so at most |A| rounds occur; the
    per-radius cap exists only to surface counting bugs. Radii are
    exhausted in density order before giving up.
    """
    items = sorted(set(A))
    if not items:
        raise ValueError("cannot partition an empty set")
    bound = max(abs(items[0]), abs(items[-1]))
    if n0 is None:
        n0 = bound
    elif bound > n0:
        raise ValueError(f"elements exceed declared bound {n0}")
    p = smallest_power_of_two_above(gamma + delta)
    N = max(2 * n0 + 1, p)
    params = make_params(N, gamma, delta)
    shifted = [a + n0 for a in items]
    for r, sphere in ranked_radii(params):
        cap = iteration_cap(len(items), sphere, N)
        mode = _resolve_engine(engine, len(items), sphere)
        if mode == "sparse":
            parts = _campaign_sparse(shifted, r, params, cap)
        else:
            parts = _campaign_dp(shifted, r, params, cap, engine)
        if parts is not None:
            return FreePartition(
                parts=tuple(tuple(b - n0 for b in part) for part in parts),
                gamma=gamma,
                delta=delta,
                source=tuple(items),
            )
    raise RuntimeError(
        "no radius emptied the set within its iteration cap; "
        "this indicates a range-counting bug"
    )


def is_free(S: Iterable[int], gamma: int, delta: int) -> bool:
    """True iff no distinct a, b, c in S satisfy
    gamma*a + delta*b = (gamma+delta)*c. Quadratic scan over ordered
    pairs with a hash lookup for the third element."""
    values = set(S)
    gd = gamma + delta
    for a in values:
        ga = gamma * a
        for b in values:
            if b == a:
                continue
            num = ga + delta * b
            if num % gd == 0:
                c = num // gd
                if c != a and c != b and c in values:
                    return False
    return True
