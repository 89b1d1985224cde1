"""Baseline solvers: cubic oracle, quadratic hash scan, near-linear pair solver.

The cubic enumeration is the ground truth used by every verification
campaign; the quadratic solver is the workhorse applied to reduction
targets; the pair solver covers variants with a zero coefficient, where
the residual equation has at most two unknowns.
"""

from __future__ import annotations

from typing import Optional

from .core import Instance, Variant, VariantClass, Witness

__all__ = ["solve_brute_force", "solve_quadratic", "solve_pair"]


def solve_brute_force(inst: Instance) -> Optional[Witness]:
    """Exhaustive cubic search, returning the lexicographically smallest
    witness by value triple so the output is reproducible everywhere.
    """
    a1, a2, a3 = inst.variant.alpha
    t = inst.variant.t
    if inst.variant.parity == 1:
        xs = inst.sets[0]
        for x1 in xs:
            for x2 in xs:
                if x2 == x1:
                    continue
                partial = t - a1 * x1 - a2 * x2
                for x3 in xs:
                    if x3 == x1 or x3 == x2:
                        continue
                    if a3 * x3 == partial:
                        return Witness((x1, x2, x3), (1, 1, 1))
        return None
    s1, s2, s3 = inst.sets
    for x1 in s1:
        for x2 in s2:
            partial = t - a1 * x1 - a2 * x2
            for x3 in s3:
                if a3 * x3 == partial:
                    return Witness((x1, x2, x3), (1, 2, 3))
    return None


def solve_quadratic(inst: Instance) -> Optional[Witness]:
    """Quadratic solver: index {a3 * x3} in a hash table, scan all pairs.

    Two-pointer scanning is only sound for unit coefficients, so the
    general form indexes the third term instead. Since a3 is nonzero, the
    map from x3 to a3*x3 is injective and each probe has at most one
    candidate. Only non-trivial variants are accepted.
    """
    if inst.variant.classification is not VariantClass.NON_TRIVIAL:
        raise ValueError(
            f"solve_quadratic requires a non-trivial variant, got "
            f"{inst.variant.classification.value}"
        )
    a1, a2, a3 = inst.variant.alpha
    t = inst.variant.t
    if inst.variant.parity == 1:
        xs = inst.sets[0]
        third = {a3 * x: x for x in xs}
        for x1 in xs:
            base = t - a1 * x1
            for x2 in xs:
                if x2 == x1:
                    continue
                x3 = third.get(base - a2 * x2)
                if x3 is not None and x3 != x1 and x3 != x2:
                    return Witness((x1, x2, x3), (1, 1, 1))
        return None
    s1, s2, s3 = inst.sets
    third = {a3 * x: x for x in s3}
    for x1 in s1:
        base = t - a1 * x1
        for x2 in s2:
            x3 = third.get(base - a2 * x2)
            if x3 is not None:
                return Witness((x1, x2, x3), (1, 2, 3))
    return None


def solve_pair(inst: Instance) -> Optional[Witness]:
    """Near-linear solver for the zero-coefficient trivial case.

    The positions with zero coefficients are free: any element works
    there (for 1-partite instances it must still be distinct from the
    others). The remaining equation in at most two unknowns is solved by
    sorting and walking two pointers.
    """
    if inst.variant.classification is not VariantClass.TRIVIAL_ZERO_COEFFICIENT:
        raise ValueError("solve_pair requires a variant with a zero coefficient")
    alpha = inst.variant.alpha
    t = inst.variant.t
    free = [i for i in range(3) if alpha[i] == 0]
    bound = [i for i in range(3) if alpha[i] != 0]
    if inst.variant.parity == 3:
        return _pair_three_partite(inst, free, bound, t)
    return _pair_one_partite(inst, free, bound, t)


def _pair_three_partite(inst, free, bound, t):
    alpha = inst.variant.alpha
    vals: list[Optional[int]] = [None, None, None]
    for i in free:
        if not inst.sets[i]:
            return None
        vals[i] = inst.sets[i][0]
    if len(bound) == 0:
        if t != 0:
            return None
    elif len(bound) == 1:
        i = bound[0]
        if t % alpha[i] != 0 or t // alpha[i] not in set(inst.sets[i]):
            return None
        vals[i] = t // alpha[i]
    else:
        i, j = bound
        got = _two_sum(
            [(alpha[i] * x, x) for x in inst.sets[i]],
            [(alpha[j] * x, x) for x in inst.sets[j]],
            t,
        )
        if got is None:
            return None
        vals[i], vals[j] = got
    return Witness(tuple(vals), (1, 2, 3))


def _pair_one_partite(inst, free, bound, t):
    alpha = inst.variant.alpha
    xs = inst.sets[0]
    if len(xs) < 3:
        return None
    if len(bound) == 0:
        if t != 0:
            return None
        return Witness((xs[0], xs[1], xs[2]), (1, 1, 1))
    if len(bound) == 1:
        i = bound[0]
        if t % alpha[i] != 0:
            return None
        x = t // alpha[i]
        if x not in set(xs):
            return None
        others = [v for v in xs if v != x][:2]
        vals = [None, None, None]
        vals[i] = x
        for pos, v in zip(free, others):
            vals[pos] = v
        return Witness(tuple(vals), (1, 1, 1))
    i, j = bound
    terms_i = [(alpha[i] * x, x) for x in xs]
    terms_j = [(alpha[j] * x, x) for x in xs]
    got = _two_sum(terms_i, terms_j, t, distinct=True)
    if got is None:
        return None
    xi, xj = got
    rest = next(v for v in xs if v != xi and v != xj)
    vals = [None, None, None]
    vals[i], vals[j], vals[free[0]] = xi, xj, rest
    return Witness(tuple(vals), (1, 1, 1))


def _two_sum(left, right, t, distinct=False):
    """Two-pointer scan for u + v = t over (key, element) lists.

    Keys are injective images of set elements, so each left entry has at
    most one matching right entry. With ``distinct`` set, a match that
    pairs an element with itself is skipped; this is what makes equations
    like 2*x2 - 2*x3 = 0 correctly unsolvable over a set.
    """
    left = sorted(left)
    right = sorted(right)
    lo, hi = 0, len(right) - 1
    while lo < len(left) and hi >= 0:
        s = left[lo][0] + right[hi][0]
        if s == t:
            if distinct and left[lo][1] == right[hi][1]:
                lo += 1
                continue
            return left[lo][1], right[hi][1]
        if s < t:
            lo += 1
        else:
            hi -= 1
    return None
