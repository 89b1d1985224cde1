"""Instance transformations between problem variants.

Each operation takes an instance and produces target instances plus an
exact witness back-mapping; a source instance is solvable iff at least
one target is, and any valid target witness converts into a valid source
witness. Universe growth is tracked honestly in every target's declared
bound and can be repaired by the bucket decomposition.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .backmap import (
    BackMap,
    BucketBackMap,
    ColorBackMap,
    CompositeBackMap,
    EncodeBackMap,
    IdentityBackMap,
    RescaleBackMap,
    ShiftBackMap,
)
from .core import Instance, Variant, VariantClass, Witness, checked_wide
from .partition import partition_free

__all__ = [
    "ReductionOutput",
    "Combination",
    "GammaTriple",
    "ColorFunction",
    "enumerate_combinations",
    "find_gammas",
    "solve_linear_triple",
    "shift_variant",
    "rescale_variant",
    "reduce_3_to_1",
    "reduce_1_to_3",
    "build_color_family",
    "decrease_universe",
    "full_chain",
    "identity_output",
]


@dataclass(frozen=True)
class ReductionOutput:
    """Targets plus the witness back-mapping and size accounting."""

    targets: tuple[Instance, ...]
    map_back: BackMap

    @property
    def sizes(self) -> tuple[int, ...]:
        """Per-target size, measured as the total element count."""
        return tuple(t.total_size for t in self.targets)

    @property
    def stats(self) -> tuple[int, tuple[int, ...]]:
        return len(self.targets), self.sizes

    def oracle_cost(self, epsilon: float) -> float:
        """Sum of size**(2 - epsilon) over targets, the quantity bounded
        by a subquadratic reduction's accounting requirement."""
        return float(sum(m ** (2.0 - epsilon) for m in self.sizes))


def identity_output(inst: Instance) -> ReductionOutput:
    return ReductionOutput((inst,), IdentityBackMap())


def _empty_output() -> ReductionOutput:
    return ReductionOutput((), IdentityBackMap())


def _require_non_trivial(variant: Variant, op: str) -> None:
    if variant.classification is not VariantClass.NON_TRIVIAL:
        raise ValueError(f"{op} requires a non-trivial variant")


def _require_parity(inst: Instance, parity: int, op: str) -> None:
    if inst.variant.parity != parity:
        raise ValueError(f"{op} requires a {parity}-partite instance")


# ---------------------------------------------------------------------------
# combinations and gamma coefficients


@dataclass(frozen=True)
class Combination:
    """Assignment of merged-set positions back to original sets, stored as
    (f(1), f(2), f(3)) with 1-based values."""

    f: tuple[int, int, int]

    @property
    def is_constant(self) -> bool:
        return self.f[0] == self.f[1] == self.f[2]


def _is_allowed(f: tuple[int, int, int], alpha: Sequence[int]) -> bool:
    # f must map every coefficient class onto itself.
    for i in range(3):
        cls = {j + 1 for j in range(3) if alpha[j] == alpha[i]}
        image = {f[j - 1] for j in cls}
        if image != cls:
            return False
    return True


def enumerate_combinations(alpha: Sequence[int]):
    """Classify all 27 position assignments as allowed, forbidden-constant
    or forbidden-nonconstant."""
    if any(a == 0 for a in alpha):
        raise ValueError("all coefficients must be nonzero")
    out = []
    for f in itertools.product((1, 2, 3), repeat=3):
        comb = Combination(f)
        if comb.is_constant:
            label = "forbidden-constant"
        elif _is_allowed(f, alpha):
            label = "allowed"
        else:
            label = "forbidden-nonconstant"
        out.append((comb, label))
    return out


@dataclass(frozen=True)
class GammaTriple:
    """Nonzero coefficients with sum(alpha_i * gamma_i) = 0 that give a
    nonzero value to every forbidden non-constant assignment."""

    gamma: tuple[int, int, int]


def find_gammas(alpha: Sequence[int]) -> GammaTriple:
    """Walk an integer line inside the plane sum(alpha_i*g_i) = 0 until a
    point avoids every forbidden assignment and every coordinate plane.

    The line through (a3, 0, -a1) and (0, a3, -a2) meets each bad plane
    in at most one point, so a small parameter always succeeds.
    """
    a1, a2, a3 = alpha
    if a1 == 0 or a2 == 0 or a3 == 0:
        raise ValueError("all coefficients must be nonzero")
    forbidden = [
        comb.f
        for comb, label in enumerate_combinations(alpha)
        if label == "forbidden-nonconstant"
    ]
    for s in range(1, 33):
        g = ((1 - s) * a3, s * a3, -((1 - s) * a1 + s * a2))
        if 0 in g:
            continue
        if any(
            a1 * g[f[0] - 1] + a2 * g[f[1] - 1] + a3 * g[f[2] - 1] == 0
            for f in forbidden
        ):
            continue
        assert a1 * g[0] + a2 * g[1] + a3 * g[2] == 0
        return GammaTriple(gamma=g)
    raise RuntimeError("no suitable gamma triple found on the search line")


# ---------------------------------------------------------------------------
# linear diophantine solutions


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, u, v) with a*u + b*v = g = gcd(|a|, |b|) >= 0."""
    if b == 0:
        if a >= 0:
            return a, 1, 0
        return -a, -1, 0
    g, u, v = _ext_gcd(b, a % b)
    return g, v, u - (a // b) * v


def _centered_mod(x: int, h: int) -> int:
    """Representative of x mod h inside (-h/2, h/2]."""
    y = x % h
    if 2 * y > h:
        y -= h
    return y


def solve_linear_triple(alpha: Sequence[int], t: int) -> tuple[int, int, int]:
    """Canonical integer solution of a1*y1 + a2*y2 + a3*y3 = t.

    Canonical means: the two-coefficient Bezout pair for (a1, a2) takes
    the representative with minimal |v| (ties toward the positive side),
    and y3 is reduced the same way modulo gcd(a1, a2) / gcd(all three).
    This keeps instance files byte-reproducible.
    """
    a1, a2, a3 = alpha
    if a1 == 0 or a2 == 0 or a3 == 0:
        raise ValueError("all coefficients must be nonzero")
    g12, _, v0 = _ext_gcd(a1, a2)
    v = _centered_mod(v0, abs(a1) // g12)
    u = (g12 - a2 * v) // a1
    g, _, w0 = _ext_gcd(g12, a3)
    if t % g != 0:
        raise ValueError(f"gcd {g} does not divide target {t}")
    y3 = _centered_mod(w0 * (t // g), g12 // g)
    W = (t - a3 * y3) // g12
    y1, y2 = u * W, v * W
    assert a1 * y1 + a2 * y2 + a3 * y3 == t
    return y1, y2, y3


# ---------------------------------------------------------------------------
# 3-partite conversions


def shift_variant(inst: Instance, t_target: int) -> ReductionOutput:
    """Translate the three sets so the target value moves to ``t_target``.

    The translation triple solves sum(alpha_i * y_i) = t_target - t and
    is canonical, so repeated runs emit identical files.
    """
    _require_parity(inst, 3, "shift_variant")
    _require_non_trivial(inst.variant, "shift_variant")
    alpha = inst.variant.alpha
    y = solve_linear_triple(alpha, t_target - inst.variant.t)
    grow = max(abs(v) for v in y)
    universe = checked_wide(inst.universe + grow)
    sets = tuple(
        tuple(x + yi for x in s) for s, yi in zip(inst.sets, y)
    )
    target = Instance(Variant(3, alpha, t_target), universe, sets)
    return ReductionOutput((target,), ShiftBackMap(offsets=y))


def rescale_variant(inst: Instance, beta: Sequence[int]) -> ReductionOutput:
    """Change coefficients from alpha to beta at t = 0 by scaling set i
    with alpha_i * lcm(beta) / beta_i (an integer by construction)."""
    _require_parity(inst, 3, "rescale_variant")
    _require_non_trivial(inst.variant, "rescale_variant")
    if inst.variant.t != 0:
        raise ValueError("rescale_variant requires t = 0")
    beta = tuple(int(b) for b in beta)
    if any(b == 0 for b in beta):
        raise ValueError("all target coefficients must be nonzero")
    alpha = inst.variant.alpha
    q = math.lcm(*(abs(b) for b in beta))
    factors = tuple(a * q // b for a, b in zip(alpha, beta))
    universe = checked_wide(inst.universe * max(abs(f) for f in factors))
    sets = tuple(
        tuple(sorted(x * f for x in s)) for s, f in zip(inst.sets, factors)
    )
    target = Instance(Variant(3, beta, 0), universe, sets)
    return ReductionOutput((target,), RescaleBackMap(factors=factors))


# ---------------------------------------------------------------------------
# 3-partite -> 1-partite


def _encode_set(sets, scale, residues):
    merged = set()
    for s, rho in zip(sets, residues):
        for x in s:
            merged.add(scale * x + rho)
    return tuple(sorted(merged))


def reduce_3_to_1(inst: Instance) -> ReductionOutput:
    """Merge the three sets into one while excluding cross-set confusion.

    Three regimes, dispatched on the variant:

    * t nonzero: translate to t = 0, then encode element x of set i as
      scale*x + C*gamma_i + y_i with scale = C**2; the residues absorb
      both the set tag and the translation, and no assignment of merged
      elements other than the intended ones can satisfy the equation.
    * t = 0, coefficient sum nonzero: encode as C*x + gamma_i; constant
      assignments die because gamma_i * sum(alpha) is never zero.
    * t = 0, coefficient sum zero: constant assignments cannot be ruled
      out by residues alone, so each set is first partitioned into parts
      free of the induced two-coefficient equation, and one target is
      emitted per triple of parts.
    """
    _require_parity(inst, 3, "reduce_3_to_1")
    _require_non_trivial(inst.variant, "reduce_3_to_1")
    alpha = inst.variant.alpha
    t = inst.variant.t
    gammas = find_gammas(alpha).gamma
    abs_sum = sum(abs(a) for a in alpha)
    if t != 0:
        y = solve_linear_triple(alpha, t)
        inner_universe = checked_wide(inst.universe + max(abs(v) for v in y))
        inner_sets = tuple(
            tuple(x - yi for x in s) for s, yi in zip(inst.sets, y)
        )
        inner = Instance(Variant(3, alpha, 0), inner_universe, inner_sets)
        big = max(max(abs(g) for g in gammas), max(abs(v) for v in y))
        C = checked_wide(1 + big * abs_sum)
        scale = checked_wide(C * C)
        residues = tuple(C * g + yi for g, yi in zip(gammas, y))
        universe = checked_wide(scale * inner_universe + max(abs(r) for r in residues))
        xs = _encode_set(inner_sets, scale, residues)
        target = Instance(Variant(1, alpha, t), universe, (xs,))
        encode = EncodeBackMap(
            scale=scale, residues=residues, alpha=alpha, t=0,
            source_sets=inner_sets,
        )
        undo_shift = ShiftBackMap(offsets=tuple(-v for v in y))
        return ReductionOutput(
            (target,),
            CompositeBackMap(parent=undo_shift, children=(encode,), counts=(1,)),
        )
    C = checked_wide(1 + max(abs(g) for g in gammas) * abs_sum)
    universe = checked_wide(C * inst.universe + max(abs(g) for g in gammas))
    encode = EncodeBackMap(
        scale=C, residues=gammas, alpha=alpha, t=0, source_sets=inst.sets,
    )
    if sum(alpha) != 0:
        xs = _encode_set(inst.sets, C, gammas)
        target = Instance(Variant(1, alpha, 0), universe, (xs,))
        return ReductionOutput((target,), encode)
    # coefficient sum zero: partition before merging
    if any(len(s) == 0 for s in inst.sets):
        return _empty_output()
    eff = alpha if sum(1 for a in alpha if a > 0) == 2 else tuple(-a for a in alpha)
    j1, j2 = [i for i in range(3) if eff[i] > 0]
    gam, delt = eff[j1], eff[j2]
    part_lists = [
        partition_free(s, gam, delt, n0=inst.universe).parts for s in inst.sets
    ]
    targets = []
    for p1, p2, p3 in itertools.product(*part_lists):
        xs = _encode_set((p1, p2, p3), C, gammas)
        targets.append(Instance(Variant(1, alpha, 0), universe, (xs,)))
    return ReductionOutput(tuple(targets), encode)


# ---------------------------------------------------------------------------
# 1-partite -> 3-partite


@dataclass(frozen=True)
class ColorFunction:
    """Three-coloring of indices from two bit positions.

    The two selected bits of an index form a signature in [0, 4); the
    signature is mapped to a color by the order-preserving bijection from
    [0, 4) minus ``dropped`` onto [0, 3) (the dropped value maps to 0).
    """

    bit_a: int
    bit_b: int
    dropped: int

    def __call__(self, index: int) -> int:
        sig = 2 * ((index >> self.bit_a) & 1) + ((index >> self.bit_b) & 1)
        if sig == self.dropped:
            return 0
        return sum(1 for v in range(4) if v != self.dropped and v < sig)


def build_color_family(n: int) -> tuple[ColorFunction, ...]:
    """Family of three-colorings of [0, n) such that every 3-element index
    set is rainbow under some member.

    For any distinct i, j, k there is a bit where one of them differs
    from the other two and a bit splitting that remaining pair; the two
    bits give the triple distinct signatures, and among the four maps
    dropping one signature value some map is injective on the three
    signatures present. Size is exactly 4 * ceil(log2 n)**2.
    """
    if n < 3:
        raise ValueError("need at least three indices")
    bits = (n - 1).bit_length()
    return tuple(
        ColorFunction(bit_a=a, bit_b=b, dropped=w)
        for a in range(bits)
        for b in range(bits)
        for w in range(4)
    )


def reduce_1_to_3(inst: Instance) -> ReductionOutput:
    """Split the single set into three per coloring and permutation.

    Each target's sets partition the source set, so target solutions use
    three distinct source elements; conversely any three distinct
    elements are separated by some coloring and land in the right
    positions under some permutation.
    """
    _require_parity(inst, 1, "reduce_1_to_3")
    xs = inst.sets[0]
    n = len(xs)
    if n < 3:
        return _empty_output()
    variant = Variant(3, inst.variant.alpha, inst.variant.t)
    targets = []
    for fn in build_color_family(n):
        classes: tuple[list[int], ...] = ([], [], [])
        for idx, x in enumerate(xs):
            classes[fn(idx)].append(x)
        for perm in itertools.permutations((0, 1, 2)):
            sets: list[tuple[int, ...]] = [(), (), ()]
            for color in range(3):
                sets[perm[color]] = tuple(classes[color])
            targets.append(Instance(variant, inst.universe, tuple(sets)))
    return ReductionOutput(tuple(targets), ColorBackMap())


# ---------------------------------------------------------------------------
# universe reduction


def decrease_universe(inst: Instance, c) -> ReductionOutput:
    """Shrink the universe by the factor c > 1 at the cost of a constant
    number of targets.

    Elements are cut into aligned buckets of width V (a multiple of
    alpha_3 below U / (2*c*sum|alpha|)); one target per occupied bucket
    triple removes the bucket base from the first two sets and applies
    the compensating correction to the third, which is then clipped to
    the shrunken range. Requires |t| <= U/(2c) so that true solutions
    survive the clip.
    """
    _require_parity(inst, 3, "decrease_universe")
    c = Fraction(c)
    if c <= 1:
        raise ValueError("shrink factor must exceed 1")
    alpha = inst.variant.alpha
    a1, a2, a3 = alpha
    if a3 == 0:
        raise ValueError("third coefficient must be nonzero")
    U = inst.universe
    abs_sum = sum(abs(a) for a in alpha)
    threshold = Fraction(U) / (2 * c * abs_sum)
    largest_below = (threshold.numerator - 1) // threshold.denominator
    V = (largest_below // abs(a3)) * abs(a3)
    if V < 1:
        raise ValueError(f"universe {U} too small to shrink by {c}")
    if abs(inst.variant.t) * 2 * c > U:
        raise ValueError("target value too large for this shrink factor")
    v_over_a3 = V // a3
    clip = Fraction(U) / (c * abs(a3))
    clip_bound = clip.numerator // clip.denominator
    new_universe = (Fraction(U) / c).numerator // (Fraction(U) / c).denominator
    buckets = []
    for s in inst.sets:
        grouped: dict[int, list[int]] = {}
        for x in s:
            grouped.setdefault(x // V, []).append(x)
        buckets.append(grouped)
    variant = Variant(3, alpha, inst.variant.t)
    targets = []
    triples = []
    for j1 in sorted(buckets[0]):
        s1 = tuple(x - V * j1 for x in buckets[0][j1])
        for j2 in sorted(buckets[1]):
            s2 = tuple(x - V * j2 for x in buckets[1][j2])
            base12 = a1 * j1 + a2 * j2
            for j3 in sorted(buckets[2]):
                adj = v_over_a3 * (base12 + a3 * j3)
                s3 = tuple(
                    y for y in (x - V * j3 + adj for x in buckets[2][j3])
                    if -clip_bound <= y <= clip_bound
                )
                if not s3:
                    continue
                targets.append(
                    Instance(variant, new_universe, (s1, s2, tuple(sorted(s3))))
                )
                triples.append((j1, j2, j3))
    return ReductionOutput(
        tuple(targets),
        BucketBackMap(v=V, v_over_a3=v_over_a3, alpha=alpha, triples=tuple(triples)),
    )


# ---------------------------------------------------------------------------
# composition


def _compose(
    out: ReductionOutput, step: Callable[[Instance], ReductionOutput]
) -> ReductionOutput:
    children = [step(t) for t in out.targets]
    targets = tuple(t for ch in children for t in ch.targets)
    return ReductionOutput(
        targets,
        CompositeBackMap(
            parent=out.map_back,
            children=tuple(ch.map_back for ch in children),
            counts=tuple(len(ch.targets) for ch in children),
        ),
    )


def _repair_universe(inst: Instance, cap: int) -> ReductionOutput:
    """Best-effort shrink back to the declared source bound; instances
    already inside the bound (or too small to decompose) pass through."""
    if inst.universe <= cap:
        return identity_output(inst)
    try:
        return decrease_universe(inst, Fraction(inst.universe, cap))
    except ValueError:
        return identity_output(inst)


def full_chain(inst: Instance, target_variant: Variant) -> ReductionOutput:
    """Compose the pipeline from the instance's variant to any other
    non-trivial variant.

    Order: split one set into three if needed, move t, change
    coefficients, move t again, repair the universe while still
    3-partite, then merge back to one set if needed. Stages that would
    be identities are skipped; a source variant equal to the target is
    returned unchanged.
    """
    src = inst.variant
    _require_non_trivial(src, "full_chain")
    _require_non_trivial(target_variant, "full_chain")
    if src == target_variant:
        return identity_output(inst)
    out = identity_output(inst)
    if src.parity == 1:
        out = _compose(out, reduce_1_to_3)
    if src.alpha == target_variant.alpha:
        if src.t != target_variant.t:
            out = _compose(out, lambda ins: shift_variant(ins, target_variant.t))
    else:
        if src.t != 0:
            out = _compose(out, lambda ins: shift_variant(ins, 0))
        out = _compose(out, lambda ins: rescale_variant(ins, target_variant.alpha))
        if target_variant.t != 0:
            out = _compose(out, lambda ins: shift_variant(ins, target_variant.t))
    out = _compose(out, lambda ins: _repair_universe(ins, inst.universe))
    if target_variant.parity == 1:
        out = _compose(out, reduce_3_to_1)
    return out
