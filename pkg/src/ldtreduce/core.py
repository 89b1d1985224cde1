"""Domain types for three-variable linear degeneracy testing.

A *variant* is the parameter tuple (parity, coefficients, target): given
coefficients (a1, a2, a3) and a target t, the 1-partite problem asks for
three distinct elements x1, x2, x3 of a single set with
a1*x1 + a2*x2 + a3*x3 = t, and the 3-partite problem asks for one element
from each of three sets satisfying the same equation.

An *instance* couples a variant with its input set(s) over a bounded
integer universe [-U, U], and a *witness* is a solution triple together
with the index of the set each value came from.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "VariantClass",
    "Variant",
    "Instance",
    "Witness",
    "classify_variant",
    "verify_witness",
    "checked_wide",
    "WIDE_MAX",
]

# Reduction arithmetic is exact (Python integers), but blowing past the
# 128-bit envelope indicates a runaway universe rescaling, so it is
# treated as an error rather than allowed to grow silently.
WIDE_MAX = (1 << 127) - 1


def checked_wide(value: int) -> int:
    """Return ``value`` unchanged, or raise if it leaves the 128-bit range."""
    if value > WIDE_MAX or value < -WIDE_MAX - 1:
        raise OverflowError(f"value exceeds 128-bit range: {value}")
    return value


class VariantClass(enum.Enum):
    NON_TRIVIAL = "non-trivial"
    TRIVIAL_ZERO_COEFFICIENT = "trivial-zero-coefficient"
    TRIVIAL_GCD = "trivial-gcd"


def classify_variant(alpha: Sequence[int], t: int) -> VariantClass:
    """Classify a coefficient tuple.

    A variant is trivially easy when some coefficient is zero (the
    residual equation has at most two unknowns) and trivially infeasible
    when t is nonzero but not divisible by gcd(a1, a2, a3). Everything
    else is non-trivial. The zero-coefficient case takes precedence, so
    the classification is unique.
    """
    a1, a2, a3 = alpha
    if a1 == 0 or a2 == 0 or a3 == 0:
        return VariantClass.TRIVIAL_ZERO_COEFFICIENT
    g = math.gcd(abs(a1), abs(a2), abs(a3))
    if t != 0 and t % g != 0:
        return VariantClass.TRIVIAL_GCD
    return VariantClass.NON_TRIVIAL


@dataclass(frozen=True)
class Variant:
    """Problem parameterization: parity (1 or 3), coefficients, target."""

    parity: int
    alpha: tuple[int, int, int]
    t: int

    def __post_init__(self):
        if self.parity not in (1, 3):
            raise ValueError(f"parity must be 1 or 3, got {self.parity}")
        if len(self.alpha) != 3:
            raise ValueError("alpha must have exactly three coefficients")
        object.__setattr__(self, "alpha", tuple(int(a) for a in self.alpha))
        object.__setattr__(self, "t", int(self.t))

    @property
    def classification(self) -> VariantClass:
        return classify_variant(self.alpha, self.t)

    @property
    def is_non_trivial(self) -> bool:
        return self.classification is VariantClass.NON_TRIVIAL


@dataclass(frozen=True)
class Instance:
    """A variant plus its input sets over the universe [-U, U].

    ``sets`` holds one strictly increasing tuple for parity 1 and three
    for parity 3. Duplicates are rejected outright: with multisets the
    distinctness semantics of the 1-partite problem would change, so a
    repeated element is treated as caller error.
    """

    variant: Variant
    universe: int
    sets: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.universe < 0:
            raise ValueError("universe bound must be nonnegative")
        if len(self.sets) != self.variant.parity:
            raise ValueError(
                f"parity {self.variant.parity} instance needs "
                f"{self.variant.parity} sets, got {len(self.sets)}"
            )
        for seq in self.sets:
            for prev, cur in zip(seq, seq[1:]):
                if prev >= cur:
                    raise ValueError("set elements must be strictly increasing")
            for e in seq:
                if abs(e) > self.universe:
                    raise ValueError(
                        f"element {e} outside universe [-{self.universe}, {self.universe}]"
                    )

    @classmethod
    def build(
        cls, variant: Variant, universe: int, sets: Iterable[Iterable[int]]
    ) -> "Instance":
        """Canonicalize unordered input sets (sort, reject duplicates)."""
        packed = []
        for raw in sets:
            seq = sorted(int(x) for x in raw)
            for prev, cur in zip(seq, seq[1:]):
                if prev == cur:
                    raise ValueError(f"duplicate element {cur} in input set")
            packed.append(tuple(seq))
        return cls(variant, universe, tuple(packed))

    @classmethod
    def one_partite(cls, alpha, t, universe, xs) -> "Instance":
        return cls.build(Variant(1, tuple(alpha), t), universe, [xs])

    @classmethod
    def three_partite(cls, alpha, t, universe, a1, a2, a3) -> "Instance":
        return cls.build(Variant(3, tuple(alpha), t), universe, [a1, a2, a3])

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.sets)

    @property
    def total_size(self) -> int:
        return sum(len(s) for s in self.sets)


@dataclass(frozen=True)
class Witness:
    """A solution triple with provenance.

    ``origins`` records which set each value came from: always (1, 1, 1)
    for 1-partite instances and exactly (1, 2, 3) for 3-partite ones.
    """

    values: tuple[int, int, int]
    origins: tuple[int, int, int] = (1, 1, 1)

    def __post_init__(self):
        if len(self.values) != 3 or len(self.origins) != 3:
            raise ValueError("witness needs exactly three values and origins")
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        object.__setattr__(self, "origins", tuple(int(o) for o in self.origins))


def verify_witness(inst: Instance, w: Witness) -> bool:
    """Check every witness invariant against ``inst``; never raises."""
    alpha = inst.variant.alpha
    if sum(a * v for a, v in zip(alpha, w.values)) != inst.variant.t:
        return False
    if inst.variant.parity == 1:
        if w.origins != (1, 1, 1):
            return False
        x = set(inst.sets[0])
        if len(set(w.values)) != 3:
            return False
        return all(v in x for v in w.values)
    if w.origins != (1, 2, 3):
        return False
    return all(v in set(inst.sets[o - 1]) for v, o in zip(w.values, w.origins))
