"""Witness back-mappings.

Every reduction returns, along with its target instances, an object that
converts any valid target witness into a valid source witness. The
objects are plain data (no closures) so they can be serialized to JSON
and applied offline to witnesses produced by a separate solver run.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any

from .core import Witness

__all__ = [
    "BackMap",
    "IdentityBackMap",
    "ShiftBackMap",
    "RescaleBackMap",
    "ColorBackMap",
    "EncodeBackMap",
    "BucketBackMap",
    "CompositeBackMap",
    "backmap_to_jsonable",
    "backmap_from_jsonable",
]


class BackMap:
    """Base interface: ``map_back(target_index, witness) -> witness``."""

    kind = "base"

    def map_back(self, index: int, witness: Witness) -> Witness:
        raise NotImplementedError

    def __call__(self, index: int, witness: Witness) -> Witness:
        return self.map_back(index, witness)

    def _payload(self) -> dict[str, Any]:
        return {}


@dataclass(frozen=True)
class IdentityBackMap(BackMap):
    """Target equals source; witnesses pass through unchanged."""

    kind = "identity"

    def map_back(self, index, witness):
        return witness


@dataclass(frozen=True)
class ShiftBackMap(BackMap):
    """Inverts per-set translation: target sets were source + offsets."""

    offsets: tuple[int, int, int]
    kind = "shift"

    def map_back(self, index, witness):
        vals = tuple(v - o for v, o in zip(witness.values, self.offsets))
        return Witness(vals, (1, 2, 3))

    def _payload(self):
        return {"offsets": list(self.offsets)}


@dataclass(frozen=True)
class RescaleBackMap(BackMap):
    """Inverts per-set scaling: target sets were source * factors."""

    factors: tuple[int, int, int]
    kind = "rescale"

    def map_back(self, index, witness):
        vals = []
        for v, f in zip(witness.values, self.factors):
            if v % f != 0:
                raise ValueError(f"witness value {v} not divisible by factor {f}")
            vals.append(v // f)
        return Witness(tuple(vals), (1, 2, 3))

    def _payload(self):
        return {"factors": list(self.factors)}


@dataclass(frozen=True)
class ColorBackMap(BackMap):
    """Inverts the coloring split: target sets partition the source set,
    so values carry over and only the provenance collapses."""

    kind = "color"

    def map_back(self, index, witness):
        return Witness(witness.values, (1, 1, 1))


@dataclass(frozen=True)
class EncodeBackMap(BackMap):
    """Inverts the merge of three sets into one via z = scale*x + residue_i.

    Residue magnitudes are below scale/2, so the nearest multiple of
    ``scale`` identifies x and the leftover identifies the candidate
    origins (several when two positions share both coefficient and
    residue). A valid assignment of distinct origins consistent with
    coefficients, membership, and the source equation is then searched
    over the six permutations.
    """

    scale: int
    residues: tuple[int, int, int]
    alpha: tuple[int, int, int]
    t: int
    source_sets: tuple[tuple[int, ...], ...]
    kind = "encode"

    def _decode(self, z: int, lookups) -> tuple[int, list[int]]:
        q = self.scale
        x = (2 * z + q) // (2 * q)
        rho = z - q * x
        cands = [
            i for i in range(3)
            if self.residues[i] == rho and x in lookups[i]
        ]
        return x, cands

    def map_back(self, index, witness):
        lookups = tuple(frozenset(s) for s in self.source_sets)
        decoded = [self._decode(z, lookups) for z in witness.values]
        alpha = self.alpha
        for perm in itertools.permutations((0, 1, 2)):
            if not all(perm[i] in decoded[i][1] for i in range(3)):
                continue
            if not all(alpha[perm[i]] == alpha[i] for i in range(3)):
                continue
            vals: list[int] = [0, 0, 0]
            for i in range(3):
                vals[perm[i]] = decoded[i][0]
            if sum(a * v for a, v in zip(alpha, vals)) == self.t:
                return Witness(tuple(vals), (1, 2, 3))
        raise ValueError("target witness does not decode to a source witness")

    def _payload(self):
        return {
            "scale": self.scale,
            "residues": list(self.residues),
            "alpha": list(self.alpha),
            "t": self.t,
            "source_sets": [list(s) for s in self.source_sets],
        }


@dataclass(frozen=True)
class BucketBackMap(BackMap):
    """Inverts the bucket decomposition: per-target bucket indices restore
    the translations removed from the first two sets and the combined
    correction applied to the third."""

    v: int
    v_over_a3: int
    alpha: tuple[int, int, int]
    triples: tuple[tuple[int, int, int], ...]
    kind = "bucket"

    def map_back(self, index, witness):
        j1, j2, j3 = self.triples[index]
        a1, a2, a3 = self.alpha
        x1 = witness.values[0] + self.v * j1
        x2 = witness.values[1] + self.v * j2
        x3 = (
            witness.values[2]
            + self.v * j3
            - self.v_over_a3 * (a1 * j1 + a2 * j2 + a3 * j3)
        )
        return Witness((x1, x2, x3), (1, 2, 3))

    def _payload(self):
        return {
            "v": self.v,
            "v_over_a3": self.v_over_a3,
            "alpha": list(self.alpha),
            "triples": [list(t) for t in self.triples],
        }


@dataclass(frozen=True)
class CompositeBackMap(BackMap):
    """Composition across one expansion stage: parent target i was itself
    reduced, contributing ``counts[i]`` flat targets."""

    parent: BackMap
    children: tuple[BackMap, ...]
    counts: tuple[int, ...]
    kind = "composite"

    def map_back(self, index, witness):
        remaining = index
        for parent_idx, count in enumerate(self.counts):
            if remaining < count:
                mid = self.children[parent_idx].map_back(remaining, witness)
                return self.parent.map_back(parent_idx, mid)
            remaining -= count
        raise IndexError(f"target index {index} out of range")

    def _payload(self):
        return {
            "parent": backmap_to_jsonable(self.parent),
            "children": [backmap_to_jsonable(c) for c in self.children],
            "counts": list(self.counts),
        }


_REGISTRY = {
    cls.kind: cls
    for cls in (
        IdentityBackMap,
        ShiftBackMap,
        RescaleBackMap,
        ColorBackMap,
        EncodeBackMap,
        BucketBackMap,
        CompositeBackMap,
    )
}


def backmap_to_jsonable(bm: BackMap) -> dict[str, Any]:
    return {"kind": bm.kind, **bm._payload()}


def backmap_from_jsonable(data: dict[str, Any]) -> BackMap:
    kind = data.get("kind")
    if kind not in _REGISTRY:
        raise ValueError(f"unknown back-map kind {kind!r}")
    if kind == "identity":
        return IdentityBackMap()
    if kind == "shift":
        return ShiftBackMap(offsets=tuple(data["offsets"]))
    if kind == "rescale":
        return RescaleBackMap(factors=tuple(data["factors"]))
    if kind == "color":
        return ColorBackMap()
    if kind == "encode":
        return EncodeBackMap(
            scale=data["scale"],
            residues=tuple(data["residues"]),
            alpha=tuple(data["alpha"]),
            t=data["t"],
            source_sets=tuple(tuple(s) for s in data["source_sets"]),
        )
    if kind == "bucket":
        return BucketBackMap(
            v=data["v"],
            v_over_a3=data["v_over_a3"],
            alpha=tuple(data["alpha"]),
            triples=tuple(tuple(t) for t in data["triples"]),
        )
    return CompositeBackMap(
        parent=backmap_from_jsonable(data["parent"]),
        children=tuple(backmap_from_jsonable(c) for c in data["children"]),
        counts=tuple(data["counts"]),
    )
