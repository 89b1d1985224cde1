"""Text serialization of instances and witnesses.

Instance files carry one header line followed by one line of integers
per set::

    3LDT p=3 alpha=1,1,-2 t=0 U=1000
    1 5 9
    -4 0 2
    3 7 11

Witness lines look like::

    WITNESS x1=1 x2=5 x3=3 origins=1,2,3

All files are UTF-8 with LF line endings and decimal integers.
"""

from __future__ import annotations

import re

from .core import Instance, Variant, Witness

__all__ = [
    "format_instance",
    "parse_instance",
    "format_witness",
    "parse_witness",
    "parse_integer_set",
]

_HEADER_RE = re.compile(
    r"^3LDT\s+p=(?P<p>[13])\s+alpha=(?P<alpha>-?\d+,-?\d+,-?\d+)"
    r"\s+t=(?P<t>-?\d+)\s+U=(?P<u>\d+)\s*$"
)


def format_instance(inst: Instance) -> str:
    a = ",".join(str(v) for v in inst.variant.alpha)
    lines = [f"3LDT p={inst.variant.parity} alpha={a} t={inst.variant.t} U={inst.universe}"]
    for seq in inst.sets:
        lines.append(" ".join(str(x) for x in seq))
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> Instance:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty instance file")
    m = _HEADER_RE.match(lines[0].strip())
    if m is None:
        raise ValueError(f"malformed instance header: {lines[0]!r}")
    parity = int(m.group("p"))
    alpha = tuple(int(v) for v in m.group("alpha").split(","))
    t = int(m.group("t"))
    universe = int(m.group("u"))
    body = lines[1:]
    if len(body) != parity:
        raise ValueError(f"expected {parity} set lines, found {len(body)}")
    sets = [[int(tok) for tok in ln.split()] for ln in body]
    return Instance.build(Variant(parity, alpha, t), universe, sets)


def format_witness(w: Witness) -> str:
    x1, x2, x3 = w.values
    o = ",".join(str(v) for v in w.origins)
    return f"WITNESS x1={x1} x2={x2} x3={x3} origins={o}\n"


_WITNESS_RE = re.compile(
    r"^WITNESS\s+x1=(-?\d+)\s+x2=(-?\d+)\s+x3=(-?\d+)\s+origins=([123],[123],[123])\s*$"
)


def parse_witness(text: str) -> Witness:
    m = _WITNESS_RE.match(text.strip())
    if m is None:
        raise ValueError(f"malformed witness line: {text!r}")
    values = tuple(int(m.group(i)) for i in (1, 2, 3))
    origins = tuple(int(v) for v in m.group(4).split(","))
    return Witness(values, origins)


def parse_integer_set(text: str) -> list[int]:
    """Parse a whitespace-separated integer file, rejecting duplicates."""
    values = [int(tok) for tok in text.split()]
    seen = set()
    for v in values:
        if v in seen:
            raise ValueError(f"duplicate element {v} in set file")
        seen.add(v)
    return values
