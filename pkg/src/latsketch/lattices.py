"""Join-semilattice contracts and the two concrete lattices used here."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable


@dataclass(frozen=True)
class Lattice:
    """A lattice given by its operations; elements stay opaque.

    ``join``/``meet`` must be commutative, associative and idempotent,
    satisfy absorption, and ``bottom`` must be the identity of join.
    ``leq(x, y)`` must agree with ``join(x, y) == y``. Instances are
    immutable and freely shareable; all operations are pure.
    """

    name: str
    join: Callable[[Any, Any], Any]
    meet: Callable[[Any, Any], Any]
    bottom: Any
    leq: Callable[[Any, Any], bool]


#: Natural numbers under <=; join is max, meet is min, bottom is 0.
NAT = Lattice("nat", join=max, meet=min, bottom=0, leq=lambda a, b: a <= b)

#: Two-point chain False < True; join is or, meet is and.
BOOL = Lattice(
    "bool",
    join=lambda a, b: a or b,
    meet=lambda a, b: a and b,
    bottom=False,
    leq=lambda a, b: (not a) or b,
)

_BUILTIN = {"nat": NAT, "bool": BOOL}


def resolve_lattice(lattice) -> Lattice:
    """Turn "nat"/"bool" or a Lattice instance into a Lattice."""
    if isinstance(lattice, Lattice):
        return lattice
    if isinstance(lattice, str) and lattice in _BUILTIN:
        return _BUILTIN[lattice]
    raise ValueError(f"unknown lattice {lattice!r}; expected 'nat', 'bool' or a Lattice")


def check_lattice_laws(lattice: Lattice, samples) -> list[str]:
    """Check the lattice axioms on sampled element triples.

    Returns one message per violated law/triple pair; an empty list
    means every sampled triple satisfied commutativity, associativity,
    idempotence, absorption, the bottom identity, and the agreement of
    ``leq`` with both operations. Violations are data, not errors.
    """
    samples = list(samples)
    if not samples:
        raise ValueError("samples must be nonempty")
    join, meet, bot, leq = lattice.join, lattice.meet, lattice.bottom, lattice.leq
    report = []
    for x, y, z in samples:
        checks = [
            ("join not commutative", join(x, y) == join(y, x)),
            ("meet not commutative", meet(x, y) == meet(y, x)),
            ("join not associative", join(x, join(y, z)) == join(join(x, y), z)),
            ("meet not associative", meet(x, meet(y, z)) == meet(meet(x, y), z)),
            ("join not idempotent", join(x, x) == x),
            ("meet not idempotent", meet(x, x) == x),
            ("absorption join(x, meet(x,y)) != x", join(x, meet(x, y)) == x),
            ("absorption meet(x, join(x,y)) != x", meet(x, join(x, y)) == x),
            ("bottom is not the join identity", join(bot, x) == x),
            ("leq disagrees with join", leq(x, y) == (join(x, y) == y)),
            ("leq disagrees with meet", leq(x, y) == (meet(x, y) == x)),
        ]
        for message, ok in checks:
            if not ok:
                report.append(f"{message} at ({x!r}, {y!r}, {z!r})")
    return report
