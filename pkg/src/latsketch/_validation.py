"""Input validation helpers shared across the package."""

from __future__ import annotations

import numpy as np

from .hashing import key_to_u64
from .lattices import Lattice


def check_count(name: str, value, minimum: int = 0) -> int:
    """Coerce to int and enforce a lower bound."""
    if not isinstance(value, (int, np.integer)):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    value = int(value)
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return value


def check_support(X, y, lattice: Lattice):
    """Validate support pairs: distinct keys, no bottom values.

    Returns (keys, values) as lists. Keys must be pairwise distinct and
    every value must differ from the lattice bottom, since bottom-valued
    pairs carry no information and are excluded from the support.
    """
    keys = list(X)
    values = list(y)
    if len(keys) != len(values):
        raise ValueError(f"X and y length mismatch: {len(keys)} != {len(values)}")
    seen = set()
    for k in keys:
        h = key_to_u64(k)
        if h in seen:
            raise ValueError(f"duplicate key in support: {k!r}")
        seen.add(h)
    for k, v in zip(keys, values):
        if v == lattice.bottom:
            raise ValueError(
                f"support value for key {k!r} equals the lattice bottom "
                f"({lattice.bottom!r}); bottom-valued pairs are redundant"
            )
    return keys, values


def check_value(v, lattice: Lattice):
    """Reject bottom values on insert."""
    if v == lattice.bottom:
        raise ValueError(
            f"cannot insert the lattice bottom ({lattice.bottom!r}); "
            "it is the implicit default of every key"
        )
    return v
