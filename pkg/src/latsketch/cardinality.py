"""Distinct-symbol estimation used to size the sketch for a pattern.

A rough estimate is all the sizing rule needs: too high merely wastes a
few buckets, too low merely costs precision, and neither affects search
correctness. Short patterns therefore just report their length; long
ones run a single-pass first-zero-bit sketch with stochastic averaging.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .hashing import MASK64, mix64

_FM_BIAS = 0.77351          # first-zero-bit bias correction
_REGISTERS = 16             # stochastic-averaging registers (power of two)
_REGISTER_BITS = 4
_LENGTH_CUTOFF = 64         # up to this length the length bound is the estimate
_SALT_ROLE = 0x8BB84B93962EACC9


def _as_code_point(symbol) -> int:
    if isinstance(symbol, str):
        return ord(symbol)
    return int(symbol)


def exact_distinct(symbols) -> int:
    """Exact distinct count: the oracle the estimator is judged against."""
    return len(set(symbols))


@dataclass(frozen=True)
class DistinctEstimate:
    """A distinct-count estimate plus the bound it may never exceed."""

    estimate: float
    upper_bound: int
    method: str  # "length-bound" | "probabilistic"

    @property
    def for_sizing(self) -> int:
        """Integer fed downstream: ceil, clamped to [1, upper_bound]."""
        if self.upper_bound == 0:
            return 0
        return max(1, min(math.ceil(self.estimate), self.upper_bound))


def estimate_distinct(symbols, seed: int = 0) -> DistinctEstimate:
    """Single-pass, constant-space distinct-count estimate.

    Patterns of at most 64 symbols report their length (a safe upper
    bound; the probabilistic machinery only pays off on long inputs).
    Longer inputs use 16 first-zero-bit registers selected by the low
    hash bits, with the standard bias constant, clamped to the length
    bound. Deterministic for a given seed; memory is independent of
    both the pattern length and the alphabet.
    """
    try:
        length = len(symbols)
    except TypeError:
        symbols = list(symbols)
        length = len(symbols)
    if length == 0:
        return DistinctEstimate(0.0, 0, "length-bound")
    if length <= _LENGTH_CUTOFF:
        return DistinctEstimate(float(length), length, "length-bound")

    salt = mix64((int(seed) & MASK64) ^ _SALT_ROLE)
    bitmaps = [0] * _REGISTERS
    for s in symbols:
        h = mix64(_as_code_point(s) ^ salt)
        reg = h & (_REGISTERS - 1)
        rest = h >> _REGISTER_BITS
        if rest == 0:
            rho = 64 - _REGISTER_BITS
        else:
            rho = (rest & -rest).bit_length() - 1
        bitmaps[reg] |= 1 << rho

    total_first_zero = 0
    for bits in bitmaps:
        r = 0
        while bits & 1:
            bits >>= 1
            r += 1
        total_first_zero += r
    estimate = (_REGISTERS / _FM_BIAS) * 2.0 ** (total_first_zero / _REGISTERS)
    estimate = max(1.0, min(estimate, float(length)))
    return DistinctEstimate(estimate, length, "probabilistic")
